#include "liqshift/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liqshift/errors.hpp"

namespace liqshift {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

BfgsResult minimize_bfgs(const Objective& objective, std::vector<double> x0, const BfgsOptions& opts) {
    const std::size_t n = x0.size();
    if (!opts.frozen.empty() && opts.frozen.size() != n) throw InvalidConfig("frozen mask has the wrong length");
    auto is_frozen = [&](std::size_t i) { return !opts.frozen.empty() && opts.frozen[i]; };
    for (auto& v : x0) v = std::clamp(v, opts.lower, opts.upper);

    BfgsResult res;
    res.x = std::move(x0);
    std::vector<double> g(n, 0.0);
    res.f = objective(res.x, g);
    if (!std::isfinite(res.f)) throw InvalidConfig("objective is not finite at the starting point");

    // Inverse Hessian approximation, row-major.
    std::vector<double> H(n * n, 0.0);
    auto reset_h = [&] {
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
    };
    reset_h();
    bool h_is_identity = true;

    std::vector<bool> active(n, false);
    auto projected_norm = [&] {
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool at_lo = res.x[i] <= opts.lower && g[i] > 0.0;
            const bool at_hi = res.x[i] >= opts.upper && g[i] < 0.0;
            active[i] = is_frozen(i) || at_lo || at_hi;
            if (!active[i]) norm = std::max(norm, std::abs(g[i]));
        }
        return norm;
    };

    std::vector<double> d(n), x_new(n), g_new(n), s(n), y(n), Hy(n);
    int small_steps = 0;
    for (res.iterations = 0; res.iterations < opts.max_iters; ++res.iterations) {
        res.grad_norm = projected_norm();
        if (res.grad_norm < opts.grad_tol) {
            res.converged = true;
            return res;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            if (!active[i]) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (!active[j]) v -= H[i * n + j] * g[j];
                }
            }
            d[i] = v;
        }
        if (dot(d, g) >= 0.0) {
            reset_h();
            h_is_identity = true;
            for (std::size_t i = 0; i < n; ++i) d[i] = active[i] ? 0.0 : -g[i];
        }

        double t = h_is_identity ? std::min(1.0, 1.0 / std::max(res.grad_norm, 1e-300)) : 1.0;
        bool accepted = false;
        double f_new = 0.0;
        for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = std::clamp(res.x[i] + t * d[i], opts.lower, opts.upper);
            double decrease = 0.0;
            for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (x_new[i] - res.x[i]);
            f_new = objective(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= res.f + 1e-4 * decrease) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (!h_is_identity) {
                reset_h();
                h_is_identity = true;
                continue;
            }
            // No descent along the steepest direction: numerically stationary.
            res.converged = res.grad_norm < std::sqrt(opts.grad_tol);
            return res;
        }

        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - res.x[i];
            y[i] = g_new[i] - g[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
            if (h_is_identity) {
                // Scale the initial inverse Hessian before the first update.
                const double scale = sy / dot(y, y);
                for (std::size_t i = 0; i < n; ++i) H[i * n + i] = scale;
            }
            for (std::size_t i = 0; i < n; ++i) {
                double v = 0.0;
                for (std::size_t j = 0; j < n; ++j) v += H[i * n + j] * y[j];
                Hy[i] = v;
            }
            const double yHy = dot(y, Hy);
            const double r = 1.0 / sy;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    H[i * n + j] += (1.0 + yHy * r) * r * s[i] * s[j] - r * (Hy[i] * s[j] + s[i] * Hy[j]);
                }
            }
            h_is_identity = false;
        }

        const double change = res.f - f_new;
        res.x.swap(x_new);
        g.swap(g_new);
        res.f = f_new;
        small_steps = change <= opts.f_tol * (1.0 + std::abs(res.f)) ? small_steps + 1 : 0;
        if (small_steps >= 3) {
            res.grad_norm = projected_norm();
            res.converged = true;
            ++res.iterations;
            return res;
        }
    }
    res.grad_norm = projected_norm();
    res.converged = res.grad_norm < opts.grad_tol;
    return res;
}

std::vector<double> numerical_gradient(const std::function<double(std::span<const double>)>& f,
                                       std::span<const double> x, double rel_step) {
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = rel_step * std::max(1.0, std::abs(x[i]));
        const double orig = xp[i];
        xp[i] = orig + h;
        const double up = f(xp);
        xp[i] = orig - h;
        const double down = f(xp);
        xp[i] = orig;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

}  // namespace liqshift
