#include "liqshift/hawkes_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "liqshift/optimize.hpp"

namespace liqshift {

namespace {

constexpr double kLogFloor = -30.0;

// Unconstrained coordinates: log of every positive parameter, sqrt of eta.
std::vector<double> to_free(const HawkesParams& p) {
    auto x = pack(p);
    const std::size_t o_eta = x.size() - 2;
    for (std::size_t i = 0; i < o_eta; ++i) x[i] = x[i] > 0.0 ? std::max(std::log(x[i]), kLogFloor) : kLogFloor;
    x[o_eta] = std::sqrt(x[o_eta]);
    x[o_eta + 1] = std::sqrt(x[o_eta + 1]);
    return x;
}

std::vector<double> from_free(std::span<const double> x) {
    std::vector<double> theta(x.begin(), x.end());
    const std::size_t o_eta = theta.size() - 2;
    for (std::size_t i = 0; i < o_eta; ++i) theta[i] = std::exp(theta[i]);
    theta[o_eta] = x[o_eta] * x[o_eta];
    theta[o_eta + 1] = x[o_eta + 1] * x[o_eta + 1];
    return theta;
}

struct Problem {
    std::span<const MarkedEvent> events;
    HawkesParams shape;
    double scale;  // 1 / event count
    bool analytic;

    double value(std::span<const double> x) const {
        try {
            return -ground_log_likelihood(events, unpack(from_free(x), shape)) * scale;
        } catch (const NonPositiveIntensity&) {
            return std::numeric_limits<double>::infinity();
        }
    }

    double operator()(std::span<const double> x, std::vector<double>& grad) const {
        if (!analytic) {
            const double f = value(x);
            if (std::isfinite(f)) grad = numerical_gradient([this](std::span<const double> y) { return value(y); }, x);
            return f;
        }
        std::vector<double> g;
        double ll;
        try {
            ll = ground_log_likelihood(events, unpack(from_free(x), shape), &g);
        } catch (const NonPositiveIntensity&) {
            return std::numeric_limits<double>::infinity();
        }
        const std::size_t o_eta = x.size() - 2;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double chain = i < o_eta ? std::exp(x[i]) : 2.0 * x[i];
            grad[i] = -g[i] * chain * scale;
        }
        return -ll * scale;
    }
};

FitResult make_result(const Problem& prob, const BfgsResult& r, std::span<const MarkedEvent> events) {
    FitResult out;
    out.params = unpack(from_free(r.x), prob.shape);
    const auto ll = log_likelihood(events, out.params);
    out.loglik = ll.total();
    out.ground_loglik = ll.ground;
    out.grad_norm = r.grad_norm;
    out.iterations = r.iterations;
    out.converged = r.converged;
    out.stability = stability(out.params);
    return out;
}

}  // namespace

Nonconvergence::Nonconvergence(int max_iters, FitResult best)
    : Error("Nonconvergence: optimizer stopped after " + std::to_string(max_iters) + " iterations (gradient norm " +
            std::to_string(best.grad_norm) + ")"),
      best_(std::move(best)) {}

std::array<double, 2> fit_mark_rates(std::span<const MarkedEvent> events) {
    std::array<double, 2> sum{0.0, 0.0};
    const auto counts = count_by_stream(events);
    for (const auto& e : events) sum[index(e.stream)] += e.mark;
    std::array<double, 2> rate{};
    for (std::size_t i = 0; i < 2; ++i) {
        if (counts[i] == 0) throw InsufficientData(std::string("stream ") + (i == 0 ? "A" : "B") + " has no events");
        rate[i] = static_cast<double>(counts[i]) / sum[i];
    }
    return rate;
}

HawkesParams default_init(std::span<const MarkedEvent> events, double horizon, int bins) {
    auto p = HawkesParams::with_constant_baseline(0.0, 0.0, horizon, bins);
    for (const auto& e : events) p.mu[index(e.stream)][baseline_bin(p, e.time)] += 1.0;
    const double w = p.bin_width();
    for (auto& m : p.mu) {
        for (auto& v : m) v = std::max(0.5 * v / w, 1e-6);
    }
    p.alpha = {{{0.5, 0.1}, {0.1, 0.5}}};
    p.decay = {{{1.0, 1.0}, {1.0, 1.0}}};
    p.mark_rate = fit_mark_rates(events);
    return p;
}

FitResult fit_mle(std::span<const MarkedEvent> events, double horizon, const HawkesParams& init,
                  const FitOptions& opts) {
    validate_events(events, horizon);
    HawkesParams shape = init;
    shape.horizon = horizon;
    shape.mark_rate = fit_mark_rates(events);
    shape.validate();

    const Problem prob{events, shape, 1.0 / static_cast<double>(events.size()), opts.analytic_gradient};
    const Objective objective = [&prob](std::span<const double> x, std::vector<double>& g) { return prob(x, g); };

    const auto x0 = to_free(shape);
    const std::size_t o_eta = x0.size() - 2;
    BfgsOptions bopts;
    bopts.grad_tol = opts.grad_tol;
    bopts.lower = kLogFloor;
    bopts.frozen.assign(x0.size(), false);
    bopts.frozen[o_eta] = bopts.frozen[o_eta + 1] = true;

    BfgsResult start;
    if (opts.fit_eta && !opts.eta_grid.empty()) {
        std::vector<std::array<double, 2>> candidates{{shape.eta[0], shape.eta[1]}};
        for (double a : opts.eta_grid) {
            for (double b : opts.eta_grid) {
                if (a < 0.0 || b < 0.0) throw InvalidConfig("eta grid values must be >= 0");
                candidates.push_back({a, b});
            }
        }
        bopts.max_iters = opts.profile_iters;
        bool first = true;
        for (const auto& c : candidates) {
            auto x = x0;
            x[o_eta] = std::sqrt(c[0]);
            x[o_eta + 1] = std::sqrt(c[1]);
            std::vector<double> scratch(x.size());
            if (!std::isfinite(prob(x, scratch))) continue;
            auto r = minimize_bfgs(objective, x, bopts);
            if (first || r.f < start.f) start = std::move(r);
            first = false;
        }
        if (first) throw InvalidConfig("no eta candidate gives a finite likelihood");
    } else {
        start.x = x0;
    }

    bopts.max_iters = opts.max_iters;
    if (opts.fit_eta) bopts.frozen.assign(x0.size(), false);
    const auto final = minimize_bfgs(objective, start.x, bopts);
    auto result = make_result(prob, final, events);
    if (!final.converged) throw Nonconvergence(opts.max_iters, std::move(result));
    return result;
}

}  // namespace liqshift
