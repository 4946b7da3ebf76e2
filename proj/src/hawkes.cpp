#include "liqshift/hawkes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "liqshift/errors.hpp"

namespace liqshift {

namespace {

constexpr std::array<Stream, 2> kStreams{Stream::A, Stream::B};

}  // namespace

HawkesParams HawkesParams::with_constant_baseline(double mu_a, double mu_b, double horizon, int bins) {
    if (bins < 1) throw InvalidConfig("baseline needs at least one bin");
    HawkesParams p;
    p.mu[0].assign(static_cast<std::size_t>(bins), mu_a);
    p.mu[1].assign(static_cast<std::size_t>(bins), mu_b);
    p.horizon = horizon;
    return p;
}

void HawkesParams::validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidConfig("horizon must be positive");
    if (mu[0].empty() || mu[0].size() != mu[1].size()) {
        throw InvalidConfig("baselines must be non-empty and have equal bin counts");
    }
    for (const auto& m : mu) {
        for (double v : m) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidConfig("baseline rates must be finite and >= 0");
        }
    }
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            if (!(alpha[i][j] >= 0.0) || !std::isfinite(alpha[i][j])) throw InvalidConfig("alpha must be >= 0");
            if (!(decay[i][j] > 0.0) || !std::isfinite(decay[i][j])) throw InvalidConfig("decay must be > 0");
        }
        if (!(eta[i] >= 0.0) || !std::isfinite(eta[i])) throw InvalidConfig("eta must be >= 0");
        if (!(mark_rate[i] > 0.0) || !std::isfinite(mark_rate[i])) throw InvalidConfig("mark rate must be > 0");
    }
}

double impact(double v, Stream j, const HawkesParams& p) {
    const auto s = index(j);
    if (p.eta[s] == 0.0) return 1.0;
    return std::exp(p.eta[s] * std::log(p.mark_rate[s] * v) - std::lgamma(1.0 + p.eta[s]));
}

std::size_t baseline_bin(const HawkesParams& p, double t) noexcept {
    const auto n = p.bins();
    if (!(t > 0.0)) return 0;
    const double k = std::ceil(t / p.bin_width()) - 1.0;
    if (k <= 0.0) return 0;
    return std::min(n - 1, static_cast<std::size_t>(k));
}

double baseline_at(const HawkesParams& p, Stream i, double t) noexcept { return p.mu[index(i)][baseline_bin(p, t)]; }

double baseline_integral(const HawkesParams& p, Stream i, double a, double b) noexcept {
    if (!(b > a)) return 0.0;
    const auto& m = p.mu[index(i)];
    const auto n = m.size();
    const double w = p.bin_width();
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto k = static_cast<std::size_t>(std::clamp(std::floor(std::max(a, 0.0) / w), 0.0, static_cast<double>(n - 1)));
    double total = 0.0;
    for (; k < n; ++k) {
        const double lo = k == 0 ? -inf : static_cast<double>(k) * w;
        const double hi = k + 1 == n ? inf : static_cast<double>(k + 1) * w;
        const double overlap = std::min(b, hi) - std::max(a, lo);
        if (overlap > 0.0) total += m[k] * overlap;
        if (hi >= b) break;
    }
    return total;
}

Stability stability(const HawkesParams& p) noexcept {
    const double a = p.alpha[0][0] / p.decay[0][0];
    const double b = p.alpha[0][1] / p.decay[0][1];
    const double c = p.alpha[1][0] / p.decay[1][0];
    const double d = p.alpha[1][1] / p.decay[1][1];
    const double radius = 0.5 * (a + d + std::sqrt((a - d) * (a - d) + 4.0 * b * c));
    bool finite = std::isfinite(radius);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) finite = finite && std::isfinite(p.alpha[i][j] / (p.decay[i][j] * p.decay[i][j]));
    }
    return {radius, finite && radius < 1.0};
}

void IntensityState::advance(double t, const HawkesParams& p) {
    if (t < last_time_) {
        throw StaleState("state is at t=" + std::to_string(last_time_) + ", cannot move back to " + std::to_string(t));
    }
    const double dt = t - last_time_;
    if (dt > 0.0) {
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) acc_[i][j] *= std::exp(-p.decay[i][j] * dt);
        }
    }
    last_time_ = t;
}

void IntensityState::add(const MarkedEvent& e, const HawkesParams& p) {
    advance(e.time, p);
    const double g = impact(e.mark, e.stream, p);
    const auto j = index(e.stream);
    acc_[0][j] += g;
    acc_[1][j] += g;
}

double ground_intensity(double t, Stream i, const IntensityState& state, const HawkesParams& p) {
    const double s = state.last_time();
    if (t < s) throw StaleState("intensity queried at t=" + std::to_string(t) + " before state time " + std::to_string(s));
    const auto r = index(i);
    double lambda = baseline_at(p, i, t);
    for (std::size_t j = 0; j < 2; ++j) {
        lambda += p.alpha[r][j] * std::exp(-p.decay[r][j] * (t - s)) * state.accumulators()[r][j];
    }
    return lambda;
}

double compensator_increment(double t0, double t1, Stream i, const IntensityState& state, const HawkesParams& p) {
    const double s = state.last_time();
    if (t0 < s) throw StaleState("compensator from t=" + std::to_string(t0) + " before state time " + std::to_string(s));
    if (t1 < t0) throw StaleState("compensator interval is reversed");
    const auto r = index(i);
    double total = baseline_integral(p, i, t0, t1);
    for (std::size_t j = 0; j < 2; ++j) {
        const double beta = p.decay[r][j];
        const double a = state.accumulators()[r][j];
        if (a == 0.0 || p.alpha[r][j] == 0.0) continue;
        // e^{-b(t0-s)} - e^{-b(t1-s)} written to keep precision for short intervals
        const double head = std::exp(-beta * (t0 - s));
        total += p.alpha[r][j] / beta * a * head * -std::expm1(-beta * (t1 - t0));
    }
    return total;
}

EventStream simulate(const HawkesParams& p, std::uint64_t seed) {
    p.validate();
    const auto stab = stability(p);
    if (!(stab.radius < 1.0)) {
        throw UnstableParams("spectral radius " + std::to_string(stab.radius) + " >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double horizon = p.horizon;
    const double w = p.bin_width();
    const auto n = p.bins();
    IntensityState state;
    EventStream events;
    double t = 0.0;
    std::size_t k = 0;
    while (k < n) {
        const double hi = k + 1 == n ? horizon : static_cast<double>(k + 1) * w;
        state.advance(t, p);
        std::array<double, 2> lambda{};
        for (std::size_t i = 0; i < 2; ++i) {
            lambda[i] = p.mu[i][k] + p.alpha[i][0] * state.accumulators()[i][0] +
                        p.alpha[i][1] * state.accumulators()[i][1];
        }
        const double bound = lambda[0] + lambda[1];
        const double candidate = bound > 0.0 ? t + std::exponential_distribution<double>(bound)(rng) : hi + 1.0;
        if (candidate > hi) {
            t = hi;
            ++k;
            continue;
        }
        t = candidate;
        state.advance(t, p);
        for (std::size_t i = 0; i < 2; ++i) {
            lambda[i] = p.mu[i][k] + p.alpha[i][0] * state.accumulators()[i][0] +
                        p.alpha[i][1] * state.accumulators()[i][1];
        }
        const double u = unit(rng) * bound;
        Stream s;
        if (u < lambda[0]) {
            s = Stream::A;
        } else if (u < lambda[0] + lambda[1]) {
            s = Stream::B;
        } else {
            continue;
        }
        std::exponential_distribution<double> mark_dist(p.mark_rate[index(s)]);
        double mark = 0.0;
        while (!(mark > 0.0)) mark = mark_dist(rng);
        const MarkedEvent e{t, s, mark, 1};
        state.add(e, p);
        events.push_back(e);
    }
    return events;
}

LogLikelihood log_likelihood(std::span<const MarkedEvent> events, const HawkesParams& p) {
    p.validate();
    validate_events(events, p.horizon);
    const double horizon = p.horizon;

    LogLikelihood ll;
    ll.ground = horizon;
    for (auto s : kStreams) ll.ground -= baseline_integral(p, s, 0.0, horizon);

    IntensityState state;
    std::size_t k = 0;
    while (k < events.size()) {
        const double tau = events[k].time;
        state.advance(tau, p);
        std::size_t end = k;
        while (end < events.size() && events[end].time == tau) {
            const auto& e = events[end];
            const double lambda = ground_intensity(tau, e.stream, state, p);
            if (!(lambda > 0.0)) {
                throw NonPositiveIntensity("intensity of stream " + std::string(e.stream == Stream::A ? "A" : "B") +
                                           " is zero at t=" + std::to_string(tau));
            }
            ll.ground += std::log(lambda);
            const auto j = index(e.stream);
            ll.marks += std::log(p.mark_rate[j]) - p.mark_rate[j] * e.mark;
            const double g = impact(e.mark, e.stream, p);
            for (std::size_t i = 0; i < 2; ++i) {
                ll.ground -= p.alpha[i][j] / p.decay[i][j] * g * -std::expm1(-p.decay[i][j] * (horizon - tau));
            }
            ++end;
        }
        for (; k < end; ++k) state.add(events[k], p);
    }
    return ll;
}

std::size_t parameter_count(std::size_t bins) noexcept { return 2 * bins + 10; }

std::vector<double> pack(const HawkesParams& p) {
    std::vector<double> x;
    x.reserve(parameter_count(p.bins()));
    x.insert(x.end(), p.mu[0].begin(), p.mu[0].end());
    x.insert(x.end(), p.mu[1].begin(), p.mu[1].end());
    for (const auto& row : p.alpha) x.insert(x.end(), row.begin(), row.end());
    for (const auto& row : p.decay) x.insert(x.end(), row.begin(), row.end());
    x.push_back(p.eta[0]);
    x.push_back(p.eta[1]);
    return x;
}

HawkesParams unpack(std::span<const double> x, const HawkesParams& shape) {
    const auto n = shape.bins();
    if (x.size() != parameter_count(n)) throw InvalidConfig("parameter vector has the wrong length");
    HawkesParams p = shape;
    std::copy_n(x.begin(), n, p.mu[0].begin());
    std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(n), n, p.mu[1].begin());
    std::size_t o = 2 * n;
    for (auto& row : p.alpha) {
        for (auto& v : row) v = x[o++];
    }
    for (auto& row : p.decay) {
        for (auto& v : row) v = x[o++];
    }
    p.eta[0] = x[o++];
    p.eta[1] = x[o++];
    return p;
}

double ground_log_likelihood(std::span<const MarkedEvent> events, const HawkesParams& p, std::vector<double>* gradient) {
    const auto n = p.bins();
    const std::size_t o_alpha = 2 * n;
    const std::size_t o_decay = o_alpha + 4;
    const std::size_t o_eta = o_decay + 4;
    const double horizon = p.horizon;
    const double w = p.bin_width();

    std::vector<double> grad(parameter_count(n), 0.0);
    double ll = horizon;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t b = 0; b < n; ++b) {
            ll -= p.mu[i][b] * w;
            grad[i * n + b] -= w;
        }
    }

    const std::array<double, 2> digamma{boost::math::digamma(1.0 + p.eta[0]), boost::math::digamma(1.0 + p.eta[1])};

    // R: decayed impact sums, S: time-weighted sums (decay derivative),
    // E: log-impact-weighted sums (eta derivative).
    Matrix2 R{}, S{}, E{};
    double last = 0.0;
    std::size_t k = 0;
    while (k < events.size()) {
        const double tau = events[k].time;
        const double dt = tau - last;
        if (dt < 0.0) throw InvalidConfig("events not sorted");
        if (dt > 0.0) {
            for (std::size_t i = 0; i < 2; ++i) {
                for (std::size_t j = 0; j < 2; ++j) {
                    const double f = std::exp(-p.decay[i][j] * dt);
                    S[i][j] = f * (S[i][j] + dt * R[i][j]);
                    R[i][j] *= f;
                    E[i][j] *= f;
                }
            }
            last = tau;
        }
        const std::size_t bin = baseline_bin(p, tau);
        std::size_t end = k;
        while (end < events.size() && events[end].time == tau) {
            const auto i = index(events[end].stream);
            const double lambda = p.mu[i][bin] + p.alpha[i][0] * R[i][0] + p.alpha[i][1] * R[i][1];
            if (!(lambda > 0.0)) {
                throw NonPositiveIntensity("intensity is zero at t=" + std::to_string(tau));
            }
            ll += std::log(lambda);
            const double inv = 1.0 / lambda;
            grad[i * n + bin] += inv;
            for (std::size_t j = 0; j < 2; ++j) {
                grad[o_alpha + 2 * i + j] += R[i][j] * inv;
                grad[o_decay + 2 * i + j] -= p.alpha[i][j] * S[i][j] * inv;
                grad[o_eta + j] += p.alpha[i][j] * E[i][j] * inv;
            }
            ++end;
        }
        for (; k < end; ++k) {
            const auto& e = events[k];
            const auto j = index(e.stream);
            const double g = impact(e.mark, e.stream, p);
            const double logimp = std::log(p.mark_rate[j] * e.mark) - digamma[j];
            const double u = horizon - tau;
            for (std::size_t i = 0; i < 2; ++i) {
                const double beta = p.decay[i][j];
                const double decayed = std::exp(-beta * u);
                const double c = g * -std::expm1(-beta * u) / beta;
                ll -= p.alpha[i][j] * c;
                grad[o_alpha + 2 * i + j] -= c;
                grad[o_decay + 2 * i + j] -= p.alpha[i][j] * g * (u * decayed / beta + std::expm1(-beta * u) / (beta * beta));
                grad[o_eta + j] -= p.alpha[i][j] * c * logimp;
                R[i][j] += g;
                E[i][j] += g * logimp;
            }
        }
    }
    if (gradient) *gradient = std::move(grad);
    return ll;
}

}  // namespace liqshift
