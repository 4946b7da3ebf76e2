#pragma once

// Direct O(N^2) evaluations used as references for the recursive code.

#include <cmath>
#include <span>
#include <vector>

#include "liqshift/hawkes.hpp"

namespace oracle {

using liqshift::HawkesParams;
using liqshift::MarkedEvent;
using liqshift::Stream;

inline double g(double v, Stream j, const HawkesParams& p) {
    const auto s = static_cast<std::size_t>(j);
    return std::pow(p.mark_rate[s], p.eta[s]) * std::pow(v, p.eta[s]) / std::tgamma(1.0 + p.eta[s]);
}

inline double mu_at(const HawkesParams& p, Stream i, double t) {
    const auto n = p.mu[0].size();
    const double w = p.horizon / static_cast<double>(n);
    std::size_t k = 0;
    while (k + 1 < n && t > static_cast<double>(k + 1) * w) ++k;
    return p.mu[static_cast<std::size_t>(i)][k];
}

inline double mu_integral(const HawkesParams& p, Stream i, double a, double b) {
    const auto n = p.mu[0].size();
    const double w = p.horizon / static_cast<double>(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lo = k == 0 ? -1e300 : static_cast<double>(k) * w;
        const double hi = k + 1 == n ? 1e300 : static_cast<double>(k + 1) * w;
        const double len = std::min(b, hi) - std::max(a, lo);
        if (len > 0) total += len * p.mu[static_cast<std::size_t>(i)][k];
    }
    return total;
}

/// Intensity at t using events strictly before t.
inline double intensity(double t, Stream i, std::span<const MarkedEvent> events, const HawkesParams& p) {
    const auto r = static_cast<std::size_t>(i);
    double lambda = mu_at(p, i, t);
    for (const auto& e : events) {
        if (e.time >= t) break;
        const auto j = static_cast<std::size_t>(e.stream);
        lambda += p.alpha[r][j] * std::exp(-p.decay[r][j] * (t - e.time)) * g(e.mark, e.stream, p);
    }
    return lambda;
}

/// Integral of the intensity of stream i over [a, b] from every event.
inline double compensator(double a, double b, Stream i, std::span<const MarkedEvent> events, const HawkesParams& p) {
    const auto r = static_cast<std::size_t>(i);
    double total = mu_integral(p, i, a, b);
    for (const auto& e : events) {
        if (e.time >= b) break;
        const auto j = static_cast<std::size_t>(e.stream);
        const double beta = p.decay[r][j];
        const double lo = std::max(a, e.time);
        total += p.alpha[r][j] / beta * g(e.mark, e.stream, p) *
                 (std::exp(-beta * (lo - e.time)) - std::exp(-beta * (b - e.time)));
    }
    return total;
}

inline double loglik(std::span<const MarkedEvent> events, const HawkesParams& p) {
    double ll = p.horizon;
    for (auto s : {Stream::A, Stream::B}) ll -= compensator(0.0, p.horizon, s, events, p);
    for (const auto& e : events) {
        ll += std::log(intensity(e.time, e.stream, events, p));
        const auto j = static_cast<std::size_t>(e.stream);
        ll += std::log(p.mark_rate[j] * std::exp(-p.mark_rate[j] * e.mark));
    }
    return ll;
}

/// Per-stream residuals via direct integrals between same-stream events.
inline std::vector<double> residuals(std::span<const MarkedEvent> events, Stream i, const HawkesParams& p) {
    std::vector<double> out;
    double prev = 0.0;
    for (const auto& e : events) {
        if (e.stream != i) continue;
        out.push_back(compensator(prev, e.time, i, events, p));
        prev = e.time;
    }
    return out;
}

}  // namespace oracle
