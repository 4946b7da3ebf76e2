#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "liqshift/events.hpp"

namespace liqshift {

inline constexpr int kDefaultBaselineBins = 14;

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Marked bivariate Hawkes model with exponential kernels, power mark impact
/// and exponential mark densities. alpha[i][j] and decay[i][j] describe the
/// excitation of stream i by events of stream j.
struct HawkesParams {
    std::array<std::vector<double>, 2> mu;  ///< piecewise-constant baseline per stream, equal bins over [0, horizon]
    Matrix2 alpha{};
    Matrix2 decay{{{1.0, 1.0}, {1.0, 1.0}}};
    std::array<double, 2> eta{0.0, 0.0};
    std::array<double, 2> mark_rate{1.0, 1.0};
    double horizon = 1.0;

    /// Constant baselines spread over `bins` bins.
    static HawkesParams with_constant_baseline(double mu_a, double mu_b, double horizon,
                                               int bins = kDefaultBaselineBins);

    [[nodiscard]] std::size_t bins() const noexcept { return mu[0].size(); }
    [[nodiscard]] double bin_width() const noexcept { return horizon / static_cast<double>(bins()); }

    /// Throws InvalidConfig on sign or shape violations.
    void validate() const;

    friend bool operator==(const HawkesParams&, const HawkesParams&) = default;
};

/// g_j(v) = beta_j^eta_j v^eta_j / Gamma(1 + eta_j), which has unit mean
/// under Exp(beta_j).
[[nodiscard]] double impact(double v, Stream j, const HawkesParams& p);

/// Bin k covers ((k-1)T/n, kT/n]; t = 0 belongs to the first bin and times
/// past the horizon to the last.
[[nodiscard]] std::size_t baseline_bin(const HawkesParams& p, double t) noexcept;
[[nodiscard]] double baseline_at(const HawkesParams& p, Stream i, double t) noexcept;
/// Integral of the baseline of stream i over [a, b].
[[nodiscard]] double baseline_integral(const HawkesParams& p, Stream i, double a, double b) noexcept;

struct Stability {
    double radius = 0.0;
    bool stable = false;
};

/// Spectral radius of the branching matrix [alpha_ij / decay_ij].
[[nodiscard]] Stability stability(const HawkesParams& p) noexcept;

/// Decayed excitation sums A_ij(s) = sum over stream-j events tau <= s of
/// exp(-decay_ij (s - tau)) g_j(v), kept current as of `last_time`.
class IntensityState {
public:
    IntensityState() = default;

    [[nodiscard]] double last_time() const noexcept { return last_time_; }
    [[nodiscard]] const Matrix2& accumulators() const noexcept { return acc_; }

    /// Decays the accumulators to time t. Throws StaleState if t < last_time.
    void advance(double t, const HawkesParams& p);
    /// Advances to e.time and adds the event's impact.
    void add(const MarkedEvent& e, const HawkesParams& p);

private:
    Matrix2 acc_{};
    double last_time_ = 0.0;
};

/// Ground intensity of stream i at t >= state.last_time(), assuming no
/// events in (last_time, t]. Throws StaleState otherwise.
[[nodiscard]] double ground_intensity(double t, Stream i, const IntensityState& state, const HawkesParams& p);

/// Integral of the ground intensity of stream i over [t0, t1], assuming no
/// events in (last_time, t1] and last_time <= t0 <= t1.
[[nodiscard]] double compensator_increment(double t0, double t1, Stream i, const IntensityState& state,
                                           const HawkesParams& p);

/// Thinning simulation on [0, horizon]. Throws UnstableParams when the
/// spectral radius is >= 1.
[[nodiscard]] EventStream simulate(const HawkesParams& p, std::uint64_t seed);

struct LogLikelihood {
    double ground = 0.0;  ///< horizon - sum of compensators + sum of log intensities
    double marks = 0.0;   ///< sum of log mark densities
    [[nodiscard]] double total() const noexcept { return ground + marks; }
};

/// Exact log-likelihood relative to the unit-rate Poisson process. Events at
/// the same time see only the strictly earlier history. Throws
/// NonPositiveIntensity when some event has zero intensity.
[[nodiscard]] LogLikelihood log_likelihood(std::span<const MarkedEvent> events, const HawkesParams& p);

/// Flat parameter layout shared by the gradient and the fitter:
/// mu_A bins, mu_B bins, alpha (row-major), decay (row-major), eta_A, eta_B.
[[nodiscard]] std::size_t parameter_count(std::size_t bins) noexcept;
[[nodiscard]] std::vector<double> pack(const HawkesParams& p);
/// Inverse of pack; horizon and mark rates come from `shape`.
[[nodiscard]] HawkesParams unpack(std::span<const double> x, const HawkesParams& shape);

/// Ground log-likelihood and its gradient with respect to pack(p). Mark
/// rates are held fixed.
[[nodiscard]] double ground_log_likelihood(std::span<const MarkedEvent> events, const HawkesParams& p,
                                           std::vector<double>* gradient = nullptr);

}  // namespace liqshift
