#pragma once

#include <span>
#include <vector>

#include "liqshift/errors.hpp"
#include "liqshift/hawkes.hpp"

namespace liqshift {

struct FitOptions {
    int max_iters = 500;
    double grad_tol = 1e-6;  ///< on the per-event gradient in log coordinates
    /// Candidate exponents for the profile search; the initial eta is always
    /// tried as well. Empty disables the profile step.
    std::vector<double> eta_grid{0.0, 0.5, 1.0};
    int profile_iters = 80;
    bool fit_eta = true;
    bool analytic_gradient = true;
};

struct FitResult {
    HawkesParams params;
    double loglik = 0.0;         ///< full log-likelihood, ground plus marks
    double ground_loglik = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    Stability stability;
};

class Nonconvergence : public Error {
public:
    Nonconvergence(int max_iters, FitResult best);
    [[nodiscard]] const FitResult& best() const noexcept { return best_; }

private:
    FitResult best_;
};

/// Exponential mark MLE per stream: 1 / mean(mark).
[[nodiscard]] std::array<double, 2> fit_mark_rates(std::span<const MarkedEvent> events);

/// A neutral starting point: half of each bin's empirical rate as baseline,
/// moderate self-excitation, weak cross-excitation, unit decays, eta = 0.
[[nodiscard]] HawkesParams default_init(std::span<const MarkedEvent> events, double horizon,
                                        int bins = kDefaultBaselineBins);

/// Maximum-likelihood fit. Mark rates are set in closed form; the remaining
/// parameters are optimised in log coordinates (eta through its square root)
/// after a profile search over the eta grid. Throws InsufficientData when a
/// stream has no events and Nonconvergence after max_iters.
[[nodiscard]] FitResult fit_mle(std::span<const MarkedEvent> events, double horizon, const HawkesParams& init,
                                const FitOptions& opts = {});

}  // namespace liqshift
