#pragma once

#include <vector>

namespace liqshift {

/// (rho - 1) / ln(rho). Throws InvalidRho unless rho > 0, rho != 1.
[[nodiscard]] double beta_of_rho(double rho);

/// Which one-sided derivative to return at the kink of W at x = 1.
enum class KinkSide { Reject, Left, Right };

// The scale-function series alternate with terms of size up to e^{x/beta}.
// They are summed in long double with compensation, which keeps about 1e-10
// relative accuracy up to x ~ 25 for beta near 1; beyond that cancellation
// grows quickly.

/// W(x) = (1/beta) sum_{k=0}^{floor x} (-1)^k / k! u^k e^u, u = (x - k) / beta.
[[nodiscard]] double scale_W(double x, double beta);

/// Termwise derivative of W. W' is continuous except at x = 1; with
/// KinkSide::Reject every positive integer throws KinkPoint.
[[nodiscard]] double scale_W_prime(double x, double beta, KinkSide side = KinkSide::Right);

/// Closed form of the integral of W over [0, x].
[[nodiscard]] double int_W(double x, double beta);

/// Expected number of events before the rho < 1 detector started at y
/// alarms with threshold m, under the pre-change regime: integral of W
/// over [y, m] with beta = beta(rho). Throws InvalidRho if rho >= 1.
[[nodiscard]] double arl_decrease(double y, double m, double rho);

/// Same for the rho > 1 detector started at v:
/// W(m - v) W(m) / W'(m) - integral of W over [0, m - v]. Throws InvalidRho
/// if rho <= 1.
[[nodiscard]] double arl_increase(double v, double m, double rho);

/// The same two quantities under the post-change regime, i.e. built from
/// beta~ = beta(rho) / rho. For rho < 1 this is rho * integral of rho^z W(z)
/// over [y, m].
[[nodiscard]] double tilde_g(double y, double m, double rho);
[[nodiscard]] double tilde_h(double v, double m, double rho);

/// Pre-change ARL from a fresh start (y = 0 or v = 0), dispatching on rho.
[[nodiscard]] double arl(double m, double rho);

/// Smallest threshold m with arl(m, rho) >= target, by bisection. Returns 0
/// when the target is already met at m = 0. Throws InvalidConfig when the
/// required m exceeds the accurate range of the series.
[[nodiscard]] double calibrate_threshold(double target, double rho);

inline constexpr double kMaxThreshold = 25.0;

/// Immutable grid of W, W' (right-sided) and its integral.
class ScaleFunctionTable {
public:
    ScaleFunctionTable(double beta, double x_max, double step);

    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] const std::vector<double>& x() const noexcept { return x_; }
    [[nodiscard]] const std::vector<double>& W() const noexcept { return w_; }
    [[nodiscard]] const std::vector<double>& W_prime() const noexcept { return wp_; }
    [[nodiscard]] const std::vector<double>& integral() const noexcept { return iw_; }

private:
    double beta_;
    std::vector<double> x_, w_, wp_, iw_;
};

}  // namespace liqshift
