#include "liqshift/scale_function.hpp"

#include <cmath>
#include <string>

#include "liqshift/errors.hpp"

namespace liqshift {

namespace {

using Real = long double;

// Neumaier compensated sum.
struct Accumulator {
    Real sum = 0.0L;
    Real c = 0.0L;
    void add(Real v) {
        const Real t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    [[nodiscard]] Real value() const { return sum + c; }
};

void check_args(double x, double beta) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidConfig("scale function needs finite x >= 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidConfig("scale function needs beta > 0");
}

// u^k / k! e^u, with u >= 0.
Real term(int k, Real u) {
    if (u == 0.0L) return k == 0 ? 1.0L : 0.0L;
    return std::exp(static_cast<Real>(k) * std::log(u) - std::lgamma(static_cast<Real>(k) + 1.0L) + u);
}

double W_impl(double x, double beta) {
    const Real b = beta;
    const int top = static_cast<int>(std::floor(x));
    Accumulator acc;
    for (int k = 0; k <= top; ++k) {
        const Real u = (static_cast<Real>(x) - k) / b;
        acc.add((k % 2 == 0 ? 1.0L : -1.0L) * term(k, u));
    }
    return static_cast<double>(acc.value() / b);
}

void check_detector_rho(double rho, bool increase) {
    const double b = beta_of_rho(rho);
    (void)b;
    if (increase && !(rho > 1.0)) throw InvalidRho("this ARL formula needs rho > 1, got " + std::to_string(rho));
    if (!increase && !(rho < 1.0)) throw InvalidRho("this ARL formula needs rho < 1, got " + std::to_string(rho));
}

void check_range(double a, double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw InvalidConfig("threshold m must be positive");
    if (!(a >= 0.0 && a <= m)) throw InvalidConfig("starting point must lie in [0, m]");
}

double h_formula(double v, double m, double beta) {
    return scale_W(m - v, beta) * scale_W(m, beta) / scale_W_prime(m, beta) - int_W(m - v, beta);
}

}  // namespace

double beta_of_rho(double rho) {
    if (!(rho > 0.0) || rho == 1.0 || !std::isfinite(rho)) {
        throw InvalidRho("rho must be positive, finite and != 1, got " + std::to_string(rho));
    }
    return (rho - 1.0) / std::log(rho);
}

double scale_W(double x, double beta) {
    check_args(x, beta);
    return W_impl(x, beta);
}

double scale_W_prime(double x, double beta, KinkSide side) {
    check_args(x, beta);
    const bool integer = x > 0.0 && x == std::floor(x);
    if (integer && side == KinkSide::Reject) {
        throw KinkPoint("W' is one-sided at integer x=" + std::to_string(x));
    }
    int top = static_cast<int>(std::floor(x));
    if (integer && side == KinkSide::Left) --top;
    const Real b = beta;
    Accumulator acc;
    for (int k = 0; k <= top; ++k) {
        const Real u = (static_cast<Real>(x) - k) / b;
        // d/du (u^k/k! e^u) = (u^{k-1}/(k-1)! + u^k/k!) e^u
        const Real t = (k > 0 ? term(k - 1, u) : 0.0L) + term(k, u);
        acc.add((k % 2 == 0 ? 1.0L : -1.0L) * t);
    }
    return static_cast<double>(acc.value() / (b * b));
}

double int_W(double x, double beta) {
    check_args(x, beta);
    const Real b = beta;
    const int top = static_cast<int>(std::floor(x));
    Accumulator acc;
    for (int k = 0; k <= top; ++k) {
        const Real u = (static_cast<Real>(x) - k) / b;
        // e^u sum_{j<=k} (-1)^j u^j / j!  -  1
        for (int j = 0; j <= k; ++j) acc.add((j % 2 == 0 ? 1.0L : -1.0L) * term(j, u));
        acc.add(-1.0L);
    }
    return static_cast<double>(acc.value());
}

double arl_decrease(double y, double m, double rho) {
    check_detector_rho(rho, false);
    check_range(y, m);
    const double b = beta_of_rho(rho);
    return int_W(m, b) - int_W(y, b);
}

double arl_increase(double v, double m, double rho) {
    check_detector_rho(rho, true);
    check_range(v, m);
    return h_formula(v, m, beta_of_rho(rho));
}

double tilde_g(double y, double m, double rho) {
    check_detector_rho(rho, false);
    check_range(y, m);
    const double bt = beta_of_rho(rho) / rho;
    return int_W(m, bt) - int_W(y, bt);
}

double tilde_h(double v, double m, double rho) {
    check_detector_rho(rho, true);
    check_range(v, m);
    return h_formula(v, m, beta_of_rho(rho) / rho);
}

double arl(double m, double rho) { return rho < 1.0 ? arl_decrease(0.0, m, rho) : arl_increase(0.0, m, rho); }

double calibrate_threshold(double target, double rho) {
    if (!(target > 0.0) || !std::isfinite(target)) throw InvalidConfig("target ARL must be positive");
    (void)beta_of_rho(rho);
    // arl at m -> 0+: 0 for rho < 1, 1 for rho > 1.
    const double at_zero = rho < 1.0 ? 0.0 : 1.0;
    if (target <= at_zero) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (arl(hi, rho) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > kMaxThreshold) {
            hi = kMaxThreshold;
            if (arl(hi, rho) < target) {
                throw InvalidConfig("target ARL " + std::to_string(target) + " needs a threshold above " +
                                    std::to_string(kMaxThreshold));
            }
            break;
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (arl(mid, rho) >= target ? hi : lo) = mid;
    }
    return hi;
}

ScaleFunctionTable::ScaleFunctionTable(double beta, double x_max, double step) : beta_(beta) {
    if (!(step > 0.0) || !(x_max >= 0.0)) throw InvalidConfig("table needs step > 0 and x_max >= 0");
    const auto n = static_cast<std::size_t>(std::floor(x_max / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) * step;
        x_.push_back(x);
        w_.push_back(scale_W(x, beta));
        wp_.push_back(scale_W_prime(x, beta));
        iw_.push_back(int_W(x, beta));
    }
}

}  // namespace liqshift
