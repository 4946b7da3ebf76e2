#pragma once

#include <functional>
#include <span>
#include <vector>

namespace liqshift {

/// Returns f(x) and writes the gradient into `grad` (already sized). May
/// return +inf to reject a point.
using Objective = std::function<double(std::span<const double> x, std::vector<double>& grad)>;

struct BfgsOptions {
    int max_iters = 500;
    double grad_tol = 1e-6;   ///< on the max-norm of the projected gradient
    double f_tol = 1e-12;     ///< relative change of f over three consecutive steps
    double lower = -30.0;     ///< box applied to every coordinate
    double upper = 30.0;
    std::vector<bool> frozen; ///< coordinates held at their start value
};

struct BfgsResult {
    std::vector<double> x;
    double f = 0.0;
    double grad_norm = 0.0;  ///< projected, over free coordinates
    int iterations = 0;
    bool converged = false;
};

/// Box-projected BFGS minimizer with Armijo backtracking. Never returns a
/// point worse than x0.
[[nodiscard]] BfgsResult minimize_bfgs(const Objective& objective, std::vector<double> x0, const BfgsOptions& opts = {});

/// Central-difference gradient of `f` at x.
[[nodiscard]] std::vector<double> numerical_gradient(const std::function<double(std::span<const double>)>& f,
                                                     std::span<const double> x, double rel_step = 1e-6);

}  // namespace liqshift
