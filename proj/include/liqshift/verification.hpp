#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "liqshift/cusum.hpp"

namespace liqshift {

/// Arrival times of D counting processes; streams[i] belongs to N^{i+1}.
using StreamTimes = std::vector<std::vector<double>>;

struct ShiftResult {
    StreamTimes times;
    /// Some shifted time reached the next original arrival of its stream.
    bool collision = false;
};

/// tau + (i/D) eps delta, where delta is the smallest gap between distinct
/// consecutive times of {0} and all arrivals (every stream) up to tau.
[[nodiscard]] ShiftResult shift_forward(const StreamTimes& streams, double eps);

/// Mirror of shift_forward: tau - (i/D) eps delta, floored at 0. The
/// collision flag marks a shifted time at or before the previous original
/// arrival of its stream.
[[nodiscard]] ShiftResult shift_backward(const StreamTimes& streams, double eps);

/// Reflected CUSUM value at each checkpoint for the superposition of
/// `streams` (unit jumps, simultaneous arrivals add up), with Lambda(t) =
/// rate * t. Alarms are disabled. Checkpoints must be sorted.
[[nodiscard]] std::vector<double> reflected_at(const StreamTimes& streams, double rate, double rho,
                                               std::span<const double> checkpoints);

struct ConvergenceConfig {
    double rho = 0.5;           ///< < 1 uses the forward shift and U~; > 1 the backward shift and U^
    double rate = 1.0;          ///< ground event rate
    int limits = 4;             ///< D
    double deeper_probability = 0.35;  ///< depth is 1 + Geometric, capped at D
    double horizon = 20.0;
    int paths = 1000;
    std::uint64_t seed = 1;
    std::vector<double> eps_grid{0.1, 0.05, 0.01};
    double tolerance = 0.05;
};

struct EpsilonRow {
    double eps = 0.0;
    double mean_gap = 0.0;  ///< mean over paths of the checkpoint-averaged |U^eps - U|
    double std_error = 0.0;
    double max_gap = 0.0;
    double collision_rate = 0.0;
};

struct ConvergenceReport {
    std::vector<double> checkpoints;
    std::vector<EpsilonRow> rows;
    bool monotone = false;      ///< non-increasing along the grid within 2 s.e.
    bool within_tolerance = false;  ///< last row below tolerance
};

/// Monte-Carlo comparison of the reflected CUSUM of per-limit streams with
/// simultaneous jumps against its eps-shifted version, at the deciles of
/// [0, horizon]. Paths are shared across the eps grid.
[[nodiscard]] ConvergenceReport check_reflected_convergence(const ConvergenceConfig& cfg);

struct ArlEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int reps = 0;
};

/// Mean event count at the first alarm of the detector matching rho, run on
/// a homogeneous Poisson stream of the given rate with no change.
/// Replication r uses an RNG seeded from (seed, r).
[[nodiscard]] ArlEstimate mc_arl(double rho, double threshold, double rate, int reps, std::uint64_t seed);

}  // namespace liqshift
