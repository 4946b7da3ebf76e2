#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liqshift/cusum.hpp"
#include "liqshift/events.hpp"
#include "liqshift/hawkes.hpp"
#include "liqshift/trades_through.hpp"

namespace liqshift {

struct RegimeOptions {
    double rho_up = 1.5;
    double rho_down = 0.5;
    double threshold = 5.0;
    Multiplicity multiplicity = Multiplicity::Ground;
    /// Per-limit mode scales the ground compensator by this factor.
    double mean_depth = 1.0;
    int max_depth = 4;
    /// Streams whose compensators enter Lambda (normally those present).
    std::array<bool, 2> streams{true, true};
    /// Time at which the run ends; quiet time up to here can raise DOWN.
    double end_time = 0.0;
    std::int64_t origin_ns = 0;
};

enum class Regime { Neutral, Up, Down };

[[nodiscard]] const char* to_string(Regime r) noexcept;

struct RegimeRow {
    double time = 0.0;
    double U = 0.0;  ///< N - Lambda
    double U_tilde = 0.0;
    double U_hat = 0.0;
    std::optional<Direction> alarm;
    Regime regime = Regime::Neutral;
};

struct RegimeReport {
    std::vector<RegimeRow> rows;
    std::vector<Alarm> alarms;
    double total_count = 0.0;
    double total_compensator = 0.0;
};

/// Runs the decrease and increase detectors side by side on one event
/// stream. Lambda is the reference model's ground compensator driven by this
/// stream's own history. An alarm of either detector restarts both.
[[nodiscard]] RegimeReport run_two_sided(std::span<const MarkedEvent> events, const HawkesParams& ref,
                                         const RegimeOptions& opts);

/// `ts_ns,U,U_tilde,U_hat,alarm,regime` with alarm in {0,UP,DOWN}.
void write_regimes_csv(std::ostream& out, const RegimeReport& report, std::int64_t origin_ns);

}  // namespace liqshift
