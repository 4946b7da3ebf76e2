#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace liqshift {

enum class Direction { Up, Down };

[[nodiscard]] const char* to_string(Direction d) noexcept;

/// rho < 1 selects the decrease detector (U~), rho > 1 the increase
/// detector (U^). max_jump caps a single simultaneous jump.
struct CusumConfig {
    double rho = 0.5;
    double threshold = 5.0;
    int max_jump = 1;

    void validate() const;
    [[nodiscard]] Direction direction() const noexcept { return rho < 1.0 ? Direction::Down : Direction::Up; }
};

struct Alarm {
    double time = 0.0;
    Direction direction = Direction::Down;
    double cumulative_count = 0.0;  ///< events since the detector was created
    double run_count = 0.0;         ///< events since the last restart
};

/// U = N - beta(rho) Lambda with its running extrema. For the decrease
/// detector `reflected` is sup U - U, for the increase detector U - inf U.
struct DetectorState {
    double U = 0.0;
    double running_max = 0.0;
    double running_min = 0.0;
    double reflected = 0.0;
    double count = 0.0;
    double run_count = 0.0;
    double last_time = 0.0;
    std::vector<Alarm> alarms;
};

/// Increment of U: jump - beta(rho) * d_lambda.
[[nodiscard]] double llr_increment(double jump, double d_lambda, double rho);

/// Reference compensator over [a, b]; only ever called on intervals without
/// events and must be non-decreasing in b.
using CompensatorFn = std::function<double(double a, double b)>;

class CusumDetector {
public:
    explicit CusumDetector(const CusumConfig& cfg);

    [[nodiscard]] const CusumConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] const DetectorState& state() const noexcept { return state_; }
    [[nodiscard]] double beta() const noexcept { return beta_; }

    /// Moves through a quiet period to t. The decrease detector stops at the
    /// first crossing of the threshold (located to 1e-9 s) and returns the
    /// alarm with the state left at the alarm time, before any restart.
    /// Throws TimeRegression if t is before the current time.
    std::optional<Alarm> advance(double t, const CompensatorFn& compensator);

    /// Applies a jump of `jump` events at the current time. Only the increase
    /// detector can alarm here. Throws InvalidConfig if jump exceeds max_jump.
    std::optional<Alarm> on_event(double jump);

    /// Restart policy after an alarm: reflected value to 0, the running
    /// extremum re-based on the current U, run count cleared.
    void restart() noexcept;

    /// A silent detector tracks U and its reflection but never alarms.
    void set_silent(bool silent) noexcept { silent_ = silent; }

private:
    Alarm make_alarm() const;
    void apply_drift(double d_lambda);

    CusumConfig cfg_;
    double beta_;
    bool silent_ = false;
    DetectorState state_;
};

}  // namespace liqshift
