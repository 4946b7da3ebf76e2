#include "liqshift/cusum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liqshift/errors.hpp"
#include "liqshift/scale_function.hpp"

namespace liqshift {

const char* to_string(Direction d) noexcept { return d == Direction::Up ? "UP" : "DOWN"; }

void CusumConfig::validate() const {
    (void)beta_of_rho(rho);
    if (!(threshold > 0.0)) throw InvalidConfig("threshold m must be > 0");
    if (max_jump < 1) throw InvalidConfig("max jump D must be >= 1");
}

double llr_increment(double jump, double d_lambda, double rho) { return jump - beta_of_rho(rho) * d_lambda; }

CusumDetector::CusumDetector(const CusumConfig& cfg) : cfg_(cfg), beta_(beta_of_rho(cfg.rho)) { cfg_.validate(); }

Alarm CusumDetector::make_alarm() const {
    return {state_.last_time, cfg_.direction(), state_.count, state_.run_count};
}

void CusumDetector::apply_drift(double d_lambda) {
    state_.U -= beta_ * d_lambda;
    if (cfg_.direction() == Direction::Down) {
        state_.reflected = state_.running_max - state_.U;
    } else {
        state_.running_min = std::min(state_.running_min, state_.U);
        state_.reflected = state_.U - state_.running_min;
    }
}

std::optional<Alarm> CusumDetector::advance(double t, const CompensatorFn& compensator) {
    const double t0 = state_.last_time;
    if (t < t0) {
        throw TimeRegression("detector is at t=" + std::to_string(t0) + ", got " + std::to_string(t));
    }
    if (t == t0) return std::nullopt;
    const double d_lambda = compensator(t0, t);
    if (d_lambda < 0.0) throw InvalidConfig("compensator increment is negative");

    if (cfg_.direction() == Direction::Down && !silent_ &&
        state_.reflected + beta_ * d_lambda > cfg_.threshold) {
        // U~ grows monotonically between events; bisect for the crossing.
        const double need = cfg_.threshold - state_.reflected;
        double lo = t0;
        double hi = t;
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (beta_ * compensator(t0, mid) >= need ? hi : lo) = mid;
        }
        state_.U -= need;
        state_.reflected = cfg_.threshold;
        state_.last_time = hi;
        Alarm a = make_alarm();
        state_.alarms.push_back(a);
        return a;
    }
    apply_drift(d_lambda);
    state_.last_time = t;
    return std::nullopt;
}

std::optional<Alarm> CusumDetector::on_event(double jump) {
    if (!(jump > 0.0)) throw InvalidConfig("event jump must be positive");
    if (jump > cfg_.max_jump) {
        throw InvalidConfig("jump " + std::to_string(jump) + " exceeds max_jump " + std::to_string(cfg_.max_jump));
    }
    state_.U += jump;
    state_.count += jump;
    state_.run_count += jump;
    if (cfg_.direction() == Direction::Down) {
        state_.running_max = std::max(state_.running_max, state_.U);
        state_.reflected = state_.running_max - state_.U;
        return std::nullopt;
    }
    state_.reflected = state_.U - state_.running_min;
    if (!silent_ && state_.reflected > cfg_.threshold) {
        Alarm a = make_alarm();
        state_.alarms.push_back(a);
        return a;
    }
    return std::nullopt;
}

void CusumDetector::restart() noexcept {
    state_.running_max = state_.U;
    state_.running_min = state_.U;
    state_.reflected = 0.0;
    state_.run_count = 0.0;
}

}  // namespace liqshift
