#include "liqshift/regime.hpp"

#include <cmath>
#include <ostream>

#include "liqshift/errors.hpp"

namespace liqshift {

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::Up:
            return "UP";
        case Regime::Down:
            return "DOWN";
        case Regime::Neutral:
            break;
    }
    return "NEUTRAL";
}

RegimeReport run_two_sided(std::span<const MarkedEvent> events, const HawkesParams& ref, const RegimeOptions& opts) {
    if (!(opts.rho_down < 1.0 && opts.rho_up > 1.0)) throw InvalidRho("need rho_down < 1 < rho_up");
    if (!(opts.mean_depth >= 1.0)) throw InvalidConfig("mean depth must be >= 1");
    ref.validate();
    const bool per_limit = opts.multiplicity == Multiplicity::PerLimit;
    const int max_jump = per_limit ? opts.max_depth : 1;
    const double scale = per_limit ? opts.mean_depth : 1.0;

    CusumDetector down({opts.rho_down, opts.threshold, max_jump});
    CusumDetector up({opts.rho_up, opts.threshold, max_jump});
    IntensityState state;
    const CompensatorFn compensator = [&](double a, double b) {
        double total = 0.0;
        for (auto s : {Stream::A, Stream::B}) {
            if (opts.streams[index(s)]) total += compensator_increment(a, b, s, state, ref);
        }
        return scale * total;
    };

    RegimeReport report;
    Regime regime = Regime::Neutral;
    double now = 0.0;
    auto row = [&](std::optional<Direction> alarm) {
        report.rows.push_back({now, report.total_count - report.total_compensator, down.state().reflected,
                               up.state().reflected, alarm, regime});
    };
    auto move_to = [&](double t) {
        report.total_compensator += compensator(now, t);
        now = t;
    };
    auto quiet_to = [&](double t) {
        while (auto a = down.advance(t, compensator)) {
            up.advance(a->time, compensator);
            move_to(a->time);
            regime = Regime::Down;
            report.alarms.push_back(*a);
            row(Direction::Down);
            down.restart();
            up.restart();
        }
        up.advance(t, compensator);
        move_to(t);
    };

    std::size_t k = 0;
    while (k < events.size()) {
        const double tau = events[k].time;
        if (tau < now) throw TimeRegression("events are not time-sorted");
        quiet_to(tau);
        std::size_t end = k;
        for (; end < events.size() && events[end].time == tau; ++end) {
            const double jump = per_limit ? events[end].jump : 1.0;
            report.total_count += jump;
            (void)down.on_event(jump);
            if (auto a = up.on_event(jump)) {
                regime = Regime::Up;
                report.alarms.push_back(*a);
                row(Direction::Up);
                down.restart();
                up.restart();
            }
        }
        for (; k < end; ++k) state.add(events[k], ref);
        row(std::nullopt);
    }
    const double end_time = std::max(opts.end_time, now);
    if (end_time > now || report.rows.empty()) {
        quiet_to(end_time);
        row(std::nullopt);
    }
    return report;
}

void write_regimes_csv(std::ostream& out, const RegimeReport& report, std::int64_t origin_ns) {
    const auto old = out.precision(12);
    out << "ts_ns,U,U_tilde,U_hat,alarm,regime\n";
    for (const auto& r : report.rows) {
        const auto ts = origin_ns + static_cast<std::int64_t>(std::llround(r.time * 1e9));
        out << ts << ',' << r.U << ',' << r.U_tilde << ',' << r.U_hat << ',' << (r.alarm ? to_string(*r.alarm) : "0")
            << ',' << to_string(r.regime) << '\n';
    }
    out.precision(old);
}

}  // namespace liqshift
