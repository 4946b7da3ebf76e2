#include "liqshift/events.hpp"

#include <cmath>
#include <string>

#include "liqshift/errors.hpp"

namespace liqshift {

std::array<std::size_t, 2> count_by_stream(std::span<const MarkedEvent> events) noexcept {
    std::array<std::size_t, 2> counts{0, 0};
    for (const auto& e : events) ++counts[index(e.stream)];
    return counts;
}

void validate_events(std::span<const MarkedEvent> events, double horizon) {
    double prev = 0.0;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const auto& e = events[k];
        if (!std::isfinite(e.time) || e.time < 0.0 || e.time > horizon) {
            throw InvalidConfig("event " + std::to_string(k) + " at t=" + std::to_string(e.time) +
                                " lies outside [0, " + std::to_string(horizon) + "]");
        }
        if (e.time < prev) throw InvalidConfig("events not sorted at index " + std::to_string(k));
        if (!(e.mark > 0.0) || !std::isfinite(e.mark)) {
            throw InvalidConfig("event " + std::to_string(k) + " has non-positive mark");
        }
        if (e.jump < 1) throw InvalidConfig("event " + std::to_string(k) + " has jump < 1");
        prev = e.time;
    }
}

}  // namespace liqshift
