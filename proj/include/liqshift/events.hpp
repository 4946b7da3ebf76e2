#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace liqshift {

/// A is the ask side, B the bid side.
enum class Stream : int { A = 0, B = 1 };

inline constexpr std::size_t index(Stream s) noexcept { return static_cast<std::size_t>(s); }

/// One point of the bivariate marked process. `time` is in seconds from the
/// session origin. `jump` is the simultaneous count carried by the point when
/// per-limit multiplicity is in use; the ground process always counts it once.
struct MarkedEvent {
    double time = 0.0;
    Stream stream = Stream::A;
    double mark = 1.0;
    int jump = 1;

    friend bool operator==(const MarkedEvent&, const MarkedEvent&) = default;
};

using EventStream = std::vector<MarkedEvent>;

/// Number of events per stream.
[[nodiscard]] std::array<std::size_t, 2> count_by_stream(std::span<const MarkedEvent> events) noexcept;

/// Throws InvalidConfig unless times are finite, non-decreasing, within
/// [0, horizon] and marks are positive.
void validate_events(std::span<const MarkedEvent> events, double horizon);

}  // namespace liqshift
