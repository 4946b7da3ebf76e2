#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "liqshift/events.hpp"
#include "liqshift/lob_ingest.hpp"

namespace liqshift {

inline constexpr int kBidSide = +1;
inline constexpr int kAskSide = -1;

struct TradeThrough {
    std::int64_t ts_ns = 0;
    int side = kAskSide;  ///< +1 bid consumed (sell aggressor), -1 ask consumed
    int depth = 1;        ///< number of limits exhausted
    std::int64_t volume = 0;

    friend bool operator==(const TradeThrough&, const TradeThrough&) = default;
};

/// Depth exhausted by `volume` against best-first `levels`:
/// max{n : volume >= q_1 + ... + q_n}, 0 when level 1 survives.
[[nodiscard]] int exhausted_depth(std::span<const Level> levels, std::int64_t volume) noexcept;

/// Prints sharing a timestamp and aggressor form one market event, matched
/// against the latest snapshot strictly before that timestamp. Throws
/// MissingSnapshot when there is none.
[[nodiscard]] std::vector<TradeThrough> extract(std::span<const BookSnapshot> snapshots,
                                                std::span<const TradePrint> prints);

enum class SideMode { Bid, Ask, Both };
enum class Multiplicity { Ground, PerLimit };

struct StreamOptions {
    SideMode mode = SideMode::Both;
    Multiplicity multiplicity = Multiplicity::Ground;
    std::int64_t origin_ns = 0;  ///< maps to time 0
    double mark_floor = 1.0;     ///< marks are clipped below at this value
};

/// Bid events map to Stream::B, ask events to Stream::A. Under PerLimit the
/// jump of each point equals its depth.
[[nodiscard]] EventStream to_streams(std::span<const TradeThrough> events, const StreamOptions& opts = {});

/// Arrival times of the per-limit processes N^1..N^D: limit n receives every
/// event of depth >= n. Depths above D are capped at D.
[[nodiscard]] std::vector<std::vector<double>> per_limit_times(std::span<const MarkedEvent> events, int limits);

void write_trades_through_csv(std::ostream& out, std::span<const TradeThrough> events);
[[nodiscard]] std::vector<TradeThrough> parse_trades_through_csv(std::istream& in);
[[nodiscard]] std::vector<TradeThrough> parse_trades_through_csv(const std::string& path);

[[nodiscard]] SideMode parse_side_mode(const std::string& text);
[[nodiscard]] Multiplicity parse_multiplicity(const std::string& text);

}  // namespace liqshift
