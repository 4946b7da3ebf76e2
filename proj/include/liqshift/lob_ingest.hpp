#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace liqshift {

inline constexpr std::int64_t kNanosPerSecond = 1'000'000'000;
inline constexpr std::int64_t kNanosPerDay = 86'400 * kNanosPerSecond;

struct Level {
    std::int64_t price = 0;  ///< integer ticks
    std::int64_t size = 0;   ///< shares, > 0

    friend bool operator==(const Level&, const Level&) = default;
};

/// Top-K view of the book at one instant. Both sides are best-first.
struct BookSnapshot {
    std::int64_t ts_ns = 0;
    std::vector<Level> bids;
    std::vector<Level> asks;

    /// Throws InvalidConfig describing the first violated invariant.
    void validate() const;

    friend bool operator==(const BookSnapshot&, const BookSnapshot&) = default;
};

enum class Aggressor { Buy, Sell };

struct TradePrint {
    std::int64_t ts_ns = 0;
    std::int64_t price = 0;
    std::int64_t size = 0;
    Aggressor aggressor = Aggressor::Buy;

    friend bool operator==(const TradePrint&, const TradePrint&) = default;
};

/// Half-open time-of-day window [start, end) used to drop auction phases.
struct SessionWindow {
    std::int64_t start_ns = 0;  ///< nanoseconds after midnight
    std::int64_t end_ns = kNanosPerDay;

    /// Parses "HH:MM:SS-HH:MM:SS".
    static SessionWindow parse(std::string_view text);

    [[nodiscard]] bool contains(std::int64_t ts_ns) const noexcept;
    [[nodiscard]] double length_seconds() const noexcept;
    /// Absolute session start on the calendar day of `ts_ns`.
    [[nodiscard]] std::int64_t origin_for(std::int64_t ts_ns) const noexcept;
};

/// Receives the split fields of a data row (including any columns past the
/// documented ones) and returns false to drop the row. This is the hook for
/// venue-specific flags such as block or off-book trades.
using RowFilter = std::function<bool(std::span<const std::string> fields)>;

struct ParseOptions {
    int depth = 4;
    std::optional<SessionWindow> session;
    RowFilter row_filter;
};

[[nodiscard]] std::vector<BookSnapshot> parse_book_csv(std::istream& in, const ParseOptions& opts = {});
[[nodiscard]] std::vector<BookSnapshot> parse_book_csv(const std::string& path, const ParseOptions& opts = {});

[[nodiscard]] std::vector<TradePrint> parse_trades_csv(std::istream& in, const ParseOptions& opts = {});
[[nodiscard]] std::vector<TradePrint> parse_trades_csv(const std::string& path, const ParseOptions& opts = {});

void write_book_csv(std::ostream& out, std::span<const BookSnapshot> snapshots);
void write_trades_csv(std::ostream& out, std::span<const TradePrint> prints);

struct SynthConfig {
    int depth = 4;
    std::int64_t start_ns = 34'200 * kNanosPerSecond;  ///< 09:30:00
    std::int64_t mid_price = 10'000;                    ///< ticks
    std::int64_t min_level_size = 2;
    std::int64_t max_level_size = 200;
    double trade_rate = 1.0;         ///< market orders per second
    double through_probability = 0.2;  ///< chance that an order exhausts at least level 1
    double deeper_probability = 0.35;  ///< geometric continuation to each further level

    void validate() const;
};

struct SynthResult {
    std::vector<BookSnapshot> snapshots;
    std::vector<TradePrint> prints;
};

/// Synthetic session of `duration` seconds. Market orders arrive as a Poisson
/// stream; each walks the opposite side, emits one print per touched level, and
/// the book is refilled right after. Deterministic in `seed`.
[[nodiscard]] SynthResult synth_book(std::uint64_t seed, double duration, const SynthConfig& cfg = {});

}  // namespace liqshift
