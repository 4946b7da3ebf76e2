#include "liqshift/lob_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#include "csv.hpp"
#include "liqshift/errors.hpp"

namespace liqshift {

namespace {

constexpr std::string_view kBookHeader[] = {"ts_ns", "side", "level", "price_ticks", "size"};
constexpr std::string_view kTradesHeader[] = {"ts_ns", "price_ticks", "size", "aggressor"};

struct BookRow {
    char side;
    std::int64_t level;
    std::int64_t price;
    std::int64_t size;
    std::size_t line;
};

BookSnapshot assemble(std::int64_t ts, std::vector<BookRow>& rows, int depth) {
    std::erase_if(rows, [depth](const BookRow& r) { return r.level > depth; });
    std::stable_sort(rows.begin(), rows.end(), [](const BookRow& a, const BookRow& b) {
        return a.side != b.side ? a.side < b.side : a.level < b.level;
    });

    BookSnapshot snap;
    snap.ts_ns = ts;
    std::size_t best_bid_line = 0;
    std::size_t best_ask_line = 0;
    for (const auto& side_char : {'B', 'A'}) {
        auto& levels = side_char == 'B' ? snap.bids : snap.asks;
        for (const auto& row : rows) {
            if (row.side != side_char) continue;
            const auto expected_level = static_cast<std::int64_t>(levels.size()) + 1;
            if (row.level != expected_level) {
                throw ParseError(ParseErrorKind::MalformedRow, row.line,
                                 "level " + std::to_string(row.level) + " on side " + side_char + " but expected " +
                                     std::to_string(expected_level));
            }
            if (!levels.empty()) {
                const bool ordered = side_char == 'B' ? row.price < levels.back().price : row.price > levels.back().price;
                if (!ordered) {
                    throw ParseError(ParseErrorKind::MalformedRow, row.line,
                                     std::string("prices not strictly ") +
                                         (side_char == 'B' ? "decreasing on bid side" : "increasing on ask side"));
                }
            } else {
                (side_char == 'B' ? best_bid_line : best_ask_line) = row.line;
            }
            levels.push_back({row.price, row.size});
        }
    }
    if (!snap.bids.empty() && !snap.asks.empty() && snap.bids.front().price >= snap.asks.front().price) {
        throw ParseError(ParseErrorKind::CrossedBook, std::max(best_bid_line, best_ask_line),
                         "best bid " + std::to_string(snap.bids.front().price) + " >= best ask " +
                             std::to_string(snap.asks.front().price));
    }
    return snap;
}

}  // namespace

void BookSnapshot::validate() const {
    for (std::size_t i = 0; i < bids.size(); ++i) {
        if (bids[i].size <= 0) throw InvalidConfig("bid size must be positive");
        if (i && bids[i].price >= bids[i - 1].price) throw InvalidConfig("bid prices must strictly decrease");
    }
    for (std::size_t i = 0; i < asks.size(); ++i) {
        if (asks[i].size <= 0) throw InvalidConfig("ask size must be positive");
        if (i && asks[i].price <= asks[i - 1].price) throw InvalidConfig("ask prices must strictly increase");
    }
    if (!bids.empty() && !asks.empty() && bids.front().price >= asks.front().price) {
        throw InvalidConfig("crossed book");
    }
}

SessionWindow SessionWindow::parse(std::string_view text) {
    auto parse_tod = [&](std::string_view part) -> std::int64_t {
        int h = 0, m = 0, s = 0;
        if (part.size() != 8 || part[2] != ':' || part[5] != ':') {
            throw InvalidConfig("session time must be HH:MM:SS, got '" + std::string(part) + "'");
        }
        auto num = [&](std::size_t pos, int& out) {
            auto [p, ec] = std::from_chars(part.data() + pos, part.data() + pos + 2, out);
            if (ec != std::errc{} || p != part.data() + pos + 2) {
                throw InvalidConfig("bad session time '" + std::string(part) + "'");
            }
        };
        num(0, h);
        num(3, m);
        num(6, s);
        if (h > 24 || m > 59 || s > 59) throw InvalidConfig("bad session time '" + std::string(part) + "'");
        return (static_cast<std::int64_t>(h) * 3600 + m * 60 + s) * kNanosPerSecond;
    };
    const auto dash = text.find('-');
    if (dash == std::string_view::npos) throw InvalidConfig("session must be HH:MM:SS-HH:MM:SS");
    SessionWindow w{parse_tod(text.substr(0, dash)), parse_tod(text.substr(dash + 1))};
    if (w.end_ns <= w.start_ns) throw InvalidConfig("session end must be after start");
    return w;
}

bool SessionWindow::contains(std::int64_t ts_ns) const noexcept {
    const auto tod = ((ts_ns % kNanosPerDay) + kNanosPerDay) % kNanosPerDay;
    return tod >= start_ns && tod < end_ns;
}

double SessionWindow::length_seconds() const noexcept {
    return static_cast<double>(end_ns - start_ns) / static_cast<double>(kNanosPerSecond);
}

std::int64_t SessionWindow::origin_for(std::int64_t ts_ns) const noexcept {
    const auto tod = ((ts_ns % kNanosPerDay) + kNanosPerDay) % kNanosPerDay;
    return ts_ns - tod + start_ns;
}

std::vector<BookSnapshot> parse_book_csv(std::istream& in, const ParseOptions& opts) {
    if (opts.depth < 1) throw InvalidConfig("depth must be >= 1");
    csv::check_header(in, kBookHeader);

    std::vector<BookSnapshot> out;
    std::vector<BookRow> group;
    std::optional<std::int64_t> group_ts;
    std::optional<std::int64_t> last_ts;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::is_blank(line)) continue;
        const auto fields = csv::split(line);
        if (fields.size() < 5) {
            throw ParseError(ParseErrorKind::MalformedRow, line_no, "expected 5 fields");
        }
        const auto ts = csv::parse_int(fields[0], line_no, "ts_ns");
        if (fields[1] != "B" && fields[1] != "A") {
            throw ParseError(ParseErrorKind::MalformedRow, line_no, "side must be B or A");
        }
        const auto level = csv::parse_int(fields[2], line_no, "level");
        const auto price = csv::parse_int(fields[3], line_no, "price_ticks");
        const auto size = csv::parse_int(fields[4], line_no, "size");
        if (level < 1) throw ParseError(ParseErrorKind::MalformedRow, line_no, "level must be >= 1");
        if (price <= 0) throw ParseError(ParseErrorKind::MalformedRow, line_no, "price must be positive");
        if (size <= 0) throw ParseError(ParseErrorKind::MalformedRow, line_no, "size must be positive");
        if (last_ts && ts < *last_ts) {
            throw ParseError(ParseErrorKind::NonMonotoneTime, line_no,
                             "ts_ns " + std::to_string(ts) + " < previous " + std::to_string(*last_ts));
        }
        last_ts = ts;

        if (opts.session && !opts.session->contains(ts)) continue;
        if (opts.row_filter && !opts.row_filter(fields)) continue;

        if (group_ts && ts != *group_ts) {
            out.push_back(assemble(*group_ts, group, opts.depth));
            group.clear();
        }
        group_ts = ts;
        group.push_back({fields[1][0], level, price, size, line_no});
    }
    if (group_ts) out.push_back(assemble(*group_ts, group, opts.depth));
    return out;
}

std::vector<BookSnapshot> parse_book_csv(const std::string& path, const ParseOptions& opts) {
    auto in = csv::open(path);
    return parse_book_csv(in, opts);
}

std::vector<TradePrint> parse_trades_csv(std::istream& in, const ParseOptions& opts) {
    csv::check_header(in, kTradesHeader);

    std::vector<TradePrint> out;
    std::optional<std::int64_t> last_ts;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::is_blank(line)) continue;
        const auto fields = csv::split(line);
        if (fields.size() < 4) {
            throw ParseError(ParseErrorKind::MalformedRow, line_no, "expected 4 fields");
        }
        TradePrint p;
        p.ts_ns = csv::parse_int(fields[0], line_no, "ts_ns");
        p.price = csv::parse_int(fields[1], line_no, "price_ticks");
        p.size = csv::parse_int(fields[2], line_no, "size");
        if (fields[3] == "B") {
            p.aggressor = Aggressor::Buy;
        } else if (fields[3] == "S") {
            p.aggressor = Aggressor::Sell;
        } else {
            throw ParseError(ParseErrorKind::MalformedRow, line_no, "aggressor must be B or S");
        }
        if (p.price <= 0) throw ParseError(ParseErrorKind::MalformedRow, line_no, "price must be positive");
        if (p.size <= 0) throw ParseError(ParseErrorKind::MalformedRow, line_no, "size must be positive");
        if (last_ts && p.ts_ns < *last_ts) {
            throw ParseError(ParseErrorKind::NonMonotoneTime, line_no,
                             "ts_ns " + std::to_string(p.ts_ns) + " < previous " + std::to_string(*last_ts));
        }
        last_ts = p.ts_ns;

        if (opts.session && !opts.session->contains(p.ts_ns)) continue;
        if (opts.row_filter && !opts.row_filter(fields)) continue;
        out.push_back(p);
    }
    return out;
}

std::vector<TradePrint> parse_trades_csv(const std::string& path, const ParseOptions& opts) {
    auto in = csv::open(path);
    return parse_trades_csv(in, opts);
}

void write_book_csv(std::ostream& out, std::span<const BookSnapshot> snapshots) {
    out << "ts_ns,side,level,price_ticks,size\n";
    for (const auto& s : snapshots) {
        for (std::size_t i = 0; i < s.bids.size(); ++i) {
            out << s.ts_ns << ",B," << i + 1 << ',' << s.bids[i].price << ',' << s.bids[i].size << '\n';
        }
        for (std::size_t i = 0; i < s.asks.size(); ++i) {
            out << s.ts_ns << ",A," << i + 1 << ',' << s.asks[i].price << ',' << s.asks[i].size << '\n';
        }
    }
}

void write_trades_csv(std::ostream& out, std::span<const TradePrint> prints) {
    out << "ts_ns,price_ticks,size,aggressor\n";
    for (const auto& p : prints) {
        out << p.ts_ns << ',' << p.price << ',' << p.size << ',' << (p.aggressor == Aggressor::Buy ? 'B' : 'S')
            << '\n';
    }
}

void SynthConfig::validate() const {
    if (depth < 1) throw InvalidConfig("synth depth must be >= 1");
    if (min_level_size < 2 || max_level_size < min_level_size) {
        throw InvalidConfig("synth level sizes need 2 <= min <= max");
    }
    if (!(trade_rate >= 0.0) || !std::isfinite(trade_rate)) throw InvalidConfig("trade_rate must be >= 0");
    if (!(through_probability >= 0.0 && through_probability <= 1.0)) {
        throw InvalidConfig("through_probability must be in [0,1]");
    }
    if (!(deeper_probability >= 0.0 && deeper_probability < 1.0)) {
        throw InvalidConfig("deeper_probability must be in [0,1)");
    }
    if (mid_price <= 2L * depth) throw InvalidConfig("mid_price too small for the requested depth");
}

SynthResult synth_book(std::uint64_t seed, double duration, const SynthConfig& cfg) {
    if (!(duration > 0.0)) throw InvalidConfig("duration must be positive");
    cfg.validate();

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> level_size(cfg.min_level_size, cfg.max_level_size);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto k = static_cast<std::size_t>(cfg.depth);

    std::vector<Level> bids;
    std::vector<Level> asks;
    for (std::size_t i = 0; i < k; ++i) {
        bids.push_back({cfg.mid_price - static_cast<std::int64_t>(i), level_size(rng)});
        asks.push_back({cfg.mid_price + 1 + static_cast<std::int64_t>(i), level_size(rng)});
    }

    SynthResult result;
    result.snapshots.push_back({cfg.start_ns, bids, asks});

    // Refills the attacked side back to one tick from the opposite best and
    // tops it up to K levels.
    auto refill = [&](std::vector<Level>& side, bool is_bid, std::int64_t opposite_best) {
        const std::int64_t step = is_bid ? -1 : 1;
        const std::int64_t inside = opposite_best + step;
        std::vector<Level> rebuilt;
        std::int64_t price = inside;
        std::size_t kept = 0;
        while (rebuilt.size() < k) {
            if (kept < side.size() && side[kept].price == price) {
                rebuilt.push_back(side[kept++]);
            } else {
                rebuilt.push_back({price, level_size(rng)});
            }
            price += step;
        }
        side = std::move(rebuilt);
    };

    const auto horizon_ns = static_cast<std::int64_t>(std::llround(duration * static_cast<double>(kNanosPerSecond)));
    std::int64_t t = cfg.start_ns;
    if (cfg.trade_rate <= 0.0) return result;
    std::exponential_distribution<double> gap(cfg.trade_rate);
    while (true) {
        const auto dt = std::max<std::int64_t>(
            3, static_cast<std::int64_t>(std::llround(gap(rng) * static_cast<double>(kNanosPerSecond))));
        t += dt;
        if (t - cfg.start_ns >= horizon_ns) break;

        const auto aggressor = unit(rng) < 0.5 ? Aggressor::Buy : Aggressor::Sell;
        auto& side = aggressor == Aggressor::Buy ? asks : bids;

        std::int64_t volume = 0;
        if (unit(rng) < cfg.through_probability) {
            std::size_t depth = 1;
            while (depth < k && unit(rng) < cfg.deeper_probability) ++depth;
            for (std::size_t i = 0; i < depth; ++i) volume += side[i].size;
            if (depth < k) {
                volume += std::uniform_int_distribution<std::int64_t>(0, side[depth].size - 1)(rng);
            }
        } else {
            volume = std::uniform_int_distribution<std::int64_t>(1, side[0].size - 1)(rng);
        }

        std::int64_t remaining = volume;
        std::size_t consumed = 0;
        while (remaining > 0 && consumed < side.size()) {
            auto& lvl = side[consumed];
            const auto take = std::min(remaining, lvl.size);
            result.prints.push_back({t, lvl.price, take, aggressor});
            remaining -= take;
            lvl.size -= take;
            if (lvl.size == 0) ++consumed;
        }
        side.erase(side.begin(), side.begin() + static_cast<std::ptrdiff_t>(consumed));

        if (aggressor == Aggressor::Buy) {
            refill(asks, false, bids.front().price);
        } else {
            refill(bids, true, asks.front().price);
        }
        // Keep every level at least min_level_size deep so that the next
        // order can always stay inside level 1.
        for (auto& lvl : side) {
            if (lvl.size < cfg.min_level_size) lvl.size = level_size(rng);
        }
        result.snapshots.push_back({t + 1, bids, asks});
    }
    return result;
}

}  // namespace liqshift
