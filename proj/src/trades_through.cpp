#include "liqshift/trades_through.hpp"

#include <algorithm>
#include <ostream>

#include "csv.hpp"
#include "liqshift/errors.hpp"

namespace liqshift {

namespace {

constexpr std::string_view kHeader[] = {"ts_ns", "side", "depth", "volume"};

}  // namespace

int exhausted_depth(std::span<const Level> levels, std::int64_t volume) noexcept {
    int depth = 0;
    std::int64_t cumulative = 0;
    for (const auto& lvl : levels) {
        cumulative += lvl.size;
        if (volume < cumulative) break;
        ++depth;
    }
    return depth;
}

std::vector<TradeThrough> extract(std::span<const BookSnapshot> snapshots, std::span<const TradePrint> prints) {
    std::vector<TradeThrough> out;
    std::size_t snap = 0;  // one past the latest snapshot strictly before the current print
    std::size_t i = 0;
    while (i < prints.size()) {
        const auto ts = prints[i].ts_ns;
        if (i > 0 && ts < prints[i - 1].ts_ns) {
            throw InvalidConfig("trade prints not time-sorted at index " + std::to_string(i));
        }
        std::size_t j = i;
        std::int64_t volume[2] = {0, 0};  // [buy, sell]
        bool seen[2] = {false, false};
        int first = -1;
        while (j < prints.size() && prints[j].ts_ns == ts) {
            const int a = prints[j].aggressor == Aggressor::Buy ? 0 : 1;
            if (first < 0) first = a;
            seen[a] = true;
            volume[a] += prints[j].size;
            ++j;
        }
        while (snap < snapshots.size() && snapshots[snap].ts_ns < ts) ++snap;
        if (snap == 0) throw MissingSnapshot(ts);
        const auto& book = snapshots[snap - 1];

        for (int a : {first, 1 - first}) {
            if (!seen[a]) continue;
            const auto& levels = a == 0 ? book.asks : book.bids;
            const int depth = exhausted_depth(levels, volume[a]);
            if (depth > 0) out.push_back({ts, a == 0 ? kAskSide : kBidSide, depth, volume[a]});
        }
        i = j;
    }
    return out;
}

EventStream to_streams(std::span<const TradeThrough> events, const StreamOptions& opts) {
    EventStream out;
    out.reserve(events.size());
    for (const auto& e : events) {
        if (e.side == kBidSide && opts.mode == SideMode::Ask) continue;
        if (e.side == kAskSide && opts.mode == SideMode::Bid) continue;
        MarkedEvent m;
        m.time = static_cast<double>(e.ts_ns - opts.origin_ns) / static_cast<double>(kNanosPerSecond);
        m.stream = e.side == kBidSide ? Stream::B : Stream::A;
        m.mark = std::max(static_cast<double>(e.volume), opts.mark_floor);
        m.jump = opts.multiplicity == Multiplicity::PerLimit ? e.depth : 1;
        out.push_back(m);
    }
    return out;
}

std::vector<std::vector<double>> per_limit_times(std::span<const MarkedEvent> events, int limits) {
    if (limits < 1) throw InvalidConfig("limit count must be >= 1");
    std::vector<std::vector<double>> out(static_cast<std::size_t>(limits));
    for (const auto& e : events) {
        const int top = std::min(e.jump, limits);
        for (int n = 0; n < top; ++n) out[static_cast<std::size_t>(n)].push_back(e.time);
    }
    return out;
}

void write_trades_through_csv(std::ostream& out, std::span<const TradeThrough> events) {
    out << "ts_ns,side,depth,volume\n";
    for (const auto& e : events) out << e.ts_ns << ',' << e.side << ',' << e.depth << ',' << e.volume << '\n';
}

std::vector<TradeThrough> parse_trades_through_csv(std::istream& in) {
    csv::check_header(in, kHeader);
    std::vector<TradeThrough> out;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::is_blank(line)) continue;
        const auto f = csv::split(line);
        if (f.size() < 4) throw ParseError(ParseErrorKind::MalformedRow, line_no, "expected 4 fields");
        TradeThrough e;
        e.ts_ns = csv::parse_int(f[0], line_no, "ts_ns");
        const auto side = csv::parse_int(f[1], line_no, "side");
        const auto depth = csv::parse_int(f[2], line_no, "depth");
        e.volume = csv::parse_int(f[3], line_no, "volume");
        if (side != kBidSide && side != kAskSide) {
            throw ParseError(ParseErrorKind::MalformedRow, line_no, "side must be 1 or -1");
        }
        if (depth < 1) throw ParseError(ParseErrorKind::MalformedRow, line_no, "depth must be >= 1");
        if (e.volume <= 0) throw ParseError(ParseErrorKind::MalformedRow, line_no, "volume must be positive");
        if (!out.empty() && e.ts_ns < out.back().ts_ns) {
            throw ParseError(ParseErrorKind::NonMonotoneTime, line_no, "ts_ns decreases");
        }
        e.side = static_cast<int>(side);
        e.depth = static_cast<int>(depth);
        out.push_back(e);
    }
    return out;
}

std::vector<TradeThrough> parse_trades_through_csv(const std::string& path) {
    auto in = csv::open(path);
    return parse_trades_through_csv(in);
}

SideMode parse_side_mode(const std::string& text) {
    if (text == "bid") return SideMode::Bid;
    if (text == "ask") return SideMode::Ask;
    if (text == "both") return SideMode::Both;
    throw InvalidConfig("mode must be bid, ask or both");
}

Multiplicity parse_multiplicity(const std::string& text) {
    if (text == "ground") return Multiplicity::Ground;
    if (text == "per-limit") return Multiplicity::PerLimit;
    throw InvalidConfig("multiplicity must be ground or per-limit");
}

}  // namespace liqshift
