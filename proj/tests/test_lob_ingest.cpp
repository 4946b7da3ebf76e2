#include <sstream>
#include <string>

#include "doctest.h"
#include "liqshift/errors.hpp"
#include "liqshift/lob_ingest.hpp"
#include "liqshift/trades_through.hpp"

using namespace liqshift;

namespace {

ParseError book_error(const std::string& text) {
    std::istringstream in(text);
    try {
        (void)parse_book_csv(in);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a ParseError");
    return ParseError(ParseErrorKind::BadHeader, 0, "");
}

ParseError trades_error(const std::string& text) {
    std::istringstream in(text);
    try {
        (void)parse_trades_csv(in);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a ParseError");
    return ParseError(ParseErrorKind::BadHeader, 0, "");
}

const char* kTwoSnapshots =
    "ts_ns,side,level,price_ticks,size\n"
    "100,B,1,99,10\n"
    "100,B,2,98,5\n"
    "100,A,1,101,7\n"
    "200,B,1,99,3\n"
    "200,A,1,101,4\n"
    "200,A,2,102,9\n";

}  // namespace

TEST_CASE("book csv: well-formed file") {
    std::istringstream in(kTwoSnapshots);
    const auto snaps = parse_book_csv(in);
    REQUIRE(snaps.size() == 2);
    CHECK(snaps[0].ts_ns == 100);
    CHECK(snaps[0].bids == std::vector<Level>{{99, 10}, {98, 5}});
    CHECK(snaps[0].asks == std::vector<Level>{{101, 7}});
    CHECK(snaps[1].asks == std::vector<Level>{{101, 4}, {102, 9}});
}

TEST_CASE("book csv: levels past the depth are dropped") {
    std::istringstream in(kTwoSnapshots);
    ParseOptions opts;
    opts.depth = 1;
    const auto snaps = parse_book_csv(in, opts);
    CHECK(snaps[0].bids.size() == 1);
    CHECK(snaps[1].asks.size() == 1);
}

TEST_CASE("book csv: located errors") {
    auto e = book_error("ts_ns,side,level,price_ticks,size\n100,B,1,101,10\n100,A,1,101,7\n");
    CHECK(e.kind() == ParseErrorKind::CrossedBook);
    CHECK(e.line() == 3);

    e = book_error("ts_ns,side,level,price_ticks,size\n200,B,1,99,10\n100,A,1,101,7\n");
    CHECK(e.kind() == ParseErrorKind::NonMonotoneTime);
    CHECK(e.line() == 3);

    e = book_error("ts_ns,side,level,price_ticks,size\n100,B,1,99,ten\n");
    CHECK(e.kind() == ParseErrorKind::MalformedRow);
    CHECK(e.line() == 2);

    e = book_error("ts_ns,side,level,price_ticks,size\n100,B,1,99,10\n100,X,1,101,7\n");
    CHECK(e.kind() == ParseErrorKind::MalformedRow);
    CHECK(e.line() == 3);

    e = book_error("ts_ns,side,level,price_ticks,size\n100,B,1,99,10\n100,B,2,99,4\n");
    CHECK(e.kind() == ParseErrorKind::MalformedRow);
    CHECK(e.line() == 3);

    e = book_error("time,side,level,price,size\n");
    CHECK(e.kind() == ParseErrorKind::BadHeader);
    CHECK(e.line() == 1);
}

TEST_CASE("trades csv: empty body, zero size and bad aggressor") {
    std::istringstream empty("ts_ns,price_ticks,size,aggressor\n");
    CHECK(parse_trades_csv(empty).empty());

    auto e = trades_error("ts_ns,price_ticks,size,aggressor\n10,101,5,B\n11,101,0,S\n");
    CHECK(e.kind() == ParseErrorKind::MalformedRow);
    CHECK(e.line() == 3);

    e = trades_error("ts_ns,price_ticks,size,aggressor\n10,101,5,X\n");
    CHECK(e.line() == 2);

    e = trades_error("ts_ns,price_ticks,size,aggressor\n10,101,5,B\n9,101,5,B\n");
    CHECK(e.kind() == ParseErrorKind::NonMonotoneTime);
}

TEST_CASE("row filter and session window") {
    std::istringstream in(
        "ts_ns,price_ticks,size,aggressor,flag\n"
        "34200000000000,101,5,B,\n"
        "34201000000000,101,5,B,BLOCK\n"
        "61200000000000,101,5,S,\n");
    ParseOptions opts;
    opts.row_filter = [](std::span<const std::string> f) { return f.size() < 5 || f[4] != "BLOCK"; };
    opts.session = SessionWindow::parse("09:30:00-17:00:00");
    const auto prints = parse_trades_csv(in, opts);
    REQUIRE(prints.size() == 1);
    CHECK(prints[0].ts_ns == 34200000000000);

    const auto w = SessionWindow::parse("09:30:00-17:00:00");
    CHECK(w.length_seconds() == doctest::Approx(27000.0));
    CHECK(w.contains(34200LL * kNanosPerSecond));
    CHECK_FALSE(w.contains(61200LL * kNanosPerSecond));
    CHECK(w.origin_for(3 * kNanosPerDay + 40000LL * kNanosPerSecond) == 3 * kNanosPerDay + 34200LL * kNanosPerSecond);
    CHECK_THROWS_AS((void)SessionWindow::parse("17:00:00-09:30:00"), InvalidConfig);
}

TEST_CASE("round trip of both schemas") {
    SynthConfig cfg;
    cfg.trade_rate = 3.0;
    const auto s = synth_book(11, 300.0, cfg);
    std::ostringstream book, trades;
    write_book_csv(book, s.snapshots);
    write_trades_csv(trades, s.prints);
    std::istringstream book_in(book.str()), trades_in(trades.str());
    CHECK(parse_book_csv(book_in) == s.snapshots);
    CHECK(parse_trades_csv(trades_in) == s.prints);
}

TEST_CASE("synth: determinism, zero rate and invariants") {
    const auto a = synth_book(5, 200.0);
    const auto b = synth_book(5, 200.0);
    std::ostringstream ab, bb, at, bt;
    write_book_csv(ab, a.snapshots);
    write_book_csv(bb, b.snapshots);
    write_trades_csv(at, a.prints);
    write_trades_csv(bt, b.prints);
    CHECK(ab.str() == bb.str());
    CHECK(at.str() == bt.str());

    SynthConfig quiet;
    quiet.trade_rate = 0.0;
    CHECK(synth_book(5, 200.0, quiet).prints.empty());

    for (const auto& snap : a.snapshots) CHECK_NOTHROW(snap.validate());
    CHECK_THROWS_AS((void)synth_book(5, 0.0), InvalidConfig);
}

TEST_CASE("synth: prints are consistent with the pre-trade book") {
    const auto s = synth_book(21, 2000.0);
    std::size_t snap = 0;
    for (std::size_t i = 0; i < s.prints.size();) {
        const auto ts = s.prints[i].ts_ns;
        const auto side = s.prints[i].aggressor;
        std::int64_t volume = 0;
        std::size_t levels_hit = 0;
        for (; i < s.prints.size() && s.prints[i].ts_ns == ts && s.prints[i].aggressor == side; ++i) {
            volume += s.prints[i].size;
            ++levels_hit;
        }
        while (snap + 1 < s.snapshots.size() && s.snapshots[snap + 1].ts_ns < ts) ++snap;
        const auto& book = s.snapshots[snap];
        REQUIRE(book.ts_ns < ts);
        const auto& levels = side == Aggressor::Buy ? book.asks : book.bids;
        const int d = exhausted_depth(levels, volume);
        // displayed volume over consumed levels plus one partial level
        std::int64_t cap = 0;
        for (int n = 0; n < std::min<int>(d + 1, static_cast<int>(levels.size())); ++n) cap += levels[n].size;
        CHECK(volume <= cap);
        CHECK(levels_hit <= static_cast<std::size_t>(d + 1));
    }
}

TEST_CASE("parse count equals row-group count on a large file") {
    SynthConfig cfg;
    cfg.trade_rate = 2.2;
    const auto s = synth_book(3, 60000.0, cfg);
    std::ostringstream out;
    write_book_csv(out, s.snapshots);
    const std::string text = out.str();

    // independent count: number of runs of equal first fields after the header
    std::istringstream lines(text);
    std::string line, prev;
    std::getline(lines, line);
    std::size_t rows = 0, groups = 0;
    while (std::getline(lines, line)) {
        ++rows;
        const auto key = line.substr(0, line.find(','));
        if (key != prev) ++groups;
        prev = key;
    }
    CHECK(rows >= 1000000);
    std::istringstream in(text);
    CHECK(parse_book_csv(in).size() == groups);

    std::ostringstream tout;
    write_trades_csv(tout, s.prints);
    const std::string ttext = tout.str();
    const auto newlines = static_cast<std::size_t>(std::count(ttext.begin(), ttext.end(), '\n'));
    std::istringstream tin(ttext);
    CHECK(parse_trades_csv(tin).size() == newlines - 1);
}
