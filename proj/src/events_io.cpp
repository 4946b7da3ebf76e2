#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "liqshift/io.hpp"

namespace liqshift {

namespace {

constexpr std::string_view kEventsHeader[] = {"time", "stream", "mark", "jump"};

}  // namespace

void write_events_csv(std::ostream& out, std::span<const MarkedEvent> events) {
    const auto old = out.precision(std::numeric_limits<double>::max_digits10);
    out << "time,stream,mark,jump\n";
    for (const auto& e : events) {
        out << e.time << ',' << (e.stream == Stream::A ? 'A' : 'B') << ',' << e.mark << ',' << e.jump << '\n';
    }
    out.precision(old);
}

EventStream parse_events_csv(std::istream& in) {
    csv::check_header(in, kEventsHeader);
    EventStream out;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::is_blank(line)) continue;
        const auto f = csv::split(line);
        if (f.size() < 4) throw ParseError(ParseErrorKind::MalformedRow, line_no, "expected 4 fields");
        MarkedEvent e;
        e.time = csv::parse_double(f[0], line_no, "time");
        if (f[1] == "A") {
            e.stream = Stream::A;
        } else if (f[1] == "B") {
            e.stream = Stream::B;
        } else {
            throw ParseError(ParseErrorKind::MalformedRow, line_no, "stream must be A or B");
        }
        e.mark = csv::parse_double(f[2], line_no, "mark");
        const auto jump = csv::parse_int(f[3], line_no, "jump");
        if (!(e.mark > 0.0)) throw ParseError(ParseErrorKind::MalformedRow, line_no, "mark must be positive");
        if (jump < 1) throw ParseError(ParseErrorKind::MalformedRow, line_no, "jump must be >= 1");
        if (!(e.time >= 0.0)) throw ParseError(ParseErrorKind::MalformedRow, line_no, "time must be >= 0");
        if (!out.empty() && e.time < out.back().time) {
            throw ParseError(ParseErrorKind::NonMonotoneTime, line_no, "time decreases");
        }
        e.jump = static_cast<int>(jump);
        out.push_back(e);
    }
    return out;
}

EventStream load_events(const std::string& path, const StreamOptions& opts) {
    auto in = csv::open(path);
    std::string header;
    std::getline(in, header);
    std::istringstream rewound(header + "\n" + std::string(std::istreambuf_iterator<char>(in), {}));
    if (header.rfind("ts_ns,", 0) == 0) return to_streams(parse_trades_through_csv(rewound), opts);
    return parse_events_csv(rewound);
}

}  // namespace liqshift
