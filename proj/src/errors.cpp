#include "liqshift/errors.hpp"

namespace liqshift {

const char* to_string(ParseErrorKind kind) noexcept {
    switch (kind) {
        case ParseErrorKind::BadHeader:
            return "BadHeader";
        case ParseErrorKind::MalformedRow:
            return "MalformedRow";
        case ParseErrorKind::NonMonotoneTime:
            return "NonMonotoneTime";
        case ParseErrorKind::CrossedBook:
            return "CrossedBook";
    }
    return "Unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
    : Error(std::string(to_string(kind)) + " at line " + std::to_string(line) + ": " + detail),
      kind_(kind),
      line_(line) {}

MissingSnapshot::MissingSnapshot(std::int64_t ts_ns)
    : Error("MissingSnapshot: no pre-trade book before ts_ns=" + std::to_string(ts_ns)), ts_ns_(ts_ns) {}

}  // namespace liqshift
