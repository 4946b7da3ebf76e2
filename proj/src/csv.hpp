#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "liqshift/errors.hpp"

namespace liqshift::csv {

inline std::vector<std::string> split(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
        while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
        fields.emplace_back(field);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

inline bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\r' || c == '\t'; });
}

inline std::int64_t parse_int(const std::string& text, std::size_t line, const char* column) {
    std::int64_t value = 0;
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ParseError(ParseErrorKind::MalformedRow, line,
                         std::string("column '") + column + "' is not an integer: '" + text + "'");
    }
    return value;
}

inline double parse_double(const std::string& text, std::size_t line, const char* column) {
    double value = 0.0;
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ParseError(ParseErrorKind::MalformedRow, line,
                         std::string("column '") + column + "' is not a number: '" + text + "'");
    }
    return value;
}

/// Reads the header line and checks that it starts with `expected`.
inline void check_header(std::istream& in, std::span<const std::string_view> expected) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(ParseErrorKind::BadHeader, 1, "missing header");
    }
    const auto fields = split(line);
    bool ok = fields.size() >= expected.size();
    for (std::size_t i = 0; ok && i < expected.size(); ++i) ok = fields[i] == expected[i];
    if (!ok) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + std::string(expected[i]);
        throw ParseError(ParseErrorKind::BadHeader, 1, "expected header '" + want + "'");
    }
}

inline std::ifstream open(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

}  // namespace liqshift::csv
