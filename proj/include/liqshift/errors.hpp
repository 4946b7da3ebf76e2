#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace liqshift {

/// Base class for every error raised by the library. Anything deriving from it
/// is a data or parameter problem (CLI exit code 1), never a usage problem.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParseErrorKind { BadHeader, MalformedRow, NonMonotoneTime, CrossedBook };

[[nodiscard]] const char* to_string(ParseErrorKind kind) noexcept;

/// A located CSV error. `line` is 1-based and counts the header.
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail);

    [[nodiscard]] ParseErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    ParseErrorKind kind_;
    std::size_t line_;
};

class MissingSnapshot : public Error {
public:
    explicit MissingSnapshot(std::int64_t ts_ns);
    [[nodiscard]] std::int64_t timestamp() const noexcept { return ts_ns_; }

private:
    std::int64_t ts_ns_;
};

class StaleState : public Error {
public:
    using Error::Error;
};

class UnstableParams : public Error {
public:
    using Error::Error;
};

class NonPositiveIntensity : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class InvalidRho : public Error {
public:
    using Error::Error;
};

class KinkPoint : public Error {
public:
    using Error::Error;
};

class TimeRegression : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

}  // namespace liqshift
