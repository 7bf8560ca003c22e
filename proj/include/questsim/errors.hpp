#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qsim {

enum class ErrorCode {
    invalid_argument,
    truncation_risk,
    singular_parameter,
    numeric,
    validation,
    parse,
    unreachable_target,
    undefined_estimate,
    calibration,
    io,
};

/// Base of every exception thrown by the core library. The code survives the
/// trip through the C API so callers can map failures to exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

class TruncationRisk : public Error {
public:
    explicit TruncationRisk(const std::string& what) : Error(ErrorCode::truncation_risk, what) {}
};

class SingularParameter : public Error {
public:
    explicit SingularParameter(const std::string& what) : Error(ErrorCode::singular_parameter, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorCode::numeric, what) {}
};

class UnreachableTarget : public Error {
public:
    explicit UnreachableTarget(const std::string& what) : Error(ErrorCode::unreachable_target, what) {}
};

class UndefinedEstimate : public Error {
public:
    explicit UndefinedEstimate(const std::string& what) : Error(ErrorCode::undefined_estimate, what) {}
};

class CalibrationError : public Error {
public:
    explicit CalibrationError(const std::string& what) : Error(ErrorCode::calibration, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

/// Raised by config loading; carries every violated guard, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> issues)
        : Error(ErrorCode::validation, join(issues)), issues_(std::move(issues)) {}
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out = "config validation failed:";
        for (const auto& s : issues) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> issues_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(ErrorCode::parse, what), line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace qsim
