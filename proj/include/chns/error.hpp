#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace chns {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LinearSolveFailure : public Error {
public:
    using Error::Error;
};

/// A field norm exceeded the blow-up guard.
class StabilityBreach : public Error {
public:
    using Error::Error;
};

/// Boundary data at t = 0 does not match the initial velocity trace,
/// or a control slice carries net normal flux.
class CompatibilityViolation : public Error {
public:
    using Error::Error;
};

class TimeNodeMismatch : public Error {
public:
    using Error::Error;
};

class TrajectoryIncomplete : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class MissingInput : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Carries every violation found in one validation pass.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }
    std::vector<std::string> violations_;
};

}  // namespace chns
