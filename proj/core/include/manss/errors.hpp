#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace manss {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad parameters: non-prime or even modulus, unsupported base, malformed config.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// A complex whose consecutive differentials do not compose to zero.
class ComplexError : public Error {
public:
    using Error::Error;
};

/// Enumeration request outside the configured bounds.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A slice too large to build.
class ResourceError : public Error {
public:
    ResourceError(const std::string& what, std::size_t slice_size)
        : Error(what), slice_size_(slice_size) {}
    std::size_t slice_size() const noexcept { return slice_size_; }

private:
    std::size_t slice_size_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct Violation {
    int s = 0;
    int stem = 0;
    std::string rule;
    std::string detail;
};

/// Invariant violations found while validating a chart. Lists every offending cell.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Pages requested out of order, or differentials left unconsumed.
class SequencingError : public Error {
public:
    using Error::Error;
};

/// A structural invariant broken during computation (e.g. a differential touching torsion).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace manss
