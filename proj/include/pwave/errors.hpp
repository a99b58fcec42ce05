#pragma once

#include <stdexcept>
#include <string>

namespace pwave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time (or other coordinate) lies outside the range an object is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid argument or violated precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A non-finite value appeared while integrating.
class NumericalBlowup : public Error {
public:
    NumericalBlowup(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Newton iteration failed to reach its tolerance within the iteration cap.
class StepFailure : public Error {
public:
    StepFailure(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// A trace carries no usable information (e.g. E(0) = 0).
class DegenerateTrace : public Error {
public:
    using Error::Error;
};

/// A regression cannot be formed (nonpositive energies, constant abscissa).
class DegenerateFit : public Error {
public:
    using Error::Error;
};

/// An analysis hypothesis does not hold on the data. `condition()` names it.
class HypothesisViolation : public Error {
public:
    HypothesisViolation(const std::string& what, std::string condition)
        : Error(what), condition_(std::move(condition)) {}
    const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, std::string field = {})
        : Error(what), line_(line), field_(std::move(field)) {}
    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

}  // namespace pwave
