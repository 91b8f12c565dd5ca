#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tdho {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time or argument lies outside the declared domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical failures (solver tolerance unmet, caustics, ...). The CLI maps
/// these onto exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SolverFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonPositiveRho : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class CausticError : public NumericalError {
public:
    CausticError(const std::string& what, int channel, double nearest_caustic)
        : NumericalError(what), channel_(channel), nearest_(nearest_caustic) {}

    int channel() const noexcept { return channel_; }
    double nearestCaustic() const noexcept { return nearest_; }

private:
    int channel_;
    double nearest_;
};

class InadmissibleSystem : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonConvergentGaussian : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Aggregated schema violations from scenario parsing.
class SchemaError : public Error {
public:
    explicit SchemaError(std::vector<std::string> violations)
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

}  // namespace tdho
