#pragma once

#include <stdexcept>
#include <string>

namespace gaussdisturb {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input violates positivity or the uncertainty principle.
class NonPhysical : public Error {
public:
    explicit NonPhysical(const std::string& what) : Error(what) {}
};

/// Matrix inversion attempted on a (near-)singular matrix.
class Singular : public Error {
public:
    explicit Singular(const std::string& what) : Error(what) {}
};

/// Standard-form reduction hit a degenerate invariant system.
class Degenerate : public Error {
public:
    explicit Degenerate(const std::string& what) : Error(what) {}
};

/// Parameters outside the admissible range of a state family or formula.
class OutOfRange : public Error {
public:
    explicit OutOfRange(const std::string& what) : Error(what) {}
};

/// Argument outside a function's mathematical domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// An iterative computation failed to reach its target tolerance.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error(what) {}
};

/// Catastrophic cancellation detected beyond repair.
class PrecisionError : public Error {
public:
    explicit PrecisionError(const std::string& what) : Error(what) {}
};

/// Closed-form branch and independent numeric optimizer disagree.
class OptimizerDisagreement : public Error {
public:
    explicit OptimizerDisagreement(const std::string& what) : Error(what) {}
};

/// Rejection sampler exceeded its rejection budget.
class SamplingExhausted : public Error {
public:
    explicit SamplingExhausted(const std::string& what) : Error(what) {}
};

/// Malformed state specification or CLI input.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace gaussdisturb
