#pragma once

#include <stdexcept>
#include <string>

namespace tnfun {

// Malformed data (negative weight, atom at origin, bad dimension).
// Distinct from integrability failure, which is a ValidationError.
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

// A structurally sound triple whose measure fails the moment conditions.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad call argument (non-positive shift, mixed arities, malformed permutation...).
struct ArgumentError : std::runtime_error {
    explicit ArgumentError(const std::string& msg) : std::runtime_error(msg) {}
};

// Quadrature did not reach the requested tolerance within budget.
struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& msg, double achieved_error)
        : std::runtime_error(msg), achieved(achieved_error) {}
    double achieved;  // best error estimate at the point of failure
};

// A factory precondition failed (drift present, infinite first moment,
// divergent existence probe, ...).
struct ConstructionError : std::runtime_error {
    explicit ConstructionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluator failure at a specific point, propagated with context.
struct EvaluationError : std::runtime_error {
    explicit EvaluationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression parse failure; position is a 0-based character offset.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " at position " + std::to_string(position)),
          pos(position) {}
    std::size_t pos;
};

}  // namespace tnfun
