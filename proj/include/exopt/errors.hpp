#pragma once

#include <stdexcept>
#include <string>

namespace exopt {

// Base class for all library errors. The CLI maps subclasses onto its
// exit-code contract, everything else can catch this one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Ill-posed inputs: degenerate market (x_up == x_dn), length mismatches,
// invalid tree parameters.
class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& msg) : Error(msg) {}
};

// Martingale probability outside the no-arbitrage window. Carries the
// offending value so diagnostics can show it.
class ArbitrageError : public Error {
public:
    ArbitrageError(const std::string& msg, double offending_prob)
        : Error(msg), prob(offending_prob) {}
    double prob;
};

// Unsupported or inconsistent configuration (step size too coarse,
// non-constant discount schedule where a constant one is required, ...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Payoff expression syntax error. Carries the byte offset and the set of
// tokens that would have been accepted there.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t byte_offset,
               std::string expected_tokens)
        : Error(msg), offset(byte_offset), expected(std::move(expected_tokens)) {}
    std::size_t offset;
    std::string expected;
};

// Payoff expression evaluation error (division by zero, domain error).
// Carries the offending subexpression, rendered as text.
class EvalError : public Error {
public:
    EvalError(const std::string& msg, std::string subexpression)
        : Error(msg), subexpr(std::move(subexpression)) {}
    std::string subexpr;
};

}  // namespace exopt
