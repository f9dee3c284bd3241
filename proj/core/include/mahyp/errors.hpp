#ifndef MAHYP_ERRORS_HPP
#define MAHYP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mahyp {

/// Malformed expression text. `position` is a 0-based byte offset into the
/// source, `expected` names the token class the parser wanted there.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t position, std::string expected)
        : std::runtime_error("syntax error at position " + std::to_string(position) +
                             ": expected " + expected),
          position(position),
          expected(std::move(expected)) {}

    std::size_t position;
    std::string expected;
};

/// An identifier outside the variable/function vocabulary.
class UnknownIdentifier : public std::runtime_error {
public:
    UnknownIdentifier(std::size_t position, std::string name)
        : std::runtime_error("unknown identifier '" + name + "' at position " +
                             std::to_string(position)),
          position(position),
          name(std::move(name)) {}

    std::size_t position;
    std::string name;
};

/// Evaluation left the function's domain (divide-by-zero, log of a
/// non-positive value, 0 raised to a negative power, ...). Never a silent NaN.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error("domain error: " + what) {}
};

/// The hyperbolicity discriminant C^2 - 4BD + 4A dropped to or below the
/// configured floor at some evaluated jet point.
class HyperbolicityError : public std::runtime_error {
public:
    HyperbolicityError(double discriminant_sq, double floor)
        : std::runtime_error("hyperbolicity lost: C^2-4BD+4A = " +
                             std::to_string(discriminant_sq) + " <= floor " +
                             std::to_string(floor)),
          discriminant_sq(discriminant_sq),
          floor(floor) {}

    double discriminant_sq;
    double floor;
};

/// The invariants r and s came closer than the configured separation floor.
class SeparationError : public std::runtime_error {
public:
    SeparationError(double gap, double floor)
        : std::runtime_error("separation lost: |r - s| = " + std::to_string(gap) +
                             " < floor " + std::to_string(floor)),
          gap(gap),
          floor(floor) {}

    double gap;
    double floor;
};

/// The free-axis denominator z0'' + B vanished at an axis sample.
class FreeAxisError : public std::runtime_error {
public:
    FreeAxisError(double y, double denominator)
        : std::runtime_error("axis not free at y = " + std::to_string(y) +
                             ": z0'' + B = " + std::to_string(denominator)),
          y(y),
          denominator(denominator) {}

    double y;
    double denominator;
};

/// Query outside the grid's x-extent.
class OutOfDomain : public std::runtime_error {
public:
    OutOfDomain(double x, double x_max)
        : std::runtime_error("x = " + std::to_string(x) + " outside [0, " +
                             std::to_string(x_max) + "]"),
          x(x),
          x_max(x_max) {}

    double x;
    double x_max;
};

/// The transformed surface does not project onto a 2-dimensional base region.
class NonGraphicalImage : public std::runtime_error {
public:
    NonGraphicalImage(double u, double v, int rank)
        : std::runtime_error("image surface has projection rank " + std::to_string(rank) +
                             " at (u,v) = (" + std::to_string(u) + ", " + std::to_string(v) + ")"),
          u(u),
          v(v),
          rank(rank) {}

    double u;
    double v;
    int rank;
};

/// A grid node aborted the sweep; carries the failing location.
class NodeFailure : public std::runtime_error {
public:
    NodeFailure(double x, double y, const std::string& cause)
        : std::runtime_error("node (" + std::to_string(x) + ", " + std::to_string(y) +
                             ") failed: " + cause),
          x(x),
          y(y),
          cause(cause) {}

    double x;
    double y;
    std::string cause;
};

/// Bad run configuration (schema violation, unparseable expression, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error("config error: " + what) {}
};

}  // namespace mahyp

#endif
