#ifndef MAHYP_EXPR_HPP
#define MAHYP_EXPR_HPP

#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "mahyp/errors.hpp"
#include "mahyp/jet.hpp"

namespace mahyp {

enum class UnaryOp : int { Neg, Sin, Cos, Exp, Ln, Sqrt, Abs, Tanh };
enum class BinaryOp : int { Add, Sub, Mul, Div, Pow };

namespace detail {
struct ExprNode;
struct ExprAccess;
}

/// Immutable symbolic expression over the jet variables x, y, z, p, q.
///
/// Value-semantic handle to a shared tree. Construction runs constant
/// folding and trivial-term elimination (0*e, e+0, e^1, ...), so derivative
/// trees stay small. eval and derivative are pure; instances can be shared
/// and evaluated from any number of threads.
class Expr {
public:
    Expr();  // the constant 0

    static Expr constant(double value);
    static Expr variable(Var v);
    static Expr unary(UnaryOp op, Expr operand);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

    /// Value at a jet point, IEEE double. Throws DomainError instead of
    /// producing NaN or Inf.
    double eval(const JetPoint& pt) const;

    /// Exact symbolic partial derivative with respect to v, constant-folded.
    Expr derivative(Var v) const;

    /// Replace each listed variable by an expression (simultaneous).
    Expr substitute(std::span<const std::pair<Var, Expr>> bindings) const;
    Expr substitute(std::initializer_list<std::pair<Var, Expr>> bindings) const;

    /// Printed form uses the same grammar parse_expr accepts.
    std::string str() const;

    bool same_structure(const Expr& other) const;

    bool depends_on(Var v) const;
    /// True when no variable occurs, i.e. eval is jet-independent.
    bool is_constant() const;

    friend Expr operator+(const Expr& a, const Expr& b) { return binary(BinaryOp::Add, a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return binary(BinaryOp::Sub, a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return binary(BinaryOp::Mul, a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return binary(BinaryOp::Div, a, b); }
    friend Expr operator-(const Expr& a) { return unary(UnaryOp::Neg, a); }

private:
    explicit Expr(std::shared_ptr<const detail::ExprNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const detail::ExprNode> node_;
    friend struct detail::ExprAccess;
};

/// Maps a source name to a jet-variable slot; used to parse expressions
/// written in a different letter set (surface parameters u,v, axis data in
/// y, envelopes in x).
struct VarBinding {
    std::string_view name;
    Var slot;
};

/// Parse an infix expression over {x,y,z,p,q}, reals, sin/cos/exp/ln/sqrt/
/// abs/tanh and parentheses. Precedence: pow > unary minus > mul/div >
/// add/sub; pow is right-associative, the rest left-associative.
/// Throws SyntaxError / UnknownIdentifier.
Expr parse_expr(std::string_view source);

/// Same grammar, but the variable vocabulary is exactly `vars` (each name
/// mapped onto a jet slot). Names outside it are UnknownIdentifier.
Expr parse_expr(std::string_view source, std::span<const VarBinding> vars);

}  // namespace mahyp

#endif
