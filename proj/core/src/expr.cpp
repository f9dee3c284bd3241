#include "mahyp/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <variant>
#include <vector>

namespace mahyp {
namespace detail {

struct UnaryNode {
    UnaryOp op;
    std::shared_ptr<const ExprNode> a;
};

struct BinaryNode {
    BinaryOp op;
    std::shared_ptr<const ExprNode> a;
    std::shared_ptr<const ExprNode> b;
};

struct ExprNode {
    std::variant<double, Var, UnaryNode, BinaryNode> v;
};

struct ExprAccess {
    static const ExprNode& node(const Expr& e) { return *e.node_; }
    static std::shared_ptr<const ExprNode> ptr(const Expr& e) { return e.node_; }
    static Expr wrap(std::shared_ptr<const ExprNode> n) { return Expr(std::move(n)); }
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(std::variant<double, Var, UnaryNode, BinaryNode> v) {
    auto n = std::make_shared<ExprNode>();
    n->v = std::move(v);
    return n;
}

const double* as_number(const NodePtr& n) { return std::get_if<double>(&n->v); }

double eval_node(const ExprNode& n, const JetPoint& pt);

double apply_unary(UnaryOp op, double a) {
    switch (op) {
        case UnaryOp::Neg: return -a;
        case UnaryOp::Sin: return std::sin(a);
        case UnaryOp::Cos: return std::cos(a);
        case UnaryOp::Exp: return std::exp(a);
        case UnaryOp::Ln:
            if (a <= 0.0) throw DomainError("ln of non-positive value");
            return std::log(a);
        case UnaryOp::Sqrt:
            if (a < 0.0) throw DomainError("sqrt of negative value");
            return std::sqrt(a);
        case UnaryOp::Abs: return std::fabs(a);
        case UnaryOp::Tanh: return std::tanh(a);
    }
    throw DomainError("bad unary op");
}

double apply_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
            if (b == 0.0) throw DomainError("divide by zero");
            return a / b;
        case BinaryOp::Pow: {
            if (a == 0.0 && b < 0.0) throw DomainError("0 raised to a negative power");
            if (a < 0.0 && b != std::floor(b)) throw DomainError("negative base, non-integer exponent");
            return std::pow(a, b);
        }
    }
    throw DomainError("bad binary op");
}

double eval_node(const ExprNode& n, const JetPoint& pt) {
    if (const double* c = std::get_if<double>(&n.v)) return *c;
    if (const Var* v = std::get_if<Var>(&n.v)) return pt[*v];
    if (const UnaryNode* u = std::get_if<UnaryNode>(&n.v)) {
        return apply_unary(u->op, eval_node(*u->a, pt));
    }
    const BinaryNode& b = std::get<BinaryNode>(n.v);
    return apply_binary(b.op, eval_node(*b.a, pt), eval_node(*b.b, pt));
}

}  // namespace
}  // namespace detail

using detail::BinaryNode;
using detail::ExprAccess;
using detail::ExprNode;
using detail::NodePtr;
using detail::UnaryNode;
using detail::as_number;
using detail::make_node;

Expr::Expr() : node_(make_node(0.0)) {}

Expr Expr::constant(double value) { return ExprAccess::wrap(make_node(value)); }

Expr Expr::variable(Var v) { return ExprAccess::wrap(make_node(v)); }

Expr Expr::unary(UnaryOp op, Expr operand) {
    NodePtr a = ExprAccess::ptr(operand);
    if (const double* c = as_number(a)) {
        // Fold only when the value is defined; otherwise keep the node so the
        // domain error surfaces at eval time.
        try {
            double v = detail::apply_unary(op, *c);
            if (std::isfinite(v)) return constant(v);
        } catch (const DomainError&) {
        }
    }
    if (op == UnaryOp::Neg) {
        if (const UnaryNode* u = std::get_if<UnaryNode>(&a->v); u && u->op == UnaryOp::Neg) {
            return ExprAccess::wrap(u->a);
        }
    }
    return ExprAccess::wrap(make_node(UnaryNode{op, std::move(a)}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    NodePtr a = ExprAccess::ptr(lhs);
    NodePtr b = ExprAccess::ptr(rhs);
    const double* ca = as_number(a);
    const double* cb = as_number(b);
    if (ca && cb) {
        try {
            double v = detail::apply_binary(op, *ca, *cb);
            if (std::isfinite(v)) return constant(v);
        } catch (const DomainError&) {
        }
    }
    switch (op) {
        case BinaryOp::Add:
            if (ca && *ca == 0.0) return ExprAccess::wrap(b);
            if (cb && *cb == 0.0) return ExprAccess::wrap(a);
            break;
        case BinaryOp::Sub:
            if (cb && *cb == 0.0) return ExprAccess::wrap(a);
            if (ca && *ca == 0.0) return unary(UnaryOp::Neg, ExprAccess::wrap(b));
            break;
        case BinaryOp::Mul:
            if ((ca && *ca == 0.0) || (cb && *cb == 0.0)) return constant(0.0);
            if (ca && *ca == 1.0) return ExprAccess::wrap(b);
            if (cb && *cb == 1.0) return ExprAccess::wrap(a);
            break;
        case BinaryOp::Div:
            if (cb && *cb == 1.0) return ExprAccess::wrap(a);
            break;
        case BinaryOp::Pow:
            if (cb && *cb == 1.0) return ExprAccess::wrap(a);
            if (cb && *cb == 0.0) return constant(1.0);
            break;
    }
    return ExprAccess::wrap(make_node(BinaryNode{op, std::move(a), std::move(b)}));
}

double Expr::eval(const JetPoint& pt) const {
    double v = detail::eval_node(*node_, pt);
    if (!std::isfinite(v)) throw DomainError("non-finite result");
    return v;
}

namespace {

Expr wrap(NodePtr n) { return ExprAccess::wrap(std::move(n)); }

Expr derivative_node(const NodePtr& n, Var v) {
    if (as_number(n)) return Expr::constant(0.0);
    if (const Var* var = std::get_if<Var>(&n->v)) {
        return Expr::constant(*var == v ? 1.0 : 0.0);
    }
    if (const UnaryNode* u = std::get_if<UnaryNode>(&n->v)) {
        Expr a = wrap(u->a);
        Expr da = derivative_node(u->a, v);
        switch (u->op) {
            case UnaryOp::Neg: return -da;
            case UnaryOp::Sin: return Expr::unary(UnaryOp::Cos, a) * da;
            case UnaryOp::Cos: return -(Expr::unary(UnaryOp::Sin, a) * da);
            case UnaryOp::Exp: return Expr::unary(UnaryOp::Exp, a) * da;
            case UnaryOp::Ln: return da / a;
            case UnaryOp::Sqrt:
                return da / (Expr::constant(2.0) * Expr::unary(UnaryOp::Sqrt, a));
            case UnaryOp::Abs:
                // d|a| = a/|a| * da; undefined at a = 0, which eval reports.
                return (a / Expr::unary(UnaryOp::Abs, a)) * da;
            case UnaryOp::Tanh: {
                Expr t = Expr::unary(UnaryOp::Tanh, a);
                return (Expr::constant(1.0) - t * t) * da;
            }
        }
    }
    const BinaryNode& b = std::get<BinaryNode>(n->v);
    Expr ea = wrap(b.a);
    Expr eb = wrap(b.b);
    Expr da = derivative_node(b.a, v);
    Expr db = derivative_node(b.b, v);
    switch (b.op) {
        case BinaryOp::Add: return da + db;
        case BinaryOp::Sub: return da - db;
        case BinaryOp::Mul: return da * eb + ea * db;
        case BinaryOp::Div: return (da * eb - ea * db) / (eb * eb);
        case BinaryOp::Pow: {
            if (const double* c = as_number(b.b)) {
                // d(a^c) = c * a^(c-1) * da
                return Expr::constant(*c) *
                       Expr::binary(BinaryOp::Pow, ea, Expr::constant(*c - 1.0)) * da;
            }
            // General a^b = exp(b ln a).
            Expr self = Expr::binary(BinaryOp::Pow, ea, eb);
            return self * (db * Expr::unary(UnaryOp::Ln, ea) + eb * da / ea);
        }
    }
    return Expr::constant(0.0);
}

}  // namespace

Expr Expr::derivative(Var v) const { return derivative_node(node_, v); }

namespace {

Expr substitute_node(const NodePtr& n, std::span<const std::pair<Var, Expr>> bindings) {
    if (const double* c = as_number(n)) return Expr::constant(*c);
    if (const Var* var = std::get_if<Var>(&n->v)) {
        for (const auto& [from, to] : bindings) {
            if (from == *var) return to;
        }
        return Expr::variable(*var);
    }
    if (const UnaryNode* u = std::get_if<UnaryNode>(&n->v)) {
        return Expr::unary(u->op, substitute_node(u->a, bindings));
    }
    const BinaryNode& b = std::get<BinaryNode>(n->v);
    return Expr::binary(b.op, substitute_node(b.a, bindings), substitute_node(b.b, bindings));
}

}  // namespace

Expr Expr::substitute(std::span<const std::pair<Var, Expr>> bindings) const {
    return substitute_node(node_, bindings);
}

Expr Expr::substitute(std::initializer_list<std::pair<Var, Expr>> bindings) const {
    std::vector<std::pair<Var, Expr>> v(bindings.begin(), bindings.end());
    return substitute(std::span<const std::pair<Var, Expr>>(v));
}

namespace {

bool same_node(const ExprNode& a, const ExprNode& b) {
    if (a.v.index() != b.v.index()) return false;
    if (const double* ca = std::get_if<double>(&a.v)) {
        return *ca == *std::get_if<double>(&b.v);
    }
    if (const Var* va = std::get_if<Var>(&a.v)) {
        return *va == *std::get_if<Var>(&b.v);
    }
    if (const UnaryNode* ua = std::get_if<UnaryNode>(&a.v)) {
        const UnaryNode& ub = std::get<UnaryNode>(b.v);
        return ua->op == ub.op && same_node(*ua->a, *ub.a);
    }
    const BinaryNode& ba = std::get<BinaryNode>(a.v);
    const BinaryNode& bb = std::get<BinaryNode>(b.v);
    return ba.op == bb.op && same_node(*ba.a, *bb.a) && same_node(*ba.b, *bb.b);
}

bool depends_node(const ExprNode& n, Var v) {
    if (std::get_if<double>(&n.v)) return false;
    if (const Var* var = std::get_if<Var>(&n.v)) return *var == v;
    if (const UnaryNode* u = std::get_if<UnaryNode>(&n.v)) return depends_node(*u->a, v);
    const BinaryNode& b = std::get<BinaryNode>(n.v);
    return depends_node(*b.a, v) || depends_node(*b.b, v);
}

}  // namespace

bool Expr::same_structure(const Expr& other) const { return same_node(*node_, *other.node_); }

bool Expr::depends_on(Var v) const { return depends_node(*node_, v); }

bool Expr::is_constant() const {
    for (int i = 0; i < kNumVars; ++i) {
        if (depends_on(static_cast<Var>(i))) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Printing. Minimal parentheses under the parse grammar:
//   add/sub < mul/div < unary minus < pow < atom.
// ---------------------------------------------------------------------------

namespace {

int node_prec(const ExprNode& n) {
    if (const double* c = std::get_if<double>(&n.v)) return *c < 0.0 ? 3 : 5;
    if (std::get_if<Var>(&n.v)) return 5;
    if (const UnaryNode* u = std::get_if<UnaryNode>(&n.v)) {
        return u->op == UnaryOp::Neg ? 3 : 5;  // named functions print as atoms
    }
    switch (std::get<BinaryNode>(n.v).op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
    }
    return 5;
}

const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Neg: return "-";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Ln: return "ln";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Abs: return "abs";
        case UnaryOp::Tanh: return "tanh";
    }
    return "?";
}

void print_node(const ExprNode& n, std::string& out, int min_prec) {
    int prec = node_prec(n);
    bool parens = prec < min_prec;
    if (parens) out += '(';
    if (const double* c = std::get_if<double>(&n.v)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *c);
        out += buf;
    } else if (const Var* v = std::get_if<Var>(&n.v)) {
        out += var_name(*v);
    } else if (const UnaryNode* u = std::get_if<UnaryNode>(&n.v)) {
        if (u->op == UnaryOp::Neg) {
            out += '-';
            print_node(*u->a, out, 3);
        } else {
            out += unary_name(u->op);
            out += '(';
            print_node(*u->a, out, 0);
            out += ')';
        }
    } else {
        const BinaryNode& b = std::get<BinaryNode>(n.v);
        switch (b.op) {
            case BinaryOp::Add:
                print_node(*b.a, out, 1);
                out += " + ";
                print_node(*b.b, out, 2);
                break;
            case BinaryOp::Sub:
                print_node(*b.a, out, 1);
                out += " - ";
                print_node(*b.b, out, 2);
                break;
            case BinaryOp::Mul:
                print_node(*b.a, out, 2);
                out += '*';
                print_node(*b.b, out, 3);
                break;
            case BinaryOp::Div:
                print_node(*b.a, out, 2);
                out += '/';
                print_node(*b.b, out, 3);
                break;
            case BinaryOp::Pow:
                print_node(*b.a, out, 5);
                out += '^';
                print_node(*b.b, out, 4);  // right-associative
                break;
        }
    }
    if (parens) out += ')';
}

}  // namespace

std::string Expr::str() const {
    std::string out;
    print_node(*node_, out, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    std::string_view src;
    std::size_t pos = 0;
    std::span<const VarBinding> vars;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const char* expected) { throw SyntaxError(pos, expected); }

    Expr parse_sum() {
        Expr acc = parse_term();
        for (;;) {
            skip_ws();
            if (eat('+')) {
                acc = Expr::binary(BinaryOp::Add, acc, parse_term());
            } else if (eat('-')) {
                acc = Expr::binary(BinaryOp::Sub, acc, parse_term());
            } else {
                return acc;
            }
        }
    }

    Expr parse_term() {
        Expr acc = parse_unary();
        for (;;) {
            skip_ws();
            if (eat('*')) {
                acc = Expr::binary(BinaryOp::Mul, acc, parse_unary());
            } else if (eat('/')) {
                acc = Expr::binary(BinaryOp::Div, acc, parse_unary());
            } else {
                return acc;
            }
        }
    }

    Expr parse_unary() {
        skip_ws();
        if (eat('-')) return Expr::unary(UnaryOp::Neg, parse_unary());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        skip_ws();
        if (eat('^')) {
            // Right-associative; exponent may carry a sign.
            return Expr::binary(BinaryOp::Pow, base, parse_unary());
        }
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos >= src.size()) fail("a number, variable, function or '('");
        char c = src[pos];
        if (c == '(') {
            ++pos;
            Expr inner = parse_sum();
            if (!eat(')')) fail("')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        fail("a number, variable, function or '('");
    }

    Expr parse_number() {
        const char* begin = src.data() + pos;
        const char* end = src.data() + src.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc()) fail("a numeric literal");
        pos = static_cast<std::size_t>(ptr - src.data());
        return Expr::constant(value);
    }

    Expr parse_identifier() {
        std::size_t start = pos;
        while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                    src[pos] == '_')) {
            ++pos;
        }
        std::string_view name = src.substr(start, pos - start);

        static constexpr std::pair<std::string_view, UnaryOp> functions[] = {
            {"sin", UnaryOp::Sin}, {"cos", UnaryOp::Cos},   {"exp", UnaryOp::Exp},
            {"ln", UnaryOp::Ln},   {"sqrt", UnaryOp::Sqrt}, {"abs", UnaryOp::Abs},
            {"tanh", UnaryOp::Tanh},
        };
        for (const auto& [fname, op] : functions) {
            if (name == fname) {
                skip_ws();
                if (!eat('(')) fail("'(' after function name");
                Expr arg = parse_sum();
                if (!eat(')')) fail("')'");
                return Expr::unary(op, arg);
            }
        }
        for (const VarBinding& vb : vars) {
            if (name == vb.name) return Expr::variable(vb.slot);
        }
        throw UnknownIdentifier(start, std::string(name));
    }

    Expr run() {
        Expr e = parse_sum();
        skip_ws();
        if (pos != src.size()) fail("end of input");
        return e;
    }
};

constexpr VarBinding kJetVars[] = {
    {"x", Var::x}, {"y", Var::y}, {"z", Var::z}, {"p", Var::p}, {"q", Var::q},
};

}  // namespace

Expr parse_expr(std::string_view source) { return parse_expr(source, kJetVars); }

Expr parse_expr(std::string_view source, std::span<const VarBinding> vars) {
    Parser parser{source, 0, vars};
    return parser.run();
}

}  // namespace mahyp
