#include "mahyp/init_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mahyp/errors.hpp"

namespace mahyp {

namespace {

JetPoint axis_jet(double y, double z, double p, double q) { return JetPoint{0.0, y, z, p, q}; }

/// Coefficient expression composed with the axis jet (0, y, z0(y), p0(y), q0(y)).
Expr on_axis(const Expr& coeff, const Expr& z0, const Expr& p0, const Expr& q0) {
    return coeff.substitute({{Var::x, Expr::constant(0.0)},
                             {Var::z, z0},
                             {Var::p, p0},
                             {Var::q, q0}});
}

}  // namespace

InitialData InitialData::from_zp(const CoefficientSet& cs, const Expr& z0, const Expr& p0,
                                 const YGrid& grid, double separation_floor) {
    InitialData init;
    init.grid_ = grid;
    init.provenance_ = InitProvenance::from_zp;

    const Expr q0 = z0.derivative(Var::y);
    const Expr z0yy = q0.derivative(Var::y);
    const Expr p0y = p0.derivative(Var::y);

    // Axis restrictions of the coefficients and of Delta = sqrt(C^2-4BD+4A).
    const Expr B_ax = on_axis(cs.B(), z0, p0, q0);
    const Expr C_ax = on_axis(cs.C(), z0, p0, q0);
    const Expr disc_ax = on_axis(cs.C() * cs.C() - Expr::constant(4.0) * cs.B() * cs.D() +
                                     Expr::constant(4.0) * cs.A(),
                                 z0, p0, q0);
    const Expr delta_ax = Expr::unary(UnaryOp::Sqrt, disc_ax);

    const Expr den = Expr::constant(2.0) * (z0yy + B_ax);
    const Expr two_p0y = Expr::constant(2.0) * p0y;
    const Expr r0 = (C_ax + delta_ax - two_p0y) / den;
    const Expr s0 = (C_ax - delta_ax - two_p0y) / den;

    for (auto& f : init.fields_) f.resize(grid.n);
    init.p0_y_.resize(grid.n);
    init.z0_yy_.resize(grid.n);

    for (int j = 0; j < grid.n; ++j) {
        const double y = grid.y(j);
        const JetPoint ypt{0.0, y, 0.0, 0.0, 0.0};
        const double zv = z0.eval(ypt);
        const double pv = p0.eval(ypt);
        const double qv = q0.eval(ypt);
        const JetPoint jet = axis_jet(y, zv, pv, qv);

        cs.delta(jet);  // axis hyperbolicity (throws)

        const double dv = z0yy.eval(ypt) + cs.B().eval(jet);
        if (std::fabs(dv) < separation_floor) throw FreeAxisError(y, dv);

        init.fields_[static_cast<int>(FieldId::r)][j] = r0.eval(ypt);
        init.fields_[static_cast<int>(FieldId::s)][j] = s0.eval(ypt);
        init.fields_[static_cast<int>(FieldId::p)][j] = pv;
        init.fields_[static_cast<int>(FieldId::q)][j] = qv;
        init.fields_[static_cast<int>(FieldId::z)][j] = zv;
        init.p0_y_[j] = p0y.eval(ypt);
        init.z0_yy_[j] = z0yy.eval(ypt);
    }

    init.sym_[static_cast<int>(FieldId::r)] = r0;
    init.sym_[static_cast<int>(FieldId::s)] = s0;
    init.sym_[static_cast<int>(FieldId::p)] = p0;
    init.sym_[static_cast<int>(FieldId::q)] = q0;
    init.sym_[static_cast<int>(FieldId::z)] = z0;
    return init;
}

namespace {

struct AxisOdeRhs {
    const CoefficientSet& cs;
    const Expr& r0;
    const Expr& s0;
    double separation_floor;

    // State (z, p, q) at ordinate y; returns (z', p', q').
    void operator()(double y, const double state[3], double out[3]) const {
        const JetPoint ypt{0.0, y, 0.0, 0.0, 0.0};
        const double r = r0.eval(ypt);
        const double s = s0.eval(ypt);
        const double gap = r - s;
        if (std::fabs(gap) < separation_floor)
            throw SeparationError(std::fabs(gap), separation_floor);
        const JetPoint jet{0.0, y, state[0], state[1], state[2]};
        const double delta = cs.delta(jet);
        const double B = cs.B().eval(jet);
        const double C = cs.C().eval(jet);
        out[0] = state[2];                                      // z' = q
        out[1] = -0.5 * delta * (r + s) / gap + 0.5 * C;        // p'
        out[2] = delta / gap - B;                               // q'
    }
};

void rk4_step(const AxisOdeRhs& f, double y, double h, double state[3]) {
    double k1[3], k2[3], k3[3], k4[3], tmp[3];
    f(y, state, k1);
    for (int i = 0; i < 3; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
    f(y + 0.5 * h, tmp, k2);
    for (int i = 0; i < 3; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
    f(y + 0.5 * h, tmp, k3);
    for (int i = 0; i < 3; ++i) tmp[i] = state[i] + h * k3[i];
    f(y + h, tmp, k4);
    for (int i = 0; i < 3; ++i) state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

InitialData InitialData::from_rs(const CoefficientSet& cs, const Expr& r0, const Expr& s0,
                                 const InitAnchor& anchor, const YGrid& grid,
                                 double separation_floor, AnchorAt anchor_at) {
    InitialData init;
    init.grid_ = grid;
    init.provenance_ = InitProvenance::from_rs;
    for (auto& f : init.fields_) f.resize(grid.n);
    init.p0_y_.resize(grid.n);
    init.z0_yy_.resize(grid.n);

    const AxisOdeRhs f{cs, r0, s0, separation_floor};

    int j0 = 0;
    if (anchor_at == AnchorAt::zero) {
        j0 = static_cast<int>(std::lround(-grid.y_min / grid.h));
        if (j0 < 0 || j0 >= grid.n || std::fabs(grid.y(j0)) > 1e-12 * std::max(1.0, grid.h))
            throw ConfigError("anchor_at=zero requires y=0 on the grid");
    }

    auto store = [&](int j, const double state[3]) {
        const double y = grid.y(j);
        const JetPoint ypt{0.0, y, 0.0, 0.0, 0.0};
        init.fields_[static_cast<int>(FieldId::r)][j] = r0.eval(ypt);
        init.fields_[static_cast<int>(FieldId::s)][j] = s0.eval(ypt);
        init.fields_[static_cast<int>(FieldId::z)][j] = state[0];
        init.fields_[static_cast<int>(FieldId::p)][j] = state[1];
        init.fields_[static_cast<int>(FieldId::q)][j] = state[2];
        double deriv[3];
        f(y, state, deriv);
        init.p0_y_[j] = deriv[1];
        init.z0_yy_[j] = deriv[2];  // z0_yy = q0_y
    };

    double state[3] = {anchor.z, anchor.p, anchor.q};
    store(j0, state);
    for (int j = j0; j + 1 < grid.n; ++j) {  // upward sweep
        rk4_step(f, grid.y(j), grid.h, state);
        store(j + 1, state);
    }
    if (j0 > 0) {
        state[0] = anchor.z;
        state[1] = anchor.p;
        state[2] = anchor.q;
        for (int j = j0; j > 0; --j) {  // downward sweep
            rk4_step(f, grid.y(j), -grid.h, state);
            store(j - 1, state);
        }
    }

    init.sym_[static_cast<int>(FieldId::r)] = r0;
    init.sym_[static_cast<int>(FieldId::s)] = s0;
    return init;
}

double InitialData::eval(FieldId f, double y) const {
    const int fi = static_cast<int>(f);
    if (sym_[fi]) {
        return sym_[fi]->eval(JetPoint{0.0, y, 0.0, 0.0, 0.0});
    }
    // Piecewise linear on the samples, clamped beyond the ends.
    const auto& v = fields_[fi];
    const double t = (y - grid_.y_min) / grid_.h;
    if (t <= 0.0) return v.front();
    if (t >= grid_.n - 1) return v.back();
    const int j = static_cast<int>(t);
    const double w = t - j;
    return v[j] * (1.0 - w) + v[j + 1] * w;
}

std::vector<double> InitialData::dy_samples(FieldId f) const {
    const int fi = static_cast<int>(f);
    std::vector<double> out(grid_.n);
    if (sym_[fi]) {
        const Expr d = sym_[fi]->derivative(Var::y);
        for (int j = 0; j < grid_.n; ++j) out[j] = d.eval(JetPoint{0.0, grid_.y(j), 0, 0, 0});
        return out;
    }
    if (f == FieldId::p) return {p0_y_.begin(), p0_y_.end()};
    if (f == FieldId::q) return {z0_yy_.begin(), z0_yy_.end()};
    if (f == FieldId::z) {
        return {fields_[static_cast<int>(FieldId::q)].begin(),
                fields_[static_cast<int>(FieldId::q)].end()};  // z0_y = q0
    }
    // Fallback: centered differences.
    const auto& v = fields_[fi];
    for (int j = 0; j < grid_.n; ++j) {
        const int lo = std::max(0, j - 1), hi = std::min(grid_.n - 1, j + 1);
        out[j] = (v[hi] - v[lo]) / ((hi - lo) * grid_.h);
    }
    return out;
}

double InitialData::v0() const {
    double m = 0.0;
    for (int fi = 0; fi < kNumFields; ++fi) {
        for (double d : dy_samples(static_cast<FieldId>(fi))) m = std::max(m, std::fabs(d));
    }
    return m;
}

InitialData::AxisCheck InitialData::check_axis(std::optional<double> delta,
                                               std::optional<double> eps) const {
    AxisCheck c{};
    c.samples = grid_.n;
    double inf_r = std::numeric_limits<double>::infinity();
    double sup_s = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid_.n; ++j) {
        const double r = fields_[static_cast<int>(FieldId::r)][j];
        const double s = fields_[static_cast<int>(FieldId::s)][j];
        inf_r = std::min(inf_r, r);
        sup_s = std::max(sup_s, s);
        c.sup_abs_r0 = std::max(c.sup_abs_r0, std::fabs(r));
        c.sup_abs_s0 = std::max(c.sup_abs_s0, std::fabs(s));
        c.sup_abs_p0 =
            std::max(c.sup_abs_p0, std::fabs(fields_[static_cast<int>(FieldId::p)][j]));
        c.sup_abs_q0 =
            std::max(c.sup_abs_q0, std::fabs(fields_[static_cast<int>(FieldId::q)][j]));
    }
    c.delta_candidate = inf_r - sup_s;
    c.delta_used = delta.value_or(c.delta_candidate);
    c.eps_used = eps.value_or(c.delta_used);
    c.unit_bounds = c.sup_abs_p0 <= 1.0 && c.sup_abs_q0 <= 1.0;
    c.separation = c.delta_candidate >= c.delta_used && c.delta_used > 0.0;
    const double cap = 1.0 - 0.5 * (c.delta_used - c.eps_used);
    c.amplitude_caps = c.sup_abs_r0 <= cap && c.sup_abs_s0 <= cap && c.unit_bounds;
    c.separation_at_delta = c.separation;
    return c;
}

}  // namespace mahyp
