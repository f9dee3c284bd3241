#include <doctest.h>

#include <cmath>

#include "mahyp/init_data.hpp"

using namespace mahyp;

namespace {

CoefficientSet example71() {
    return CoefficientSet(parse_expr("1/16"), parse_expr("1/2"), parse_expr("0"), parse_expr("0"));
}

CoefficientSet hess_minus_one() {
    return CoefficientSet(parse_expr("1"), parse_expr("0"), parse_expr("0"), parse_expr("0"));
}

constexpr VarBinding kYOnly[] = {{"y", Var::y}};

Expr in_y(const char* src) { return parse_expr(src, kYOnly); }

YGrid grid257() { return YGrid{-1.0, 1.0 / 128.0, 257}; }

}  // namespace

TEST_CASE("from_zp on the constant example7_1 axis data") {
    // z0 = 1, p0 = 1 gives r0, s0 = (C +- Delta)/(2B) = +-1/2; the identity
    // r0 - s0 = Delta/(z0'' + B) = 1 pins the gap.
    const CoefficientSet cs = example71();
    const InitialData init = InitialData::from_zp(cs, in_y("1"), in_y("1"), grid257());
    for (int j = 0; j < init.grid().n; j += 16) {
        CHECK(init.samples(FieldId::r)[j] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(init.samples(FieldId::s)[j] == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK(init.samples(FieldId::p)[j] == 1.0);
        CHECK(init.samples(FieldId::q)[j] == 0.0);
        CHECK(init.samples(FieldId::z)[j] == 1.0);
    }
}

TEST_CASE("from_zp on the manufactured solution") {
    const CoefficientSet cs = hess_minus_one();
    const InitialData init = InitialData::from_zp(cs, in_y("y^2/2"), in_y("y"), grid257());
    for (int j = 0; j < init.grid().n; j += 16) {
        const double y = init.grid().y(j);
        CHECK(init.samples(FieldId::r)[j] == doctest::Approx(0.0));
        CHECK(init.samples(FieldId::s)[j] == doctest::Approx(-2.0).epsilon(1e-15));
        CHECK(init.samples(FieldId::q)[j] == doctest::Approx(y).epsilon(1e-15));
    }
    // symbolic evaluation extends beyond the sampled segment
    CHECK(init.eval(FieldId::p, 2.5) == doctest::Approx(2.5));
    CHECK(init.eval(FieldId::s, 7.0) == doctest::Approx(-2.0));
}

TEST_CASE("free-axis violation is caught") {
    // B = -1 and z0 = y^2/2 make z0'' + B = 0 everywhere. Keep Delta^2 > 0
    // via A: Delta^2 = 4A - 4BD = 4.
    const CoefficientSet cs(parse_expr("1"), parse_expr("-1"), parse_expr("0"), parse_expr("0"));
    CHECK_THROWS_AS(InitialData::from_zp(cs, in_y("y^2/2"), in_y("y"), grid257()), FreeAxisError);
}

TEST_CASE("axis hyperbolicity is checked") {
    // Delta^2 = 4A + 4q^2 with A = -z_y^2 collapses on the axis where q = y.
    const CoefficientSet cs(parse_expr("0-q^2"), parse_expr("0"), parse_expr("1"),
                            parse_expr("0"));
    CHECK_THROWS_AS(InitialData::from_zp(cs, in_y("y^2/2"), in_y("0"), grid257()),
                    HyperbolicityError);
}

TEST_CASE("identity r0 - s0 = Delta/(z0'' + B)") {
    // a genuinely variable case
    const CoefficientSet cs(parse_expr("1 + 0.1*sin(y)"), parse_expr("0.2 + 0.05*z"),
                            parse_expr("0.1*q"), parse_expr("0.05*p"));
    const InitialData init =
        InitialData::from_zp(cs, in_y("0.3*sin(y)"), in_y("0.2*cos(y)"), grid257());
    const auto r0 = init.samples(FieldId::r);
    const auto s0 = init.samples(FieldId::s);
    const auto zyy = init.z0_yy_samples();
    for (int j = 0; j < init.grid().n; ++j) {
        const double y = init.grid().y(j);
        const JetPoint jet{0.0, y, init.samples(FieldId::z)[j], init.samples(FieldId::p)[j],
                           init.samples(FieldId::q)[j]};
        const double delta = cs.delta(jet);
        const double B = cs.B().eval(jet);
        CHECK(std::fabs(r0[j] - s0[j] - delta / (zyy[j] + B)) <= 1e-9);
    }
}

TEST_CASE("from_rs with constant invariants reproduces the closed form") {
    // Constant coefficients and constant (r0, s0): the axis system is linear,
    // p0 and q0 are affine in y, z0 quadratic.
    const CoefficientSet cs = example71();
    const InitialData init = InitialData::from_rs(cs, in_y("0.5"), in_y("-0.5"),
                                                  InitAnchor{1.0, 1.0, 0.0}, grid257());
    // p' = -(Delta/2)(r+s)/(r-s) + C/2 = 0, q' = Delta/(r-s) - B = 0, z' = q
    for (int j = 0; j < init.grid().n; j += 16) {
        CHECK(init.samples(FieldId::p)[j] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(init.samples(FieldId::q)[j] == doctest::Approx(0.0));
        CHECK(init.samples(FieldId::z)[j] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("from_rs with nonzero slopes has the hand-integrated closed form") {
    // B = 1, C = 1/2, D = 0, A = 1 -> Delta = sqrt(1/4 + 4), constants.
    // r0 = 1, s0 = -1: p' = C/2 = 1/4, q' = Delta/2 - 1, z' = q.
    const CoefficientSet cs(parse_expr("1"), parse_expr("1"), parse_expr("1/2"), parse_expr("0"));
    const double delta = std::sqrt(0.25 + 4.0);
    const double c2 = delta / 2.0 - 1.0;
    const InitialData init = InitialData::from_rs(cs, in_y("1"), in_y("-1"),
                                                  InitAnchor{0.0, 0.0, 0.0}, grid257());
    for (int j = 0; j < init.grid().n; j += 32) {
        const double t = init.grid().y(j) + 1.0;  // distance from the anchor
        CHECK(init.samples(FieldId::p)[j] == doctest::Approx(0.25 * t).epsilon(1e-10));
        CHECK(init.samples(FieldId::q)[j] == doctest::Approx(c2 * t).epsilon(1e-10));
        CHECK(init.samples(FieldId::z)[j] == doctest::Approx(0.5 * c2 * t * t).epsilon(1e-8));
    }
}

TEST_CASE("from_rs round trips against from_zp") {
    const CoefficientSet cs = example71();
    const InitialData zp = InitialData::from_zp(cs, in_y("1"), in_y("1"), grid257());
    const InitialData rs = InitialData::from_rs(cs, in_y("0.5"), in_y("-0.5"),
                                                InitAnchor{1.0, 1.0, 0.0}, grid257());
    for (int j = 0; j < zp.grid().n; ++j) {
        CHECK(std::fabs(rs.samples(FieldId::z)[j] - zp.samples(FieldId::z)[j]) <= 1e-10);
        CHECK(std::fabs(rs.samples(FieldId::p)[j] - zp.samples(FieldId::p)[j]) <= 1e-10);
        CHECK(std::fabs(rs.samples(FieldId::q)[j] - zp.samples(FieldId::q)[j]) <= 1e-10);
    }
}

TEST_CASE("from_rs round trip on a nonlinear case converges at ODE order") {
    // Extract symbolic (r0, s0) from smooth non-polynomial (z0, p0) under
    // genuinely jet-dependent coefficients and integrate the axis system
    // back. The coupling makes the ODE error scale O(h^4).
    const CoefficientSet cs(parse_expr("1 + 0.1*cos(z)"), parse_expr("0.2 + 0.1*tanh(p)"),
                            parse_expr("0.1*sin(q)"), parse_expr("0.05*cos(y)"));
    const Expr z0 = in_y("1 + y^2/2 + sin(y)/10");
    const Expr p0 = in_y("cos(y)/3");
    double err_h = 0.0, err_h2 = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const int n = pass == 0 ? 33 : 65;
        const YGrid g{-1.0, 2.0 / (n - 1), n};
        const InitialData zp = InitialData::from_zp(cs, z0, p0, g);
        const InitialData rs =
            InitialData::from_rs(cs, *zp.symbolic(FieldId::r), *zp.symbolic(FieldId::s),
                                 InitAnchor{zp.samples(FieldId::z)[0], zp.samples(FieldId::p)[0],
                                            zp.samples(FieldId::q)[0]},
                                 g);
        double err = 0.0;
        for (int j = 0; j < n; ++j) {
            err = std::max(err, std::fabs(rs.samples(FieldId::z)[j] - zp.samples(FieldId::z)[j]));
            err = std::max(err, std::fabs(rs.samples(FieldId::p)[j] - zp.samples(FieldId::p)[j]));
            err = std::max(err, std::fabs(rs.samples(FieldId::q)[j] - zp.samples(FieldId::q)[j]));
        }
        (pass == 0 ? err_h : err_h2) = err;
    }
    CHECK(err_h2 <= err_h / 8.0);  // RK4: expect ~16x, insist on at least 8x
    CHECK(err_h <= 1e-6);
}

TEST_CASE("from_rs keeps q0 = dz0/dy to discretization accuracy") {
    const CoefficientSet cs(parse_expr("1 + 0.1*cos(z)"), parse_expr("0.2 + 0.1*tanh(p)"),
                            parse_expr("0.1*sin(q)"), parse_expr("0.05*cos(y)"));
    const YGrid g{-1.0, 2.0 / 128.0, 129};
    const InitialData init = InitialData::from_rs(cs, in_y("0.3 + 0.1*sin(y)"),
                                                  in_y("-0.5 - 0.1*cos(y)"),
                                                  InitAnchor{1.0, 0.5, 0.0}, g);
    CHECK(init.provenance() == InitProvenance::from_rs);
    const auto z0 = init.samples(FieldId::z);
    const auto q0 = init.samples(FieldId::q);
    double worst = 0.0;
    for (int j = 1; j + 1 < g.n; ++j) {
        const double zy = (z0[j + 1] - z0[j - 1]) / (2.0 * g.h);
        worst = std::max(worst, std::fabs(zy - q0[j]));
    }
    CHECK(worst <= g.h * g.h);  // order h^2
}

TEST_CASE("from_rs refuses coincident invariants") {
    const CoefficientSet cs = example71();
    CHECK_THROWS_AS(InitialData::from_rs(cs, in_y("0.1"), in_y("0.1"), InitAnchor{1.0, 1.0, 0.0},
                                         grid257()),
                    SeparationError);
}

TEST_CASE("anchor at zero integrates both directions") {
    const CoefficientSet cs(parse_expr("1"), parse_expr("1"), parse_expr("1/2"), parse_expr("0"));
    const InitialData init =
        InitialData::from_rs(cs, in_y("1"), in_y("-1"), InitAnchor{0.0, 0.0, 0.0}, grid257(),
                             1e-10, AnchorAt::zero);
    // p' = 1/4 anchored at y = 0: p(y) = y/4 on both sides
    for (int j = 0; j < init.grid().n; j += 32) {
        CHECK(init.samples(FieldId::p)[j] ==
              doctest::Approx(0.25 * init.grid().y(j)).epsilon(1e-10));
    }
}

TEST_CASE("check_axis on the example7_1 data") {
    const CoefficientSet cs = example71();
    const InitialData init = InitialData::from_zp(cs, in_y("1"), in_y("1"), grid257());
    const auto axis = init.check_axis(0.25, 0.25);
    CHECK(axis.delta_candidate == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(axis.unit_bounds);
    CHECK(axis.separation);
    CHECK(axis.amplitude_caps);
    CHECK(axis.separation_at_delta);
}

TEST_CASE("check_axis flags the manufactured data") {
    const CoefficientSet cs = hess_minus_one();
    const InitialData init = InitialData::from_zp(cs, in_y("y^2/2"), in_y("y"), grid257());
    const auto axis = init.check_axis();
    CHECK(axis.delta_candidate == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(axis.separation);                 // holds with the candidate delta = 2
    CHECK_FALSE(axis.amplitude_caps);    // sup |s0| = 2 > 1
    CHECK(axis.unit_bounds);      // |p0| and |q0| reach exactly 1
}

TEST_CASE("check_axis fails on overlapping invariant ranges") {
    const CoefficientSet cs = hess_minus_one();
    // pointwise separated by 0.5, but the ranges overlap across y
    const InitialData init = InitialData::from_rs(cs, in_y("sin(y)"), in_y("sin(y) - 0.5"),
                                                  InitAnchor{0.0, 0.0, 0.0}, grid257());
    const auto axis = init.check_axis();
    CHECK_FALSE(axis.separation);  // delta candidate <= 0
}

TEST_CASE("Theorem 7.2 sign structure") {
    // Separated-coefficient data with B > 0 force r0 > 0 and s0 < 0.
    const CoefficientSet cs(parse_expr("1/16 + 0.001*sin(y)"), parse_expr("1/2 + 0.01*cos(y)"),
                            parse_expr("0.01*sin(y)"), parse_expr("0"));
    const InitialData init =
        InitialData::from_zp(cs, in_y("1 + 0.001*sin(2*y)"), in_y("0.9"), grid257());
    for (int j = 0; j < init.grid().n; ++j) {
        CHECK(init.samples(FieldId::r)[j] > 0.0);
        CHECK(init.samples(FieldId::s)[j] < 0.0);
    }
}

TEST_CASE("v0 collects the largest initial y-derivative") {
    const CoefficientSet cs = hess_minus_one();
    const InitialData init = InitialData::from_zp(cs, in_y("y^2/2"), in_y("y"), grid257());
    // fields: r0 = 0, s0 = -2, p0 = y, q0 = y, z0 = y^2/2 -> sup |d/dy| = 1
    CHECK(init.v0() == doctest::Approx(1.0).epsilon(1e-12));
}
