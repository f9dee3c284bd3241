#include <doctest.h>

#include <cmath>

#include "mahyp/solver.hpp"

using namespace mahyp;

namespace {

constexpr VarBinding kYOnly[] = {{"y", Var::y}};
Expr in_y(const char* src) { return parse_expr(src, kYOnly); }

SolverConfig base_config(double h) {
    SolverConfig cfg;
    cfg.x_max = 1.0;
    cfg.y_min = -1.0;
    cfg.y_max = 1.0;
    cfg.hx = h;
    cfg.hy = h;
    cfg.max_iterations = 60;
    cfg.convergence_tol = 1e-10;
    cfg.threads = 2;
    return cfg;
}

struct Problem {
    CoefficientSet cs;
    InitialData init;
};

Problem example71(const SolverConfig& cfg) {
    CoefficientSet cs(parse_expr("1/16"), parse_expr("1/2"), parse_expr("0"), parse_expr("0"));
    InitialData init = InitialData::from_zp(cs, in_y("1"), in_y("1"), cfg.make_ygrid());
    return {std::move(cs), std::move(init)};
}

Problem manufactured(const SolverConfig& cfg) {
    CoefficientSet cs(parse_expr("1"), parse_expr("0"), parse_expr("0"), parse_expr("0"));
    InitialData init = InitialData::from_zp(cs, in_y("y^2/2"), in_y("y"), cfg.make_ygrid());
    return {std::move(cs), std::move(init)};
}

/// Same equation, curved characteristics: z = xy + y^2/2 + y^3/12 is exact.
Problem curved(const SolverConfig& cfg) {
    CoefficientSet cs(parse_expr("1"), parse_expr("0"), parse_expr("0"), parse_expr("0"));
    InitialData init =
        InitialData::from_zp(cs, in_y("y^2/2 + y^3/12"), in_y("y"), cfg.make_ygrid());
    return {std::move(cs), std::move(init)};
}

double grid_error(const FieldGrid& g, FieldId f, double (*exact)(double, double)) {
    double worst = 0.0;
    for (int k = 0; k < g.levels(); ++k) {
        for (int j = 0; j < g.ny(); ++j) {
            worst = std::max(worst,
                             std::fabs(g.at(f, k, j) - exact(g.x(k), g.ygrid().y(j))));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("initial grid copies the axis data to every level") {
    const SolverConfig cfg = base_config(1.0 / 16.0);
    const Problem prob = example71(cfg);
    const FieldGrid g = initial_grid(prob.init, cfg);
    for (int k = 0; k < g.levels(); ++k) {
        for (int j = 0; j < g.ny(); j += 7) {
            CHECK(g.at(FieldId::r, k, j) == prob.init.samples(FieldId::r)[j]);
            CHECK(g.at(FieldId::z, k, j) == prob.init.samples(FieldId::z)[j]);
        }
    }
}

TEST_CASE("stationary data is a fixed point of the very first sweep") {
    // A=0, B=1, C=0, D=-1 gives Delta=2; r0=1, s0=-1 with zero anchor makes
    // every right-hand side vanish, so iterate 1 reproduces iterate 0.
    SolverConfig cfg = base_config(1.0 / 16.0);
    CoefficientSet cs(parse_expr("0"), parse_expr("1"), parse_expr("0"), parse_expr("-1"));
    InitialData init = InitialData::from_rs(cs, in_y("1"), in_y("-1"), InitAnchor{0, 0, 0},
                                            cfg.make_ygrid());
    const SolveResult res = solve(cs, init, cfg);
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    CHECK(res.rn_history.size() == 1);
    CHECK(res.rn_history[0] == 0.0);
}

TEST_CASE("example7_1 dynamics are exact") {
    SolverConfig cfg = base_config(1.0 / 64.0);
    const Problem prob = example71(cfg);
    const SolveResult res = solve(prob.cs, prob.init, cfg);
    CHECK(res.converged);

    // r, s stay at the axis constants; p, q, z follow the hand integration
    // p = 1 - x/8, q = 0, z = 1 + x - x^2/16.
    CHECK(grid_error(res.grid, FieldId::r, [](double, double) { return 0.5; }) <= 1e-13);
    CHECK(grid_error(res.grid, FieldId::s, [](double, double) { return -0.5; }) <= 1e-13);
    CHECK(grid_error(res.grid, FieldId::p, [](double x, double) { return 1.0 - x / 8.0; }) <=
          1e-12);
    CHECK(grid_error(res.grid, FieldId::q, [](double, double) { return 0.0; }) <= 1e-13);
    CHECK(grid_error(res.grid, FieldId::z,
                     [](double x, double) { return 1.0 + x - x * x / 16.0; }) <= 1e-12);

    // contraction history: R_1 = 1, R_2 = 1/16, R_3 = 0
    REQUIRE(res.rn_history.size() == 3);
    CHECK(res.rn_history[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.rn_history[1] == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(res.rn_history[2] <= 1e-15);

    // reconstruction: z_xx = -1/32... check via the algebraic residual
    for (double r : res.residual_alg) {
        if (std::isfinite(r)) CHECK(std::fabs(r) <= 1e-12);
    }
    CHECK(res.flags.separation_failures == 0);
}

TEST_CASE("manufactured solution is reproduced to rounding") {
    SolverConfig cfg = base_config(1.0 / 32.0);
    const Problem prob = manufactured(cfg);
    const SolveResult res = solve(prob.cs, prob.init, cfg);
    CHECK(res.converged);
    CHECK(grid_error(res.grid, FieldId::z,
                     [](double x, double y) { return x * y + y * y / 2.0; }) <= 1e-12);
    CHECK(grid_error(res.grid, FieldId::p, [](double, double y) { return y; }) <= 1e-12);
    CHECK(grid_error(res.grid, FieldId::q, [](double x, double y) { return x + y; }) <= 1e-12);
}

TEST_CASE("curved characteristics converge at second order") {
    double errs_p[2], errs_z[2];
    for (int pass = 0; pass < 2; ++pass) {
        SolverConfig cfg = base_config(pass == 0 ? 1.0 / 16.0 : 1.0 / 32.0);
        const Problem prob = curved(cfg);
        const SolveResult res = solve(prob.cs, prob.init, cfg);
        REQUIRE(res.converged);
        errs_p[pass] = grid_error(res.grid, FieldId::p, [](double, double y) { return y; });
        errs_z[pass] = grid_error(res.grid, FieldId::z, [](double x, double y) {
            return x * y + y * y / 2.0 + y * y * y / 12.0;
        });
        // s is transported unchanged along vertical characteristics
        CHECK(grid_error(res.grid, FieldId::s,
                         [](double, double y) { return -2.0 / (1.0 + y / 2.0); }) <= 1e-10);
    }
    CHECK(errs_p[0] > 1e-8);               // the error is genuine
    CHECK(errs_p[1] <= errs_p[0] / 3.0);   // order ~2
    CHECK(errs_z[1] <= errs_z[0] / 3.0);
}

TEST_CASE("integrability and consistency hold on a nonconstant solve") {
    // Variable r0 via p0 = y + y^2/8; no closed form needed, the converged
    // grid must be internally consistent. Checks run on the determinacy core
    // (slope magnitude stays below 4): clamped boundary influence is not
    // solution data.
    SolverConfig cfg = base_config(1.0 / 64.0);
    cfg.x_max = 0.125;
    CoefficientSet cs(parse_expr("1"), parse_expr("0"), parse_expr("0"), parse_expr("0"));
    InitialData init =
        InitialData::from_zp(cs, in_y("y^2/2 + y^3/12"), in_y("y + y^2/8"), cfg.make_ygrid());
    const SolveResult res = solve(cs, init, cfg);
    REQUIRE(res.converged);

    const FieldGrid& g = res.grid;
    const double tol = 10.0 * (cfg.hx * cfg.hx + cfg.hy * cfg.hy);
    const int K = g.levels(), ny = g.ny();
    double worst_int = 0.0, worst_zx = 0.0, worst_zy = 0.0, worst_rec = 0.0, worst_fd = 0.0;
    int core_nodes = 0;
    for (int k = 1; k + 1 < K; ++k) {
        const double x = g.x(k);
        for (int j = 1; j + 1 < ny; ++j) {
            const double y = g.ygrid().y(j);
            if (std::fabs(y) > 1.0 - 4.0 * x - 2.0 * cfg.hy) continue;
            ++core_nodes;
            const double py =
                (g.at(FieldId::p, k, j + 1) - g.at(FieldId::p, k, j - 1)) / (2.0 * cfg.hy);
            const double qx =
                (g.at(FieldId::q, k + 1, j) - g.at(FieldId::q, k - 1, j)) / (2.0 * cfg.hx);
            const double zx =
                (g.at(FieldId::z, k + 1, j) - g.at(FieldId::z, k - 1, j)) / (2.0 * cfg.hx);
            const double zy =
                (g.at(FieldId::z, k, j + 1) - g.at(FieldId::z, k, j - 1)) / (2.0 * cfg.hy);
            worst_int = std::max(worst_int, std::fabs(py - qx));
            worst_zx = std::max(worst_zx, std::fabs(zx - g.at(FieldId::p, k, j)));
            worst_zy = std::max(worst_zy, std::fabs(zy - g.at(FieldId::q, k, j)));
            const double zxy = res.zxy[static_cast<size_t>(k) * ny + j];
            if (std::isfinite(zxy)) worst_rec = std::max(worst_rec, std::fabs(py - zxy));
            const double rfd = res.residual_fd[static_cast<size_t>(k) * ny + j];
            if (std::isfinite(rfd)) worst_fd = std::max(worst_fd, std::fabs(rfd));
        }
    }
    CHECK(core_nodes > 200);
    CHECK(worst_int <= tol);
    CHECK(worst_zx <= tol);
    CHECK(worst_zy <= tol);
    CHECK(worst_rec <= tol);
    // algebraic route is zero by construction; the finite-difference route
    // is the independent check
    CHECK(worst_fd <= tol);
}

TEST_CASE("converged grid is a fixed point of the sweep") {
    SolverConfig cfg = base_config(1.0 / 32.0);
    const Problem prob = curved(cfg);
    const SolveResult res = solve(prob.cs, prob.init, cfg);
    REQUIRE(res.converged);
    const FieldGrid again = iterate_once(prob.cs, res.grid, prob.init, cfg);
    CHECK(FieldGrid::sup_distance(again, res.grid) <= cfg.convergence_tol);
}

TEST_CASE("inner fixed-point slope mode reaches the same limit") {
    SolverConfig lagged = base_config(1.0 / 32.0);
    SolverConfig inner = lagged;
    inner.slope_mode = SlopeMode::inner_fixed_point;
    inner.inner_iters = 2;
    const Problem a = curved(lagged);
    const SolveResult res_lagged = solve(a.cs, a.init, lagged);
    const Problem b = curved(inner);
    const SolveResult res_inner = solve(b.cs, b.init, inner);
    REQUIRE(res_lagged.converged);
    REQUIRE(res_inner.converged);
    CHECK(FieldGrid::sup_distance(res_lagged.grid, res_inner.grid) <= 50.0 * lagged.convergence_tol);
}

TEST_CASE("mirror symmetry under y reflection") {
    // Reflected inputs give the y-reflected solution. The two runs integrate
    // z along different characteristic families (the reflection swaps them),
    // so agreement is O(h^2)-limited rather than bitwise; with a 0.01
    // perturbation amplitude the measured defect sits near 1e-6 at h = 1/32.
    SolverConfig cfg = base_config(1.0 / 32.0);
    CoefficientSet cs(parse_expr("1/16"), parse_expr("1/2"), parse_expr("0"), parse_expr("0"));
    InitialData init =
        InitialData::from_zp(cs, in_y("1 + 0.01*sin(y)"), in_y("1"), cfg.make_ygrid());
    InitialData rinit =
        InitialData::from_zp(cs, in_y("1 - 0.01*sin(y)"), in_y("1"), cfg.make_ygrid());
    const SolveResult res = solve(cs, init, cfg);
    const SolveResult rres = solve(cs, rinit, cfg);
    REQUIRE(res.converged);
    REQUIRE(rres.converged);

    const FieldGrid& g = res.grid;
    const FieldGrid& m = rres.grid;
    const int ny = g.ny();
    double worst = 0.0;
    for (int k = 0; k < g.levels(); ++k) {
        const double x = g.x(k);
        for (int j = 0; j < ny; ++j) {
            const double y = g.ygrid().y(j);
            if (std::fabs(y) > 1.0 - 0.52 * x - 2.0 * cfg.hy) continue;  // unclamped core
            const int jr = ny - 1 - j;
            worst = std::max(worst, std::fabs(m.at(FieldId::z, k, j) - g.at(FieldId::z, k, jr)));
            worst = std::max(worst, std::fabs(m.at(FieldId::r, k, j) + g.at(FieldId::s, k, jr)));
            worst = std::max(worst, std::fabs(m.at(FieldId::s, k, j) + g.at(FieldId::r, k, jr)));
            worst = std::max(worst, std::fabs(m.at(FieldId::p, k, j) - g.at(FieldId::p, k, jr)));
            worst = std::max(worst, std::fabs(m.at(FieldId::q, k, j) + g.at(FieldId::q, k, jr)));
        }
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("a-priori bounds and separation hold on every iterate") {
    SolverConfig cfg = base_config(1.0 / 32.0);
    const Problem prob = example71(cfg);
    const SolveResult res = solve(prob.cs, prob.init, cfg);
    REQUIRE(res.converged);

    const double alpha3 = 0.5;       // sup of |pi|, |kappa| for these constants
    const double eps = 0.25;
    const double slack = 10.0 * (cfg.hx * cfg.hx + cfg.hy * cfg.hy);
    for (const IterStats& st : res.iter_stats) {
        const int K = static_cast<int>(st.max_abs[0].size());
        for (int k = 0; k < K; ++k) {
            const double x = cfg.hx * k;
            CHECK(st.max_abs[static_cast<int>(FieldId::r)][k] <= 1.0 + slack);
            CHECK(st.max_abs[static_cast<int>(FieldId::s)][k] <= 1.0 + slack);
            CHECK(st.max_abs[static_cast<int>(FieldId::p)][k] <= 1.0 + 2.0 * alpha3 * x + slack);
            CHECK(st.max_abs[static_cast<int>(FieldId::q)][k] <= 1.0 + 2.0 * alpha3 * x + slack);
            CHECK(st.z_excess[k] <= 2.0 * x + 2.0 * alpha3 * x * x + slack);
        }
        CHECK(st.inf_r - st.sup_s >= eps - slack);
    }
}

TEST_CASE("exhausted iterations report the history and partial result") {
    SolverConfig cfg = base_config(1.0 / 16.0);
    cfg.max_iterations = 1;
    cfg.convergence_tol = 1e-14;
    const Problem prob = curved(cfg);
    bool threw = false;
    try {
        solve(prob.cs, prob.init, cfg);
    } catch (const NotConverged& nc) {
        threw = true;
        CHECK_FALSE(nc.result.converged);
        CHECK(nc.result.rn_history.size() == 1);
        CHECK(nc.result.iterations == 1);
    }
    CHECK(threw);

    // max_iterations = 0 returns the initial grid unconverged
    cfg.max_iterations = 0;
    try {
        solve(prob.cs, prob.init, cfg);
        CHECK(false);
    } catch (const NotConverged& nc) {
        CHECK_FALSE(nc.result.converged);
        CHECK(nc.result.rn_history.empty());
        const FieldGrid expect = initial_grid(prob.init, cfg);
        CHECK(FieldGrid::sup_distance(nc.result.grid, expect) == 0.0);
    }
}

TEST_CASE("node failures abort with a location") {
    // D = 1/(1 - 2x): evaluation blows past x = 1/2 inside the sweep.
    SolverConfig cfg = base_config(1.0 / 16.0);
    CoefficientSet cs(parse_expr("1"), parse_expr("0"), parse_expr("0"),
                      parse_expr("0.2/(1 - 2*x)"));
    InitialData init = InitialData::from_zp(cs, in_y("y^2/2"), in_y("y"), cfg.make_ygrid());
    CHECK_THROWS_AS(solve(cs, init, cfg), NodeFailure);
}
