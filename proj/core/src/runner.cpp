#include "mahyp/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "mahyp/contact.hpp"
#include "mahyp/errors.hpp"

namespace mahyp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr VarBinding kYOnly[] = {{"y", Var::y}};
constexpr VarBinding kXOnly[] = {{"x", Var::x}};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
    return xs;
}

json check_to_json(const Check& c) {
    json j;
    j["verdict"] = verdict_name(c.verdict);
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

}  // namespace

BuiltProblem build_problem(const RunConfig& cfg) {
    const Expr A = parse_expr(cfg.problem.A);
    const Expr B = parse_expr(cfg.problem.B);
    const Expr C = parse_expr(cfg.problem.C);
    const Expr D = parse_expr(cfg.problem.D);
    CoefficientSet cs(A, B, C, D, cfg.solver.hyperbolicity_floor);

    SolverConfig scfg = cfg.solver;
    scfg.x_max = cfg.domain.x_max;
    scfg.y_min = cfg.domain.y_min;
    scfg.y_max = cfg.domain.y_max;
    scfg.hx = cfg.hx;
    scfg.hy = cfg.hy;
    scfg.threads = cfg.threads;

    const YGrid yg = scfg.make_ygrid();
    const InitialSection& init = cfg.problem.initial;
    if (init.is_zp()) {
        const Expr z0 = parse_expr(*init.z0, kYOnly);
        const Expr p0 = parse_expr(*init.p0, kYOnly);
        InitialData data = InitialData::from_zp(cs, z0, p0, yg, scfg.separation_floor);
        return BuiltProblem{std::move(cs), std::move(data), scfg};
    }
    const Expr r0 = parse_expr(*init.r0, kYOnly);
    const Expr s0 = parse_expr(*init.s0, kYOnly);
    InitialData data = InitialData::from_rs(cs, r0, s0, init.anchor, yg, scfg.separation_floor,
                                            init.anchor_at);
    return BuiltProblem{std::move(cs), std::move(data), scfg};
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

int run_check(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const BuiltProblem built = build_problem(cfg);
    const BoundsSection bsec = cfg.bounds.value_or(BoundsSection{});

    const std::vector<double> xs = linspace(bsec.x_range[0], bsec.x_range[1], bsec.x_samples);

    ConditionReport report;
    report.seed = cfg.seed;
    report.axis = built.init.check_axis(bsec.delta, bsec.eps);
    {
        const double y0 = built.init.grid().y_min;
        const JetPoint jet{0.0, y0, built.init.eval(FieldId::z, y0), built.init.eval(FieldId::p, y0),
                           built.init.eval(FieldId::q, y0)};
        report.delta_on_axis = built.cs.delta(jet);
    }

    report.alphas = estimate_alphas(built.cs, bsec.box, xs, cfg.seed, bsec.samples);

    BoundsInput bounds;
    bounds.eta = parse_expr(bsec.eta, kXOnly);
    bounds.tail_bound = bsec.tail_bound;
    const bool user_mode = bsec.mode == "user-supplied";
    bounds.user_supplied = user_mode && bsec.M1 && bsec.M2 && bsec.delta && bsec.eps;
    bounds.delta = bsec.delta.value_or(report.axis.delta_candidate);
    bounds.eps = bsec.eps.value_or(bounds.delta);
    if (bounds.user_supplied) {
        bounds.M1 = *bsec.M1;
        bounds.M2 = *bsec.M2;
        bounds.validate();  // user-declared constants must satisfy the pair constraints
    }
    if (bsec.M1 && bsec.M2) {
        bounds.M1 = *bsec.M1;
        bounds.M2 = *bsec.M2;
    } else if (!report.alphas.sampling_failed) {
        // Grid estimate: sup of |B|,|C|,|D|,Delta and of 1/Delta over the box.
        double m1 = 0.0, m2 = 0.0;
        for (double x : {xs.front(), 0.0, xs.back()}) {
            for (int i = 0; i <= 8; ++i) {
                for (int jj = 0; jj <= 8; ++jj) {
                    JetPoint pt{x,
                                bsec.box.y_min + (bsec.box.y_max - bsec.box.y_min) * i / 8.0,
                                bsec.box.z_min + (bsec.box.z_max - bsec.box.z_min) * jj / 8.0,
                                0.5 * (bsec.box.p_min + bsec.box.p_max),
                                0.5 * (bsec.box.q_min + bsec.box.q_max)};
                    const CoefficientSet::Values v = built.cs.values(pt);
                    m1 = std::max({m1, std::fabs(v.B), std::fabs(v.C), std::fabs(v.D), v.delta});
                    m2 = std::max(m2, 1.0 / v.delta);
                }
            }
        }
        bounds.M1 = m1;
        bounds.M2 = m2;
    }

    report.transport = check_transport_smallness(built.init, bounds, report.alphas);
    report.coefficient_conditions = check_coefficient_conditions(built.cs, built.init, bounds, bsec.box, xs, cfg.seed, bsec.samples);
    if (bsec.ml) {
        report.initial_data_conditions = check_initial_data_conditions(built.cs, built.init, bounds, *bsec.ml, bsec.box, xs, cfg.seed,
                              bsec.samples);
    }
    if (bounds.eps > 0.0) {
        try {
            const double a = estimate_rhs_bound(built.cs, bsec.box, xs, cfg.seed);
            const std::vector<double> xs_pos =
                linspace(0.0, cfg.domain.x_max, std::max(2, bsec.x_samples / 2));
            report.majorant = derivative_majorant(bounds, a, built.init.v0(), xs_pos, true);
        } catch (const std::exception&) {
            // advisory; leave absent when estimation fails
        }
    }

    json j;
    j["seed"] = report.seed;
    j["delta_on_axis"] = report.delta_on_axis;
    j["axis"] = {{"delta_candidate", report.axis.delta_candidate},
                 {"r0", {{"sup_abs", report.axis.sup_abs_r0}}},
                 {"s0", {{"sup_abs", report.axis.sup_abs_s0}}},
                 {"p0", {{"sup_abs", report.axis.sup_abs_p0}}},
                 {"q0", {{"sup_abs", report.axis.sup_abs_q0}}},
                 {"delta_used", report.axis.delta_used},
                 {"eps_used", report.axis.eps_used},
                 {"samples", report.axis.samples}};
    j["bounds_used"] = {{"M1", bounds.M1},
                        {"M2", bounds.M2},
                        {"delta", bounds.delta},
                        {"eps", bounds.eps},
                        {"mode", bounds.user_supplied ? "user-supplied" : "grid-estimated"},
                        {"tail_bound", bounds.tail_bound}};
    j["alphas"] = {{"x", report.alphas.alpha1.x},
                   {"alpha1", report.alphas.alpha1.value},
                   {"alpha2", report.alphas.alpha2.value},
                   {"alpha3", report.alphas.alpha3},
                   {"samples_per_x", report.alphas.samples_per_x},
                   {"samples_alpha3", report.alphas.samples_alpha3},
                   {"sampling_failed", report.alphas.sampling_failed}};
    j["constants"] = {{"U0", report.transport.U0},
                      {"int_alpha1", report.transport.int_alpha1},
                      {"int_weighted_alpha2", report.transport.int_weighted_alpha2}};
    j["checks"]["smallness"] = check_to_json(report.transport.smallness);
    j["checks"]["axis_separation"] = check_to_json(report.transport.axis_separation);
    j["checks"]["envelope_margin"] = check_to_json(report.transport.envelope_margin);
    if (report.coefficient_conditions) {
        j["constants"]["N1"] = report.coefficient_conditions->N1;
        j["constants"]["N2"] = report.coefficient_conditions->N2;
        j["constants"]["int_eta"] = report.coefficient_conditions->int_eta;
        json arr = json::array();
        for (const auto& c : report.coefficient_conditions->point) arr.push_back(check_to_json(c));
        j["checks"]["coefficient_conditions"] = arr;
    }
    if (report.initial_data_conditions) {
        j["constants"]["m3"] = report.initial_data_conditions->m3;
        j["constants"]["m4"] = report.initial_data_conditions->m4;
        j["constants"]["L4"] = report.initial_data_conditions->L4;
        json arr = json::array();
        for (const auto& c : report.initial_data_conditions->point) arr.push_back(check_to_json(c));
        j["checks"]["initial_data_conditions"] = arr;
    }
    if (report.majorant) {
        j["majorant"] = {{"a", report.majorant->a},
                         {"a_is_estimate", report.majorant->a_is_estimate},
                         {"V0", report.majorant->V0},
                         {"x", report.majorant->psi.x},
                         {"psi", report.majorant->psi.value},
                         {"V", report.majorant->V.value},
                         {"Phi", report.majorant->Phi.value}};
    }
    const Verdict overall = report.overall();
    j["overall"] = verdict_name(overall);

    std::ofstream out(fs::path(out_dir) / "report.json");
    out << j.dump(2) << "\n";

    switch (overall) {
        case Verdict::pass: return exit_ok;
        case Verdict::fail: return exit_check_failed;
        case Verdict::unknown: return exit_check_unknown;
    }
    return exit_check_unknown;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

namespace {

/// Half-plane solve packaged for stitching.
struct HalfResult {
    SolveResult res;
    bool not_converged = false;
};

HalfResult solve_half(const CoefficientSet& cs, const InitialData& init, const SolverConfig& scfg) {
    HalfResult h;
    try {
        h.res = solve(cs, init, scfg);
    } catch (NotConverged& nc) {
        h.res = std::move(nc.result);
        h.not_converged = true;
    }
    return h;
}

/// Reflected problem for the x <= 0 half: x -> -x flips p and C.
RunConfig reflect_config(const RunConfig& cfg) {
    RunConfig r = cfg;
    auto reflect = [](const std::string& src, bool negate) {
        const Expr e = parse_expr(src);
        const Expr mirrored = e.substitute({{Var::x, -Expr::variable(Var::x)},
                                            {Var::p, -Expr::variable(Var::p)}});
        return (negate ? -mirrored : mirrored).str();
    };
    r.problem.A = reflect(cfg.problem.A, false);
    r.problem.B = reflect(cfg.problem.B, false);
    r.problem.C = reflect(cfg.problem.C, true);
    r.problem.D = reflect(cfg.problem.D, false);
    InitialSection& init = r.problem.initial;
    if (init.is_zp()) {
        init.p0 = (-parse_expr(*cfg.problem.initial.p0, kYOnly)).str();
    } else {
        init.r0 = (-parse_expr(*cfg.problem.initial.s0, kYOnly)).str();
        init.s0 = (-parse_expr(*cfg.problem.initial.r0, kYOnly)).str();
        init.anchor.p = -init.anchor.p;
    }
    r.domain.x_max = -cfg.domain.x_min;
    r.domain.x_min = 0.0;
    return r;
}

void write_solution_row(std::ofstream& out, double x, double y, double r, double s, double p,
                        double q, double z, double zxx, double zxy, double zyy, double resfd,
                        int clamped) {
    out << fmt17(x) << ',' << fmt17(y) << ',' << fmt17(r) << ',' << fmt17(s) << ',' << fmt17(p)
        << ',' << fmt17(q) << ',' << fmt17(z) << ',' << fmt17(zxx) << ',' << fmt17(zxy) << ','
        << fmt17(zyy) << ',' << fmt17(resfd) << ',' << clamped << '\n';
}

json flags_to_json(const SolveFlags& f) {
    return {{"clamp_count", f.clamp_count},
            {"separation_failures", f.separation_failures},
            {"outside_trapezoid", f.outside_trapezoid}};
}

double finite_sup(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        if (std::isfinite(x)) m = std::max(m, std::fabs(x));
    }
    return m;
}

}  // namespace

int run_solve(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    json meta;
    meta["config"] = json::parse(config_to_json(cfg));

    try {
        const BuiltProblem built = build_problem(cfg);
        const HalfResult right = solve_half(built.cs, built.init, built.solver);

        std::optional<HalfResult> left;
        std::optional<BuiltProblem> left_built;
        if (cfg.domain.x_min < 0.0) {
            const RunConfig lcfg = reflect_config(cfg);
            left_built = build_problem(lcfg);
            left = solve_half(left_built->cs, left_built->init, left_built->solver);
        }

        // solution.csv: rows ascending in x, negative half first.
        std::ofstream sol(fs::path(out_dir) / "solution.csv");
        sol << "x,y,r,s,p,q,z,z_xx,z_xy,z_yy,residual_fd,clamped\n";
        if (left) {
            const SolveResult& L = left->res;
            const FieldGrid& g = L.grid;
            for (int k = g.levels() - 1; k >= 1; --k) {
                for (int j = 0; j < g.ny(); ++j) {
                    const size_t i = static_cast<size_t>(k) * g.ny() + j;
                    write_solution_row(sol, -g.x(k), g.ygrid().y(j),
                                       -g.at(FieldId::s, k, j), -g.at(FieldId::r, k, j),
                                       -g.at(FieldId::p, k, j), g.at(FieldId::q, k, j),
                                       g.at(FieldId::z, k, j), L.zxx[i], -L.zxy[i], L.zyy[i],
                                       L.residual_fd[i], L.clamped[i]);
                }
            }
        }
        {
            const SolveResult& R = right.res;
            const FieldGrid& g = R.grid;
            for (int k = 0; k < g.levels(); ++k) {
                for (int j = 0; j < g.ny(); ++j) {
                    const size_t i = static_cast<size_t>(k) * g.ny() + j;
                    write_solution_row(sol, g.x(k), g.ygrid().y(j), g.at(FieldId::r, k, j),
                                       g.at(FieldId::s, k, j), g.at(FieldId::p, k, j),
                                       g.at(FieldId::q, k, j), g.at(FieldId::z, k, j), R.zxx[i],
                                       R.zxy[i], R.zyy[i], R.residual_fd[i], R.clamped[i]);
                }
            }
        }

        std::ofstream conv(fs::path(out_dir) / "convergence.csv");
        conv << "iteration,R_n\n";
        for (size_t n = 0; n < right.res.rn_history.size(); ++n) {
            conv << (n + 1) << ',' << fmt17(right.res.rn_history[n]) << '\n';
        }
        if (left) {
            std::ofstream lconv(fs::path(out_dir) / "convergence_left.csv");
            lconv << "iteration,R_n\n";
            for (size_t n = 0; n < left->res.rn_history.size(); ++n) {
                lconv << (n + 1) << ',' << fmt17(left->res.rn_history[n]) << '\n';
            }
        }

        const bool converged = !right.not_converged && (!left || !left->not_converged);
        meta["converged"] = converged;
        meta["iterations"] = right.res.iterations;
        meta["rn_history"] = right.res.rn_history;
        meta["flags"] = flags_to_json(right.res.flags);

        json post;
        post["residual_fd_sup"] = finite_sup(right.res.residual_fd);
        post["residual_alg_sup"] = finite_sup(right.res.residual_alg);
        if (converged) {
            const SeparationIdentityResult sep = check_separation_identity(built.cs, right.res);
            post["separation_identity"] = {{"max_rel_defect", sep.max_rel_defect},
                                           {"nodes_checked", sep.nodes_checked}};
        }
        meta["a_posteriori"] = post;
        if (left) {
            meta["left_half"] = {{"converged", !left->not_converged},
                                 {"iterations", left->res.iterations},
                                 {"rn_history", left->res.rn_history},
                                 {"flags", flags_to_json(left->res.flags)}};
        }

        const auto t1 = std::chrono::steady_clock::now();
        meta["timing_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        std::ofstream mout(fs::path(out_dir) / "meta.json");
        mout << meta.dump(2) << "\n";
        return converged ? exit_ok : exit_not_converged;
    } catch (const NodeFailure& nf) {
        meta["failure"] = {{"x", nf.x}, {"y", nf.y}, {"cause", nf.cause}};
        const auto t1 = std::chrono::steady_clock::now();
        meta["timing_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        std::ofstream mout(fs::path(out_dir) / "meta.json");
        mout << meta.dump(2) << "\n";
        return exit_node_failure;
    }
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

int run_transform(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    if (!cfg.surface && !cfg.function) {
        throw ConfigError("transform needs a 'surface' or 'function' section");
    }

    IntegralSurface surf;
    std::optional<Expr> f;
    int n = 16;
    if (cfg.surface) {
        const SurfaceSection& s = *cfg.surface;
        surf.x = parse_surface_expr(s.x);
        surf.y = parse_surface_expr(s.y);
        surf.z = parse_surface_expr(s.z);
        surf.p = parse_surface_expr(s.p);
        surf.q = parse_surface_expr(s.q);
        surf.u_min = s.u_range[0];
        surf.u_max = s.u_range[1];
        surf.v_min = s.v_range[0];
        surf.v_max = s.v_range[1];
        n = s.samples;
    } else {
        f = parse_expr(*cfg.function);
        surf = IntegralSurface::graph(*f, -1.0, 1.0, -1.0, 1.0);
        n = 16;
    }
    if (!(surf.u_max > surf.u_min) || !(surf.v_max > surf.v_min) || n < 2) {
        throw ConfigError("surface parameter box is empty");
    }

    const IntegralSurface image = ampere_transform(surf);

    const Expr fxx = f ? f->derivative(Var::x).derivative(Var::x) : Expr();
    const Expr fxy = f ? f->derivative(Var::x).derivative(Var::y) : Expr();
    const Expr fyy = f ? f->derivative(Var::y).derivative(Var::y) : Expr();

    std::array<std::array<double, 5>, 5> wave_form{};
    wave_form[0][4] = 1.0;
    wave_form[1][3] = 1.0;
    std::array<std::array<double, 5>, 5> area_form{};
    area_form[0][1] = 1.0;

    std::ofstream in_csv(fs::path(out_dir) / "surface_in.csv");
    std::ofstream out_csv(fs::path(out_dir) / "surface_out.csv");
    std::ofstream ranks_csv(fs::path(out_dir) / "ranks.csv");
    in_csv << "u,v,x,y,z,p,q\n";
    out_csv << "u,v,x,y,z,p,q\n";
    ranks_csv << "u,v,rank_in,rank_out,ma_residual,wave_residual\n";

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double u = surf.u_min + (surf.u_max - surf.u_min) * i / (n - 1);
            const double v = surf.v_min + (surf.v_max - surf.v_min) * j / (n - 1);
            const JetPoint pt{u, v, 0, 0, 0};
            auto row = [&](std::ofstream& os, const IntegralSurface& s) {
                os << fmt17(u) << ',' << fmt17(v);
                for (int c = 0; c < 5; ++c) os << ',' << fmt17(s.component(c).eval(pt));
                os << '\n';
            };
            row(in_csv, surf);
            row(out_csv, image);

            const int rank_in = projection_rank(surf, u, v);
            const int rank_out = projection_rank(image, u, v);
            ranks_csv << fmt17(u) << ',' << fmt17(v) << ',' << rank_in << ',' << rank_out << ',';
            if (f) {
                const double hess = fxx.eval(pt) * fyy.eval(pt) - fxy.eval(pt) * fxy.eval(pt);
                ranks_csv << fmt17(hess + 1.0);
                if (rank_out == 2) {
                    const double num = pullback_2form(image, wave_form, u, v);
                    const double den = pullback_2form(image, area_form, u, v);
                    ranks_csv << ',' << fmt17(num / den);
                } else {
                    ranks_csv << ',';
                }
            } else {
                ranks_csv << ',';
            }
            ranks_csv << '\n';
        }
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// demos
// ---------------------------------------------------------------------------

namespace {

const char* kExample71 = R"json({
  "problem": {
    "A": "1/16", "B": "1/2", "C": "0", "D": "0",
    "initial": { "z0": "1", "p0": "1" }
  },
  "domain": { "x_max": 1.0, "y_min": -1.0, "y_max": 1.0 },
  "grid": { "hx": 0.0078125, "hy": 0.0078125 },
  "solver": { "max_iterations": 50, "convergence_tol": 1e-10 },
  "bounds": {
    "M1": 0.5, "M2": 2.0, "delta": 0.25, "eps": 0.25, "eta": "0",
    "box": { "y": [-1, 1], "z": [0, 3], "p": [-1.5, 1.5], "q": [-1.5, 1.5] },
    "x_range": [-1, 1], "x_samples": 65, "samples": 128,
    "ml": { "m1": 0, "m2": 0, "L1": 0.5, "L2": 0.5, "L3": 0.5 }
  },
  "output": { "dir": "out" },
  "seed": 42
})json";

const char* kExample72 = R"json({
  "problem": {
    "A": "1/16", "B": "1/2", "C": "0", "D": "0",
    "initial": { "r0": "0.5", "s0": "-0.5", "anchor": { "z": 1, "p": 1, "q": 0 } }
  },
  "domain": { "x_max": 1.0, "y_min": -1.0, "y_max": 1.0 },
  "grid": { "hx": 0.015625, "hy": 0.015625 },
  "solver": { "max_iterations": 50, "convergence_tol": 1e-10 },
  "output": { "dir": "out" },
  "seed": 42
})json";

const char* kExample73 = R"json({
  "problem": {
    "A": "1/16",
    "B": "1/2 + exp(-x^2)*(0.0005*sin(y) + 0.0002*tanh(z) + 0.0002*sin(p))",
    "C": "0", "D": "0",
    "initial": { "z0": "1", "p0": "1" }
  },
  "domain": { "x_max": 1.0, "y_min": -4.0, "y_max": 4.0 },
  "grid": { "hx": 0.03125, "hy": 0.03125 },
  "solver": { "max_iterations": 50, "convergence_tol": 1e-10 },
  "bounds": {
    "M1": 0.501, "M2": 2.0, "delta": 0.99, "eps": 0.45,
    "eta": "0.002*(1 + 2*abs(x))*exp(-x^2)",
    "box": { "y": [-4, 4], "z": [-2, 2], "p": [-2, 2], "q": [-2, 2] },
    "x_range": [-6, 6], "x_samples": 121, "samples": 128,
    "ml": { "m1": 0, "m2": 0, "L1": 0.4991, "L2": 0.5009, "L3": 0.51 }
  },
  "output": { "dir": "out" },
  "seed": 42
})json";

const char* kManufactured = R"json({
  "problem": {
    "A": "1", "B": "0", "C": "0", "D": "0",
    "initial": { "z0": "y^2/2", "p0": "y" }
  },
  "domain": { "x_max": 1.0, "y_min": -1.0, "y_max": 1.0 },
  "grid": { "hx": 0.0078125, "hy": 0.0078125 },
  "solver": { "max_iterations": 50, "convergence_tol": 1e-10 },
  "bounds": {
    "M1": 2.0, "M2": 0.5, "delta": 2.0, "eps": 2.0, "eta": "0",
    "box": { "y": [-1, 1], "z": [-1, 2], "p": [-2, 2], "q": [-2.5, 2.5] },
    "x_range": [-1, 1], "x_samples": 65, "samples": 128
  },
  "output": { "dir": "out" },
  "seed": 42
})json";

const char* kAmpere = R"json({
  "problem": {
    "A": "1", "B": "0", "C": "0", "D": "0",
    "initial": { "z0": "y^2/2", "p0": "y" }
  },
  "surface": {
    "x": "u", "y": "v", "z": "u*v", "p": "v", "q": "u",
    "u_range": [-1, 1], "v_range": [-1, 1], "samples": 16
  },
  "output": { "dir": "out" },
  "seed": 42
})json";

}  // namespace

const char* demo_config_text(const std::string& name) {
    if (name == "example7_1") return kExample71;
    if (name == "example7_2") return kExample72;
    if (name == "example7_3") return kExample73;
    if (name == "manufactured") return kManufactured;
    if (name == "ampere") return kAmpere;
    return nullptr;
}

int run_demo(const std::string& name, const std::string& out_dir, int threads,
             std::uint64_t seed) {
    const char* text = demo_config_text(name);
    if (!text) throw ConfigError("unknown demo '" + name + "'");
    RunConfig cfg = parse_config_text(text);
    cfg.threads = threads;
    cfg.seed = seed;

    if (name == "ampere") {
        // The classical z = xy surface maps to a rank-1 image; a second run
        // shows a solution whose image stays graphical and solves the wave
        // equation.
        int rc = run_transform(cfg, (fs::path(out_dir) / "xy").string());
        if (rc != exit_ok) return rc;
        RunConfig graphical = cfg;
        graphical.surface.reset();
        graphical.function = "x*y + x^2/2";
        return run_transform(graphical, (fs::path(out_dir) / "graphical").string());
    }
    if (name == "example7_1" || name == "example7_3") {
        const int rc = run_check(cfg, out_dir);
        if (rc != exit_ok) return rc;
        return run_solve(cfg, out_dir);
    }
    if (name == "manufactured") {
        // The condition checker reports the expected amplitude-cap failure for this
        // data; the solve itself succeeds.
        run_check(cfg, out_dir);
        return run_solve(cfg, out_dir);
    }
    return run_solve(cfg, out_dir);
}

}  // namespace mahyp
