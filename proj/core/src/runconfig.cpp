#include "mahyp/runconfig.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mahyp/contact.hpp"
#include "mahyp/errors.hpp"

namespace mahyp {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double get_num(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing '" + std::string(key) + "' in " + where);
    if (!obj[key].is_number()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a number");
    return obj[key].get<double>();
}

std::string get_str(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("missing '" + std::string(key) + "' in " + where);
    if (!obj[key].is_string()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a string");
    return obj[key].get<std::string>();
}

std::array<double, 2> get_range(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_array() || obj[key].size() != 2)
        throw ConfigError("'" + std::string(key) + "' in " + where + " must be [lo, hi]");
    return {obj[key][0].get<double>(), obj[key][1].get<double>()};
}

InitialSection parse_initial(const json& j) {
    InitialSection init;
    reject_unknown(j, {"z0", "p0", "r0", "s0", "anchor", "anchor_at"}, "problem.initial");
    const bool has_zp = j.contains("z0") || j.contains("p0");
    const bool has_rs = j.contains("r0") || j.contains("s0");
    if (has_zp == has_rs)
        throw ConfigError("problem.initial needs exactly one of {z0,p0} or {r0,s0,anchor}");
    if (has_zp) {
        init.z0 = get_str(j, "z0", "problem.initial");
        init.p0 = get_str(j, "p0", "problem.initial");
    } else {
        init.r0 = get_str(j, "r0", "problem.initial");
        init.s0 = get_str(j, "s0", "problem.initial");
        if (!j.contains("anchor")) throw ConfigError("problem.initial.{r0,s0} needs an anchor");
        const json& a = j["anchor"];
        reject_unknown(a, {"z", "p", "q"}, "problem.initial.anchor");
        init.anchor.z = get_num(a, "z", "anchor");
        init.anchor.p = get_num(a, "p", "anchor");
        init.anchor.q = get_num(a, "q", "anchor");
        if (j.contains("anchor_at")) {
            const std::string at = j["anchor_at"].get<std::string>();
            if (at == "ymin") init.anchor_at = AnchorAt::y_min;
            else if (at == "zero") init.anchor_at = AnchorAt::zero;
            else throw ConfigError("anchor_at must be 'ymin' or 'zero'");
        }
    }
    return init;
}

SampleBox parse_box(const json& j) {
    SampleBox box;
    reject_unknown(j, {"y", "z", "p", "q"}, "bounds.box");
    if (j.contains("y")) { auto r = get_range(j, "y", "bounds.box"); box.y_min = r[0]; box.y_max = r[1]; }
    if (j.contains("z")) { auto r = get_range(j, "z", "bounds.box"); box.z_min = r[0]; box.z_max = r[1]; }
    if (j.contains("p")) { auto r = get_range(j, "p", "bounds.box"); box.p_min = r[0]; box.p_max = r[1]; }
    if (j.contains("q")) { auto r = get_range(j, "q", "bounds.box"); box.q_min = r[0]; box.q_max = r[1]; }
    return box;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    reject_unknown(j, {"problem", "domain", "grid", "solver", "bounds", "surface", "function",
                       "output", "seed", "threads"},
                   "config root");

    if (!j.contains("problem")) throw ConfigError("missing 'problem' section");
    {
        const json& p = j["problem"];
        reject_unknown(p, {"A", "B", "C", "D", "initial"}, "problem");
        cfg.problem.A = get_str(p, "A", "problem");
        cfg.problem.B = get_str(p, "B", "problem");
        cfg.problem.C = get_str(p, "C", "problem");
        cfg.problem.D = get_str(p, "D", "problem");
        if (!p.contains("initial")) throw ConfigError("missing 'problem.initial'");
        cfg.problem.initial = parse_initial(p["initial"]);
    }

    if (j.contains("domain")) {
        const json& d = j["domain"];
        reject_unknown(d, {"x_min", "x_max", "y_min", "y_max"}, "domain");
        if (d.contains("x_min")) cfg.domain.x_min = d["x_min"].get<double>();
        cfg.domain.x_max = get_num(d, "x_max", "domain");
        cfg.domain.y_min = get_num(d, "y_min", "domain");
        cfg.domain.y_max = get_num(d, "y_max", "domain");
        if (!(cfg.domain.x_max > 0.0)) throw ConfigError("domain.x_max must be positive");
        if (cfg.domain.x_min > 0.0) throw ConfigError("domain.x_min must be <= 0");
        if (!(cfg.domain.y_max > cfg.domain.y_min)) throw ConfigError("domain needs y_max > y_min");
    }

    if (j.contains("grid")) {
        const json& g = j["grid"];
        reject_unknown(g, {"hx", "hy"}, "grid");
        cfg.hx = get_num(g, "hx", "grid");
        cfg.hy = get_num(g, "hy", "grid");
        if (!(cfg.hx > 0.0) || !(cfg.hy > 0.0)) throw ConfigError("grid steps must be positive");
    }

    if (j.contains("solver")) {
        const json& s = j["solver"];
        reject_unknown(s,
                       {"max_iterations", "convergence_tol", "slope_mode", "inner_iters",
                        "hyperbolicity_floor", "separation_floor"},
                       "solver");
        if (s.contains("max_iterations")) cfg.solver.max_iterations = s["max_iterations"].get<int>();
        if (s.contains("convergence_tol")) cfg.solver.convergence_tol = s["convergence_tol"].get<double>();
        if (s.contains("inner_iters")) cfg.solver.inner_iters = s["inner_iters"].get<int>();
        if (s.contains("hyperbolicity_floor"))
            cfg.solver.hyperbolicity_floor = s["hyperbolicity_floor"].get<double>();
        if (s.contains("separation_floor"))
            cfg.solver.separation_floor = s["separation_floor"].get<double>();
        if (s.contains("slope_mode")) {
            const std::string m = s["slope_mode"].get<std::string>();
            if (m == "lagged") cfg.solver.slope_mode = SlopeMode::lagged;
            else if (m == "inner-fixed-point") cfg.solver.slope_mode = SlopeMode::inner_fixed_point;
            else throw ConfigError("slope_mode must be 'lagged' or 'inner-fixed-point'");
        }
        if (cfg.solver.max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
        if (!(cfg.solver.convergence_tol > 0.0)) throw ConfigError("convergence_tol must be > 0");
    }

    if (j.contains("bounds")) {
        const json& b = j["bounds"];
        reject_unknown(b,
                       {"M1", "M2", "delta", "eps", "eta", "mode", "tail_bound", "box", "x_range",
                        "x_samples", "samples", "ml"},
                       "bounds");
        BoundsSection bs;
        if (b.contains("M1")) bs.M1 = b["M1"].get<double>();
        if (b.contains("M2")) bs.M2 = b["M2"].get<double>();
        if (b.contains("delta")) bs.delta = b["delta"].get<double>();
        if (b.contains("eps")) bs.eps = b["eps"].get<double>();
        if (b.contains("eta")) bs.eta = b["eta"].get<std::string>();
        if (b.contains("mode")) {
            bs.mode = b["mode"].get<std::string>();
            if (bs.mode != "user-supplied" && bs.mode != "grid-estimated")
                throw ConfigError("bounds.mode must be 'user-supplied' or 'grid-estimated'");
        }
        if (b.contains("tail_bound")) bs.tail_bound = b["tail_bound"].get<double>();
        if (b.contains("box")) bs.box = parse_box(b["box"]);
        if (b.contains("x_range")) bs.x_range = get_range(b, "x_range", "bounds");
        if (b.contains("x_samples")) bs.x_samples = b["x_samples"].get<int>();
        if (b.contains("samples")) bs.samples = b["samples"].get<int>();
        if (b.contains("ml")) {
            const json& m = b["ml"];
            reject_unknown(m, {"m1", "m2", "L1", "L2", "L3"}, "bounds.ml");
            MLConstants ml;
            ml.m1 = get_num(m, "m1", "bounds.ml");
            ml.m2 = get_num(m, "m2", "bounds.ml");
            ml.L1 = get_num(m, "L1", "bounds.ml");
            ml.L2 = get_num(m, "L2", "bounds.ml");
            ml.L3 = get_num(m, "L3", "bounds.ml");
            bs.ml = ml;
        }
        cfg.bounds = bs;
    }

    if (j.contains("surface")) {
        const json& s = j["surface"];
        reject_unknown(s, {"x", "y", "z", "p", "q", "u_range", "v_range", "samples"}, "surface");
        SurfaceSection ss;
        ss.x = get_str(s, "x", "surface");
        ss.y = get_str(s, "y", "surface");
        ss.z = get_str(s, "z", "surface");
        ss.p = get_str(s, "p", "surface");
        ss.q = get_str(s, "q", "surface");
        if (s.contains("u_range")) ss.u_range = get_range(s, "u_range", "surface");
        if (s.contains("v_range")) ss.v_range = get_range(s, "v_range", "surface");
        if (s.contains("samples")) ss.samples = s["samples"].get<int>();
        cfg.surface = ss;
    }

    if (j.contains("function")) cfg.function = j["function"].get<std::string>();

    if (j.contains("output")) {
        const json& o = j["output"];
        reject_unknown(o, {"dir"}, "output");
        if (o.contains("dir")) cfg.output.dir = o["dir"].get<std::string>();
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();

    // Expressions must parse now, fail-closed.
    try {
        parse_expr(cfg.problem.A);
        parse_expr(cfg.problem.B);
        parse_expr(cfg.problem.C);
        parse_expr(cfg.problem.D);
        constexpr VarBinding y_only[] = {{"y", Var::y}};
        constexpr VarBinding x_only[] = {{"x", Var::x}};
        const InitialSection& init = cfg.problem.initial;
        if (init.is_zp()) {
            parse_expr(*init.z0, y_only);
            parse_expr(*init.p0, y_only);
        } else {
            parse_expr(*init.r0, y_only);
            parse_expr(*init.s0, y_only);
        }
        if (cfg.bounds) parse_expr(cfg.bounds->eta, x_only);
        if (cfg.surface) {
            parse_surface_expr(cfg.surface->x);
            parse_surface_expr(cfg.surface->y);
            parse_surface_expr(cfg.surface->z);
            parse_surface_expr(cfg.surface->p);
            parse_surface_expr(cfg.surface->q);
        }
        if (cfg.function) {
            const Expr f = parse_expr(*cfg.function);
            if (f.depends_on(Var::z) || f.depends_on(Var::p) || f.depends_on(Var::q))
                throw ConfigError("'function' must use x and y only");
        }
    } catch (const SyntaxError& e) {
        throw ConfigError(std::string("expression: ") + e.what());
    } catch (const UnknownIdentifier& e) {
        throw ConfigError(std::string("expression: ") + e.what());
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    j["problem"]["A"] = cfg.problem.A;
    j["problem"]["B"] = cfg.problem.B;
    j["problem"]["C"] = cfg.problem.C;
    j["problem"]["D"] = cfg.problem.D;
    const InitialSection& init = cfg.problem.initial;
    json ji;
    if (init.is_zp()) {
        ji["z0"] = *init.z0;
        ji["p0"] = *init.p0;
    } else {
        ji["r0"] = *init.r0;
        ji["s0"] = *init.s0;
        ji["anchor"] = {{"z", init.anchor.z}, {"p", init.anchor.p}, {"q", init.anchor.q}};
        ji["anchor_at"] = init.anchor_at == AnchorAt::y_min ? "ymin" : "zero";
    }
    j["problem"]["initial"] = ji;
    j["domain"] = {{"x_min", cfg.domain.x_min},
                   {"x_max", cfg.domain.x_max},
                   {"y_min", cfg.domain.y_min},
                   {"y_max", cfg.domain.y_max}};
    j["grid"] = {{"hx", cfg.hx}, {"hy", cfg.hy}};
    j["solver"] = {
        {"max_iterations", cfg.solver.max_iterations},
        {"convergence_tol", cfg.solver.convergence_tol},
        {"slope_mode", cfg.solver.slope_mode == SlopeMode::lagged ? "lagged" : "inner-fixed-point"},
        {"inner_iters", cfg.solver.inner_iters},
        {"hyperbolicity_floor", cfg.solver.hyperbolicity_floor},
        {"separation_floor", cfg.solver.separation_floor}};
    if (cfg.bounds) {
        const BoundsSection& b = *cfg.bounds;
        json jb;
        if (b.M1) jb["M1"] = *b.M1;
        if (b.M2) jb["M2"] = *b.M2;
        if (b.delta) jb["delta"] = *b.delta;
        if (b.eps) jb["eps"] = *b.eps;
        jb["eta"] = b.eta;
        jb["mode"] = b.mode;
        jb["tail_bound"] = b.tail_bound;
        jb["box"] = {{"y", {b.box.y_min, b.box.y_max}},
                     {"z", {b.box.z_min, b.box.z_max}},
                     {"p", {b.box.p_min, b.box.p_max}},
                     {"q", {b.box.q_min, b.box.q_max}}};
        jb["x_range"] = {b.x_range[0], b.x_range[1]};
        jb["x_samples"] = b.x_samples;
        jb["samples"] = b.samples;
        if (b.ml) {
            jb["ml"] = {{"m1", b.ml->m1}, {"m2", b.ml->m2}, {"L1", b.ml->L1},
                        {"L2", b.ml->L2}, {"L3", b.ml->L3}};
        }
        j["bounds"] = jb;
    }
    if (cfg.surface) {
        const SurfaceSection& s = *cfg.surface;
        j["surface"] = {{"x", s.x},       {"y", s.y},
                        {"z", s.z},       {"p", s.p},
                        {"q", s.q},       {"u_range", {s.u_range[0], s.u_range[1]}},
                        {"v_range", {s.v_range[0], s.v_range[1]}},
                        {"samples", s.samples}};
    }
    if (cfg.function) j["function"] = *cfg.function;
    j["output"] = {{"dir", cfg.output.dir}};
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j.dump(2);
}

bool config_equivalent(const RunConfig& a, const RunConfig& b) {
    return config_to_json(a) == config_to_json(b);
}

}  // namespace mahyp
