#include "mahyp/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mahyp/errors.hpp"

namespace mahyp {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::unknown: return "unknown";
    }
    return "?";
}

void BoundsInput::validate() const {
    if (!(M1 > 0.0) || !(M2 > 0.0)) throw ConfigError("M1, M2 must be positive");
    if (!(0.0 < eps && eps <= delta)) throw ConfigError("need 0 < eps <= delta");
    if (!(0.5 * (delta - eps) < 1.0)) throw ConfigError("need (delta - eps)/2 < 1");
}

double BoundsInput::eta_at(double x) const { return eta.eval(JetPoint{x, 0, 0, 0, 0}); }

double BoundsInput::eta_tilde_at(double x) const {
    return eta_at(x) / (1.0 + 2.0 * M1 * std::fabs(x));
}

double EnvelopeTable::integral() const {
    double acc = 0.0;
    for (size_t i = 1; i < x.size(); ++i) {
        acc += 0.5 * (x[i] - x[i - 1]) * (value[i] + value[i - 1]);
    }
    return acc;
}

namespace {

/// Deterministic Latin hypercube over [0,1]^dims: one stratum per sample and
/// dimension, order shuffled per dimension.
std::vector<std::array<double, 5>> latin_hypercube(int n, int dims, std::mt19937_64& rng) {
    std::vector<std::array<double, 5>> pts(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> strata(n);
    for (int d = 0; d < dims; ++d) {
        for (int i = 0; i < n; ++i) strata[i] = i;
        std::shuffle(strata.begin(), strata.end(), rng);
        for (int i = 0; i < n; ++i) pts[i][d] = (strata[i] + unit(rng)) / n;
    }
    return pts;
}

double lerp(double a, double b, double t) { return a + (b - a) * t; }

JetPoint box_point(const SampleBox& box, double x, const std::array<double, 5>& u) {
    return JetPoint{x, lerp(box.y_min, box.y_max, u[0]), lerp(box.z_min, box.z_max, u[1]),
                    lerp(box.p_min, box.p_max, u[2]), lerp(box.q_min, box.q_max, u[3])};
}

}  // namespace

AlphaTables estimate_alphas(const CoefficientSet& cs, const SampleBox& box,
                            const std::vector<double>& x_samples, std::uint64_t seed,
                            int samples_per_x) {
    AlphaTables out;
    out.samples_per_x = samples_per_x;
    out.alpha1.x = x_samples;
    out.alpha2.x = x_samples;
    out.alpha1.value.assign(x_samples.size(), 0.0);
    out.alpha2.value.assign(x_samples.size(), 0.0);

    std::mt19937_64 rng(seed);
    try {
        for (size_t i = 0; i < x_samples.size(); ++i) {
            const auto pts = latin_hypercube(samples_per_x, 4, rng);
            double a1 = 0.0, a2 = 0.0;
            for (const auto& u : pts) {
                const SystemCoefficients sc =
                    system_coefficients(cs, box_point(box, x_samples[i], u));
                for (int j : kIndexGroupRS) {
                    a1 = std::max({a1, std::fabs(sc.rho[j]), std::fabs(sc.sigma[j])});
                }
                for (int j : kIndexGroupPQ) {
                    a2 = std::max({a2, std::fabs(sc.rho[j]), std::fabs(sc.sigma[j])});
                }
            }
            out.alpha1.value[i] = a1;
            out.alpha2.value[i] = a2;
        }

        // alpha3: sup over the 5-dimensional box of |pi|, |kappa|.
        const int n5 = std::max(4 * samples_per_x, 64);
        out.samples_alpha3 = n5;
        const auto pts = latin_hypercube(n5, 5, rng);
        const double x_lo = x_samples.front(), x_hi = x_samples.back();
        double a3 = 0.0;
        for (const auto& u : pts) {
            JetPoint pt = box_point(box, lerp(x_lo, x_hi, u[4]), u);
            const SystemCoefficients sc = system_coefficients(cs, pt);
            a3 = std::max({a3, std::fabs(sc.pi[0]), std::fabs(sc.pi[1]), std::fabs(sc.kappa[0]),
                           std::fabs(sc.kappa[1])});
        }
        out.alpha3 = a3;
    } catch (const std::exception& e) {
        out.sampling_failed = true;
        out.failure = e.what();
    }
    return out;
}

namespace {

Check make_check(double lhs, double rhs, bool ok, std::string note = {}) {
    Check c;
    c.lhs = lhs;
    c.rhs = rhs;
    c.verdict = ok ? Verdict::pass : Verdict::fail;
    c.note = std::move(note);
    return c;
}

Check unknown_check(std::string note) {
    Check c;
    c.verdict = Verdict::unknown;
    c.note = std::move(note);
    return c;
}

}  // namespace

TransportSmallnessChecks check_transport_smallness(const InitialData& init,
                                                   const BoundsInput& bounds,
                                                   const AlphaTables& alphas) {
    TransportSmallnessChecks out;
    const auto axis = init.check_axis(bounds.delta, bounds.eps);
    out.U0 = std::max(axis.sup_abs_r0, axis.sup_abs_s0);

    if (alphas.sampling_failed) {
        out.smallness = unknown_check("alpha sampling failed: " + alphas.failure);
        out.envelope_margin = unknown_check("alpha sampling failed: " + alphas.failure);
        out.axis_separation = make_check(axis.delta_candidate, bounds.delta,
                             axis.delta_candidate >= bounds.delta && bounds.delta > 0.0);
        return out;
    }

    out.int_alpha1 = alphas.alpha1.integral() + bounds.tail_bound;
    EnvelopeTable weighted;
    weighted.x = alphas.alpha2.x;
    weighted.value.resize(weighted.x.size());
    for (size_t i = 0; i < weighted.x.size(); ++i) {
        weighted.value[i] =
            (1.0 + 2.0 * alphas.alpha3 * std::fabs(weighted.x[i])) * alphas.alpha2.value[i];
    }
    out.int_weighted_alpha2 = weighted.integral() + bounds.tail_bound;

    const double sum = out.U0 + 6.0 * out.int_alpha1 + 8.0 * out.int_weighted_alpha2;
    out.smallness = make_check(sum, 1.0, axis.unit_bounds && sum <= 1.0,
                         axis.unit_bounds ? "" : "|p0| or |q0| exceeds 1");
    out.axis_separation = make_check(axis.delta_candidate, bounds.delta,
                         axis.delta_candidate >= bounds.delta && bounds.delta > 0.0);
    const double lhs48 = 6.0 * out.int_alpha1 + 8.0 * out.int_weighted_alpha2;
    out.envelope_margin = make_check(lhs48, 0.5 * (bounds.delta - bounds.eps),
                         lhs48 <= 0.5 * (bounds.delta - bounds.eps));
    return out;
}

CoefficientConditions check_coefficient_conditions(const CoefficientSet& cs,
                                                    const InitialData& init,
                                                    const BoundsInput& bounds,
                                                    const SampleBox& box,
                                                    const std::vector<double>& x_samples,
                                                    std::uint64_t seed, int samples_per_x) {
    CoefficientConditions out;
    out.N1 = std::max(bounds.M1, 0.5 * bounds.M2 * (4.0 * bounds.M1 + 9.0 * bounds.M1 * bounds.M1));
    out.N2 = bounds.M1 * bounds.M2;

    // Points 1 and 2 are structural: expression trees are smooth by
    // construction wherever they evaluate.
    out.point[0] = make_check(0, 0, true, "coefficients are symbolic expressions (C2 formally)");
    out.point[1] = make_check(0, 0, true, "initial data symbolic/ODE-built (C3/C2 formally)");

    // Point 3: |a| <= M1, 1/Delta <= M2, |da/dw| <= M1 eta(x),
    // |da/dz| <= M1 eta~(x) for a = B, C, D, Delta.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    double worst_margin = 0.0;
    bool ok3 = true;
    std::string note3;
    try {
        for (double x : x_samples) {
            const double eta_x = bounds.eta_at(x);
            const double eta_t = bounds.eta_tilde_at(x);
            const auto pts = latin_hypercube(samples_per_x, 4, rng);
            for (const auto& u : pts) {
                const JetPoint pt = box_point(box, x, u);
                const CoefficientSet::Values v = cs.values(pt);
                const double mags[4] = {std::fabs(v.B), std::fabs(v.C), std::fabs(v.D), v.delta};
                for (double m : mags) {
                    ok3 = ok3 && m <= bounds.M1;
                    worst_margin = std::max(worst_margin, m - bounds.M1);
                }
                ok3 = ok3 && 1.0 / v.delta <= bounds.M2;
                const std::array<double, 5>* grads[4] = {&v.dB, &v.dC, &v.dD, &v.dDelta};
                for (const auto* g : grads) {
                    for (Var w : {Var::x, Var::y, Var::p, Var::q}) {
                        ok3 = ok3 && std::fabs((*g)[static_cast<int>(w)]) <= bounds.M1 * eta_x;
                    }
                    ok3 = ok3 && std::fabs((*g)[static_cast<int>(Var::z)]) <= bounds.M1 * eta_t;
                }
            }
        }
        out.point[2] = make_check(worst_margin, 0.0, ok3);
    } catch (const std::exception& e) {
        out.point[2] = unknown_check(std::string("sampling failed: ") + e.what());
    }

    // Point 4: (6 N1 + 8 N2) int eta <= (delta - eps)/2.
    try {
        EnvelopeTable eta_table;
        eta_table.x = x_samples;
        eta_table.value.resize(x_samples.size());
        for (size_t i = 0; i < x_samples.size(); ++i) eta_table.value[i] = bounds.eta_at(x_samples[i]);
        out.int_eta = eta_table.integral() + bounds.tail_bound;
        const double lhs = (6.0 * out.N1 + 8.0 * out.N2) * out.int_eta;
        out.point[3] = make_check(lhs, 0.5 * (bounds.delta - bounds.eps),
                                  lhs <= 0.5 * (bounds.delta - bounds.eps));
    } catch (const std::exception& e) {
        out.point[3] = unknown_check(std::string("eta evaluation failed: ") + e.what());
    }

    // Points 5 and 6 are axis conditions.
    const auto axis = init.check_axis(bounds.delta, bounds.eps);
    const double cap = 1.0 - 0.5 * (bounds.delta - bounds.eps);
    out.point[4] = make_check(std::max(axis.sup_abs_r0, axis.sup_abs_s0), cap, axis.amplitude_caps);
    out.point[5] = make_check(axis.delta_candidate, bounds.delta, axis.separation_at_delta);
    return out;
}

InitialDataConditions check_initial_data_conditions(const CoefficientSet& cs,
                                                     const InitialData& init,
                                                     const BoundsInput& bounds, const MLConstants& ml,
                                                     const SampleBox& box,
                                                     const std::vector<double>& x_samples,
                                                     std::uint64_t seed, int samples_per_x) {
    InitialDataConditions out;
    if (!(ml.L1 > 0.0) || !(ml.L2 > 0.0) || !(ml.L3 > 0.0) || ml.m1 < 0.0 || ml.m2 < 0.0) {
        throw ConfigError("need L1, L2, L3 > 0 and m1, m2 >= 0");
    }

    out.point[0] = make_check(0, 0, true, "initial data symbolic/ODE-built (C3/C2 formally)");

    const auto axis = init.check_axis(bounds.delta, bounds.eps);
    out.point[1] = make_check(std::max(axis.sup_abs_q0, axis.sup_abs_p0), 1.0,
                              axis.sup_abs_q0 <= 1.0 && axis.sup_abs_p0 <= 1.0);

    double sup_zyy = 0.0, sup_p0y = 0.0;
    for (double v : init.z0_yy_samples()) sup_zyy = std::max(sup_zyy, std::fabs(v));
    for (double v : init.p0_y_samples()) sup_p0y = std::max(sup_p0y, std::fabs(v));
    out.point[2] =
        make_check(std::max(sup_zyy, sup_p0y), ml.m1, sup_zyy <= ml.m1 && sup_p0y <= ml.m1);

    // Points 4, 6, 7 sample the coefficient box.
    std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
    double inf_B = std::numeric_limits<double>::infinity();
    double sup_B = -std::numeric_limits<double>::infinity();
    double sup_C = 0.0, sup_delta = 0.0;
    bool sampled_ok = true;
    std::string sample_err;
    try {
        for (double x : x_samples) {
            const auto pts = latin_hypercube(samples_per_x, 4, rng);
            for (const auto& u : pts) {
                const JetPoint pt = box_point(box, x, u);
                const CoefficientSet::Values v = cs.values(pt);
                inf_B = std::min(inf_B, v.B);
                sup_B = std::max(sup_B, v.B);
                sup_C = std::max(sup_C, std::fabs(v.C));
                sup_delta = std::max(sup_delta, v.delta);
            }
        }
    } catch (const std::exception& e) {
        sampled_ok = false;
        sample_err = e.what();
    }

    if (sampled_ok) {
        out.point[3] = make_check(inf_B, ml.L2, ml.L1 <= inf_B && sup_B <= ml.L2 && ml.L1 > 0.0,
                                  "checked 0 < L1 <= B <= L2 on samples");
        out.point[5] = make_check(sup_C, ml.m2, sup_C <= ml.m2);
        out.point[6] = make_check(sup_delta / (2.0 * ml.L1), ml.L3,
                                  sup_delta / (2.0 * ml.L1) <= ml.L3);
    } else {
        out.point[3] = unknown_check("sampling failed: " + sample_err);
        out.point[5] = unknown_check("sampling failed: " + sample_err);
        out.point[6] = unknown_check("sampling failed: " + sample_err);
    }

    // Point 5 guards the derived constants.
    const double gap = ml.L1 - ml.m1;
    out.point[4] = make_check(ml.m1, ml.L1, gap > 0.0);
    out.L4 = 1.0 / (2.0 * bounds.M2 * ml.L2);
    if (gap > 0.0) {
        out.m3 = ml.m1 / gap * (1.0 + ml.L3 + ml.m2 / (2.0 * ml.L1)) + ml.m2 / (2.0 * ml.L1);
        out.m4 = ml.m1 * (2.0 + ml.L3) / gap + ml.m2 / (2.0 * gap);
        out.derived_formed = true;
        out.point[7] = make_check(ml.L3 + out.m3, 1.0 - 0.5 * (bounds.delta - bounds.eps),
                                  ml.L3 + out.m3 <= 1.0 - 0.5 * (bounds.delta - bounds.eps));
        out.point[8] = make_check(out.L4 - out.m4, 0.5 * bounds.delta,
                                  out.L4 - out.m4 >= 0.5 * bounds.delta && bounds.delta > 0.0);
    } else {
        out.point[7] = unknown_check("m3 not formed: L1 - m1 <= 0");
        out.point[8] = unknown_check("m4 not formed: L1 - m1 <= 0");
    }
    return out;
}

Majorant derivative_majorant(const BoundsInput& bounds, double a, double V0,
                             const std::vector<double>& x_samples, bool a_is_estimate) {
    Majorant mj;
    mj.a = a;
    mj.V0 = V0;
    mj.a_is_estimate = a_is_estimate;
    const double eps = bounds.eps;
    if (!(eps > 0.0)) throw ConfigError("majorant needs eps > 0");

    auto psi = [&](double x) { return (2.0 / eps) * std::exp(2.0 * a * x / eps); };
    auto dV = [&](double x, double V) {
        const double ps = psi(x);
        return 5.0 * a * ps * ps * V + a * ps;
    };

    mj.psi.x = x_samples;
    mj.V.x = x_samples;
    mj.Phi.x = x_samples;
    mj.psi.value.resize(x_samples.size());
    mj.V.value.resize(x_samples.size());
    mj.Phi.value.resize(x_samples.size());

    double V = V0;
    for (size_t i = 0; i < x_samples.size(); ++i) {
        if (i > 0) {
            // RK4 on the linear ODE, 4 substeps per table interval.
            const double h = (x_samples[i] - x_samples[i - 1]) / 4.0;
            double x = x_samples[i - 1];
            for (int s = 0; s < 4; ++s) {
                const double k1 = dV(x, V);
                const double k2 = dV(x + 0.5 * h, V + 0.5 * h * k1);
                const double k3 = dV(x + 0.5 * h, V + 0.5 * h * k2);
                const double k4 = dV(x + h, V + h * k3);
                V += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                x += h;
            }
        }
        mj.psi.value[i] = psi(x_samples[i]);
        mj.V.value[i] = V;
        mj.Phi.value[i] = mj.psi.value[i] * V;
    }
    return mj;
}

double estimate_rhs_bound(const CoefficientSet& cs, const SampleBox& box,
                          const std::vector<double>& x_samples, std::uint64_t seed, int samples) {
    std::mt19937_64 rng(seed ^ 0xda3e39cb94b95bdbULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double x_lo = x_samples.front(), x_hi = x_samples.back();

    // State box: invariants share the p/q extent (they are slopes of the same
    // magnitude class).
    auto draw = [&]() {
        JetPoint pt{lerp(x_lo, x_hi, unit(rng)), lerp(box.y_min, box.y_max, unit(rng)),
                    lerp(box.z_min, box.z_max, unit(rng)), lerp(box.p_min, box.p_max, unit(rng)),
                    lerp(box.q_min, box.q_max, unit(rng))};
        RiemannState st{lerp(box.p_min, box.p_max, unit(rng)),
                        lerp(box.p_min, box.p_max, unit(rng)), pt.p, pt.q, pt.z};
        return std::pair<JetPoint, RiemannState>(pt, st);
    };

    auto all_f = [&](const JetPoint& pt, const RiemannState& st, double out[5]) {
        const RhsValues f = rhs(cs, pt, st);
        out[0] = f.fr;
        out[1] = f.fs;
        out[2] = f.fp;
        out[3] = f.fq;
        out[4] = f.fz;
    };

    double a = 0.0;
    for (int i = 0; i < samples; ++i) {
        auto [pt, st] = draw();
        double base[5];
        all_f(pt, st, base);
        for (double v : base) a = std::max(a, std::fabs(v));

        // Central differences in each of the seven arguments.
        const double step = 1e-5;
        for (int dir = 0; dir < 7; ++dir) {
            JetPoint ppt = pt, mpt = pt;
            RiemannState pst = st, mst = st;
            double h = step;
            switch (dir) {
                case 0: h *= std::max(1.0, std::fabs(st.r)); pst.r += h; mst.r -= h; break;
                case 1: h *= std::max(1.0, std::fabs(st.s)); pst.s += h; mst.s -= h; break;
                case 2: h *= std::max(1.0, std::fabs(st.p)); pst.p += h; mst.p -= h;
                        ppt.p += h; mpt.p -= h; break;
                case 3: h *= std::max(1.0, std::fabs(st.q)); pst.q += h; mst.q -= h;
                        ppt.q += h; mpt.q -= h; break;
                case 4: h *= std::max(1.0, std::fabs(st.z)); pst.z += h; mst.z -= h;
                        ppt.z += h; mpt.z -= h; break;
                case 5: h *= std::max(1.0, std::fabs(pt.x)); ppt.x += h; mpt.x -= h; break;
                case 6: h *= std::max(1.0, std::fabs(pt.y)); ppt.y += h; mpt.y -= h; break;
            }
            double fp[5], fm[5];
            all_f(ppt, pst, fp);
            all_f(mpt, mst, fm);
            for (int c = 0; c < 5; ++c) a = std::max(a, std::fabs(fp[c] - fm[c]) / (2.0 * h));
        }
    }
    return a;
}

SeparationIdentityResult check_separation_identity(const CoefficientSet& cs,
                                                   const SolveResult& result, int node_stride) {
    SeparationIdentityResult out;
    const FieldGrid& g = result.grid;
    const double hy = g.ygrid().h;

    auto bracket = [&](double tau, double y, const RiemannState& st) {
        const JetPoint jet{tau, y, st.z, st.p, st.q};
        const CoefficientSet::Values v = cs.values(jet);
        const double dt = v.delta;
        const double Bx = v.dB[0], Cy = v.dC[1], Bz = v.dB[2], Cz = v.dC[2];
        const double Bp = v.dB[3], Bq = v.dB[4], Cp = v.dC[3], Cq = v.dC[4];
        const double Tx = v.dDelta[0], Ty = v.dDelta[1], Tz = v.dDelta[2], Tp = v.dDelta[3],
                     Tq = v.dDelta[4];

        const double alpha2 = (Tx + Tz * st.p - v.D * Tp) / (2.0 * dt);
        const double beta1 = (2.0 * Bx + Cy + 2.0 * Bz * st.p + Cz * st.q + v.C * Bq -
                              v.B * Cq - 2.0 * v.D * Bp) /
                             (2.0 * dt);
        const double beta2 = (Ty + Tz * st.q - v.B * Tq) / (2.0 * dt);

        // u_{2y} by a centered difference of the s field on the frozen grid;
        // one-sided against the clamped extent.
        const double y_lo = g.ygrid().y_min, y_hi = g.ygrid().y_max();
        double s_y;
        if (y - hy < y_lo) {
            s_y = (g.interpolate(FieldId::s, tau, y + hy) - g.interpolate(FieldId::s, tau, y)) / hy;
        } else if (y + hy > y_hi) {
            s_y = (g.interpolate(FieldId::s, tau, y) - g.interpolate(FieldId::s, tau, y - hy)) / hy;
        } else {
            s_y = (g.interpolate(FieldId::s, tau, y + hy) -
                   g.interpolate(FieldId::s, tau, y - hy)) /
                  (2.0 * hy);
        }

        return 2.0 * alpha2 + (v.C * Tq - dt * Cq) / (2.0 * dt) +
               (st.r + st.s) * (beta2 + 0.5 * Bq + (v.C * Tp + dt * Cp) / (4.0 * dt)) +
               (st.s - st.r) * (beta1 + (v.C * Cp + dt * Tp) / (4.0 * dt)) -
               Bp * st.r * st.s + s_y;
    };

    for (int k = 1; k < g.levels(); k += node_stride) {
        for (int j = 0; j < g.ny(); j += node_stride) {
            const double x = g.x(k);
            const double y = g.ygrid().y(j);
            const CharPath path = trace(g, x, y, FieldId::s);
            const double integral = integrate_along(g, path, bracket, 0.0);
            const double gap0 = g.interpolate(FieldId::r, 0.0, path.foot()) -
                                g.interpolate(FieldId::s, 0.0, path.foot());
            const double predicted = gap0 * std::exp(integral);
            const double actual = g.at(FieldId::r, k, j) - g.at(FieldId::s, k, j);
            if (actual == 0.0) continue;
            out.max_rel_defect =
                std::max(out.max_rel_defect, std::fabs(actual - predicted) / std::fabs(actual));
            ++out.nodes_checked;
        }
    }
    return out;
}

Verdict ConditionReport::overall() const {
    bool any_unknown = false;
    auto fold = [&](const Check& c) {
        if (c.verdict == Verdict::fail) return true;
        if (c.verdict == Verdict::unknown) any_unknown = true;
        return false;
    };
    if (fold(transport.smallness) || fold(transport.axis_separation) || fold(transport.envelope_margin)) return Verdict::fail;
    if (coefficient_conditions) {
        for (const auto& c : coefficient_conditions->point) {
            if (fold(c)) return Verdict::fail;
        }
    }
    if (initial_data_conditions) {
        for (const auto& c : initial_data_conditions->point) {
            if (fold(c)) return Verdict::fail;
        }
    }
    if (alphas.sampling_failed) any_unknown = true;
    return any_unknown ? Verdict::unknown : Verdict::pass;
}

}  // namespace mahyp
