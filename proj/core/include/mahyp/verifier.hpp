#ifndef MAHYP_VERIFIER_HPP
#define MAHYP_VERIFIER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mahyp/coeffs.hpp"
#include "mahyp/init_data.hpp"
#include "mahyp/solver.hpp"

namespace mahyp {

enum class Verdict : int { pass, fail, unknown };

const char* verdict_name(Verdict v);

/// One checked inequality: lhs <op> rhs with its computed sides.
struct Check {
    Verdict verdict = Verdict::unknown;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string note;
};

/// Bounds supplied by the user (or estimated from grids) that parameterize
/// the sufficient conditions: coefficient bounds M1, M2, separation pair
/// (delta, eps) with 0 < eps <= delta and (delta-eps)/2 < 1, and the
/// nonnegative envelope eta(x).
struct BoundsInput {
    double M1 = 1.0;
    double M2 = 1.0;
    double delta = 0.0;
    double eps = 0.0;
    Expr eta = Expr::constant(0.0);   // in the x slot
    bool user_supplied = true;        // false: grid-estimated delta/eps
    double tail_bound = 0.0;          // user-declared tail of improper integrals

    void validate() const;            // throws ConfigError on pair violations
    double eta_at(double x) const;
    double eta_tilde_at(double x) const;  // eta/(1 + 2 M1 |x|)
};

/// Rectangular jet-space sampling box for sup estimation.
struct SampleBox {
    double y_min = -1.0, y_max = 1.0;
    double z_min = -1.0, z_max = 1.0;
    double p_min = -1.0, p_max = 1.0;
    double q_min = -1.0, q_max = 1.0;
};

/// x-abscissas and matching table values.
struct EnvelopeTable {
    std::vector<double> x;
    std::vector<double> value;

    double integral() const;          // composite trapezoid over the range
};

struct AlphaTables {
    EnvelopeTable alpha1;             // sup over J_rs of |rho_j|, |sigma_j|
    EnvelopeTable alpha2;             // sup over J_pq
    double alpha3 = 0.0;              // sup over pi, kappa
    long samples_per_x = 0;
    long samples_alpha3 = 0;
    bool sampling_failed = false;     // fail-closed marker
    std::string failure;
};

/// Deterministic Latin-hypercube sup estimation of the coefficient tables
/// over a jet box; explicitly a lower estimate of the true sup.
AlphaTables estimate_alphas(const CoefficientSet& cs, const SampleBox& box,
                            const std::vector<double>& x_samples, std::uint64_t seed,
                            int samples_per_x = 256);

struct TransportSmallnessChecks {
    Check smallness;        // |p0|,|q0| <= 1 and U0 + 6I1 + 8I2 <= 1
    Check axis_separation;  // inf r0 - sup s0 >= delta > 0
    Check envelope_margin;  // 6I1 + 8I2 <= (delta - eps)/2
    double U0 = 0.0;
    double int_alpha1 = 0.0;
    double int_weighted_alpha2 = 0.0;
};

TransportSmallnessChecks check_transport_smallness(const InitialData& init,
                                                   const BoundsInput& bounds,
                                                   const AlphaTables& alphas);

struct CoefficientConditions {
    std::array<Check, 6> point;       // coefficient conditions, points 1..6
    double N1 = 0.0, N2 = 0.0;
    double int_eta = 0.0;
};

CoefficientConditions check_coefficient_conditions(const CoefficientSet& cs,
                                                    const InitialData& init,
                                                    const BoundsInput& bounds,
                                                    const SampleBox& box,
                                                    const std::vector<double>& x_samples,
                                                    std::uint64_t seed, int samples_per_x = 256);

struct MLConstants {
    double m1 = 0.0, m2 = 0.0;
    double L1 = 0.0, L2 = 0.0, L3 = 0.0;
};

struct InitialDataConditions {
    std::array<Check, 9> point;       // initial-data conditions, points 1..9
    double m3 = 0.0, m4 = 0.0, L4 = 0.0;
    bool derived_formed = false;      // false when the point-5 guard failed
};

InitialDataConditions check_initial_data_conditions(const CoefficientSet& cs,
                                                     const InitialData& init,
                                                     const BoundsInput& bounds, const MLConstants& ml,
                                                     const SampleBox& box,
                                                     const std::vector<double>& x_samples,
                                                     std::uint64_t seed, int samples_per_x = 256);

struct Majorant {
    EnvelopeTable psi;                // (2/eps) exp(2 a x / eps)
    EnvelopeTable V;                  // dV/dx = 5 a psi^2 V + a psi, V(0) = V0
    EnvelopeTable Phi;                // psi * V
    double a = 0.0;
    double V0 = 0.0;
    bool a_is_estimate = true;
};

/// Closed-form psi, RK4 for the linear V equation, Phi = psi V.
Majorant derivative_majorant(const BoundsInput& bounds, double a, double V0,
                             const std::vector<double>& x_samples, bool a_is_estimate = true);

/// Grid estimate of the constant a: sup of |f_w| and |df_w/dmu| over jet/state
/// samples in the box (mu runs over r,s,p,q,z,x,y; derivatives by central
/// differences). Reported as an estimate.
double estimate_rhs_bound(const CoefficientSet& cs, const SampleBox& box,
                          const std::vector<double>& x_samples, std::uint64_t seed,
                          int samples = 512);

struct SeparationIdentityResult {
    double max_rel_defect = 0.0;
    long nodes_checked = 0;
};

/// A-posteriori check of the exponential separation representation: traces
/// the s-characteristic from sampled nodes, integrates the coefficient
/// bracket with u_{2y} finite-differenced, and compares against r - s.
SeparationIdentityResult check_separation_identity(const CoefficientSet& cs,
                                                   const SolveResult& result,
                                                   int node_stride = 4);

/// Aggregated report; serialized to JSON by the run layer.
struct ConditionReport {
    AlphaTables alphas;
    TransportSmallnessChecks transport;
    std::optional<CoefficientConditions> coefficient_conditions;
    std::optional<InitialDataConditions> initial_data_conditions;
    std::optional<Majorant> majorant;
    InitialData::AxisCheck axis;
    double delta_on_axis = 0.0;       // Delta at the first axis sample
    std::uint64_t seed = 0;

    Verdict overall() const;
};

}  // namespace mahyp

#endif
