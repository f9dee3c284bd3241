#include "mahyp/coeffs.hpp"

#include <cassert>
#include <cmath>

#include "mahyp/errors.hpp"

namespace mahyp {

CoefficientSet::CoefficientSet(Expr A, Expr B, Expr C, Expr D, double hyperbolicity_floor)
    : a_(std::move(A)), b_(std::move(B)), c_(std::move(C)), d_(std::move(D)),
      floor_(hyperbolicity_floor) {
    for (int i = 0; i < kNumVars; ++i) {
        Var v = static_cast<Var>(i);
        da_[i] = a_.derivative(v);
        db_[i] = b_.derivative(v);
        dc_[i] = c_.derivative(v);
        dd_[i] = d_.derivative(v);
    }
    if (a_.is_constant() && b_.is_constant() && c_.is_constant() && d_.is_constant()) {
        try {
            cached_ = compute_values(JetPoint{});
        } catch (const std::exception&) {
            // leave uncached; the error belongs to the evaluation call
        }
    }
}

CoefficientSet::Values CoefficientSet::compute_values(const JetPoint& pt) const {
    Values v{};
    v.A = a_.eval(pt);
    v.B = b_.eval(pt);
    v.C = c_.eval(pt);
    v.D = d_.eval(pt);
    const double disc = v.C * v.C - 4.0 * v.B * v.D + 4.0 * v.A;
    if (disc <= floor_) throw HyperbolicityError(disc, floor_);
    v.delta = std::sqrt(disc);
    for (int i = 0; i < kNumVars; ++i) {
        v.dA[i] = da_[i].eval(pt);
        v.dB[i] = db_[i].eval(pt);
        v.dC[i] = dc_[i].eval(pt);
        v.dD[i] = dd_[i].eval(pt);
        // Implicit differentiation of Delta^2 = C^2 - 4BD + 4A.
        v.dDelta[i] =
            (v.C * v.dC[i] - 2.0 * v.dB[i] * v.D - 2.0 * v.B * v.dD[i] + 2.0 * v.dA[i]) / v.delta;
    }
    return v;
}

CoefficientSet::Values CoefficientSet::values(const JetPoint& pt) const {
    if (cached_) return *cached_;
    return compute_values(pt);
}

double CoefficientSet::delta(const JetPoint& pt) const {
    if (cached_) return cached_->delta;
    const double A = a_.eval(pt), B = b_.eval(pt), C = c_.eval(pt), D = d_.eval(pt);
    const double disc = C * C - 4.0 * B * D + 4.0 * A;
    if (disc <= floor_) throw HyperbolicityError(disc, floor_);
    return std::sqrt(disc);
}

namespace {
constexpr int ix = 0, iy = 1, iz = 2, ip = 3, iq = 4;
}

SystemCoefficients system_coefficients(const CoefficientSet::Values& v) {
    const double dt = v.delta;
    const double inv2 = 1.0 / (2.0 * dt);
    const double inv1 = 1.0 / dt;

    const double Bx = v.dB[ix], Bz = v.dB[iz], Bp = v.dB[ip], Bq = v.dB[iq];
    const double Cx = v.dC[ix], Cy = v.dC[iy], Cz = v.dC[iz], Cp = v.dC[ip], Cq = v.dC[iq];
    const double Dy = v.dD[iy], Dz = v.dD[iz], Dp = v.dD[ip], Dq = v.dD[iq];
    const double Tx = v.dDelta[ix], Ty = v.dDelta[iy], Tz = v.dDelta[iz], Tp = v.dDelta[ip],
                 Tq = v.dDelta[iq];

    SystemCoefficients sc;

    sc.rho[0] = Dq;
    sc.sigma[0] = Dq;
    sc.rho[3] = inv2 * (Cz + Tz);
    sc.sigma[3] = -inv2 * (Cz - Tz);
    sc.rho[4] = inv1 * Dz;
    sc.sigma[4] = -inv1 * Dz;
    sc.rho[5] = -inv2 * (Cz + Tz);
    sc.sigma[5] = inv2 * (Cz - Tz);
    sc.rho[6] = -inv1 * Dz;
    sc.sigma[6] = inv1 * Dz;
    sc.rho[9] = -inv1 * Bz;
    sc.sigma[9] = inv1 * Bz;
    sc.rho[10] = -inv2 * (Cz - Tz);
    sc.sigma[10] = inv2 * (Cz + Tz);
    sc.rho[11] = inv1 * Bz;
    sc.sigma[11] = -inv1 * Bz;
    sc.rho[12] = inv2 * (Cz - Tz);
    sc.sigma[12] = -inv2 * (Cz + Tz);
    sc.rho[13] = -Bp;
    sc.sigma[13] = -Bp;

    sc.rho[1] = inv2 * (Tx + Cx + 2.0 * Dy + v.C * Dp - v.D * Tp - v.D * Cp - 2.0 * v.B * Dq +
                        0.5 * v.C * Cq - 1.5 * dt * Cq + 0.5 * v.C * Tq + 0.5 * dt * Tq - dt * Dp);
    sc.rho[2] = -inv2 * (Tx + Cx + 2.0 * Dy + v.C * Dp - v.D * Tp - v.D * Cp - 2.0 * v.B * Dq +
                         0.5 * v.C * Cq + 0.5 * dt * Cq + 0.5 * v.C * Tq + 0.5 * dt * Tq + dt * Dp);
    sc.rho[7] = -inv2 * (-Ty + Cy + 2.0 * Bx + v.C * Bq + v.B * Tq - v.B * Cq - 2.0 * v.D * Bp +
                         0.5 * v.C * Cp - 0.5 * dt * Cp - 0.5 * v.C * Tp + 0.5 * dt * Tp - dt * Bq);
    sc.rho[8] = inv2 * (-Ty + Cy + 2.0 * Bx + v.C * Bq + v.B * Tq - v.B * Cq - 2.0 * v.D * Bp +
                        0.5 * v.C * Cp + 1.5 * dt * Cp - 0.5 * v.C * Tp + 0.5 * dt * Tp + dt * Bq);

    sc.sigma[1] = -inv2 * (-Tx + Cx + 2.0 * Dy + v.C * Dp + v.D * Tp - v.D * Cp - 2.0 * v.B * Dq +
                           0.5 * v.C * Cq + 1.5 * dt * Cq - 0.5 * v.C * Tq + 0.5 * dt * Tq +
                           dt * Dp);
    sc.sigma[2] = inv2 * (-Tx + Cx + 2.0 * Dy + v.C * Dp + v.D * Tp - v.D * Cp - 2.0 * v.B * Dq +
                          0.5 * v.C * Cq - 0.5 * dt * Cq - 0.5 * v.C * Tq + 0.5 * dt * Tq -
                          dt * Dp);
    sc.sigma[7] = inv2 * (Ty + Cy + 2.0 * Bx + v.C * Bq - v.B * Tq - v.B * Cq - 2.0 * v.D * Bp +
                          0.5 * v.C * Cp + 0.5 * dt * Cp + 0.5 * v.C * Tp + 0.5 * dt * Tp +
                          dt * Bq);
    sc.sigma[8] = -inv2 * (Ty + Cy + 2.0 * Bx + v.C * Bq - v.B * Tq - v.B * Cq - 2.0 * v.D * Bp +
                           0.5 * v.C * Cp - 1.5 * dt * Cp + 0.5 * v.C * Tp + 0.5 * dt * Tp -
                           dt * Bq);

    sc.pi[0] = -v.D;
    sc.pi[1] = 0.5 * (v.C + dt);
    sc.kappa[0] = 0.5 * (v.C + dt);
    sc.kappa[1] = -v.B;

    return sc;
}

SystemCoefficients system_coefficients(const CoefficientSet& cs, const JetPoint& pt) {
    return system_coefficients(cs.values(pt));
}

namespace {

/// f_r shape: a0 + a1 u + a2 w + a3 p u + a4 q u + a5 p w + a6 q w + a7 u^2
///          + a8 u w + a9 p u^2 + a10 q u^2 + a11 p u w + a12 q u w + a13 u^2 w,
/// evaluated with (u,w) = (r,s) for f_r and (s,r) for f_s.
double invariant_polynomial(const std::array<double, 14>& a, double u, double w, double p,
                            double q) {
    return a[0] + a[1] * u + a[2] * w + a[3] * p * u + a[4] * q * u + a[5] * p * w +
           a[6] * q * w + a[7] * u * u + a[8] * u * w + a[9] * p * u * u + a[10] * q * u * u +
           a[11] * p * u * w + a[12] * q * u * w + a[13] * u * u * w;
}

}  // namespace

RhsValues rhs(const SystemCoefficients& sc, const RiemannState& st) {
    RhsValues f;
    f.fr = invariant_polynomial(sc.rho, st.r, st.s, st.p, st.q);
    f.fs = invariant_polynomial(sc.sigma, st.s, st.r, st.p, st.q);
    f.fp = sc.pi[0] + sc.pi[1] * st.s;
    f.fq = sc.kappa[0] + sc.kappa[1] * st.r;
    f.fz = st.p + st.q * st.r;
    return f;
}

RhsValues rhs(const CoefficientSet& cs, const JetPoint& pt, const RiemannState& st) {
    assert(pt.z == st.z && pt.p == st.p && pt.q == st.q);
    return rhs(system_coefficients(cs, pt), st);
}

std::pair<double, double> rhs_EI_oracle(const CoefficientSet& cs, const JetPoint& pt,
                                        const RiemannState& st) {
    const CoefficientSet::Values v = cs.values(pt);
    const double dt = v.delta;
    const double B = v.B, C = v.C, D = v.D;
    const double p = pt.p, q = pt.q;

    const double Bx = v.dB[0], Bz = v.dB[2], Bp = v.dB[3], Bq = v.dB[4];
    const double Cx = v.dC[0], Cy = v.dC[1], Cz = v.dC[2], Cp = v.dC[3], Cq = v.dC[4];
    const double Dy = v.dD[1], Dz = v.dD[2], Dp = v.dD[3], Dq = v.dD[4];
    const double Tx = v.dDelta[0], Ty = v.dDelta[1], Tz = v.dDelta[2], Tp = v.dDelta[3],
                 Tq = v.dDelta[4];

    const double a1 = (2.0 * Dy + Cx + 2.0 * Dz * q + Cz * p + C * Dp - D * Cp - 2.0 * B * Dq) /
                      (2.0 * dt);
    const double a2 = (Tx + Tz * p - D * Tp) / (2.0 * dt);
    const double b1 = (2.0 * Bx + Cy + 2.0 * Bz * p + Cz * q + C * Bq - B * Cq - 2.0 * D * Bp) /
                      (2.0 * dt);
    const double b2 = (Ty + Tz * q - B * Tq) / (2.0 * dt);

    const double q4 = 1.0 / (4.0 * dt);

    const double E0 = Dq;
    const double E5 = -Bp;
    const double E1 = a1 + a2 + q4 * (C * Cq - 3.0 * dt * Cq + C * Tq + dt * Tq - 2.0 * dt * Dp);
    const double E2 = -a1 - a2 + q4 * (-C * Cq - dt * Cq - C * Tq - dt * Tq - 2.0 * dt * Dp);
    const double E3 = -b1 + b2 + q4 * (-C * Cp + dt * Cp + C * Tp - dt * Tp + 2.0 * dt * Bq);
    const double E4 = b1 - b2 + q4 * (C * Cp + 3.0 * dt * Cp - C * Tp + dt * Tp + 2.0 * dt * Bq);

    const double I0 = Dq;
    const double I5 = -Bp;
    const double I1 = a1 - a2 + q4 * (C * Cq - dt * Cq - C * Tq + dt * Tq - 2.0 * dt * Dp);
    const double I2 = -a1 + a2 + q4 * (-C * Cq - 3.0 * dt * Cq + C * Tq - dt * Tq - 2.0 * dt * Dp);
    const double I3 = b1 + b2 + q4 * (C * Cp + dt * Cp + C * Tp + dt * Tp + 2.0 * dt * Bq);
    const double I4 = -b1 - b2 + q4 * (-C * Cp + 3.0 * dt * Cp - C * Tp - dt * Tp + 2.0 * dt * Bq);

    const double u1 = st.r, u2 = st.s;
    const double e_poly =
        E0 + E1 * u1 + E2 * u2 + E3 * u1 * u1 + E4 * u1 * u2 + E5 * u1 * u1 * u2;
    const double i_poly =
        I0 + I1 * u1 + I2 * u2 + I3 * u2 * u2 + I4 * u1 * u2 + I5 * u1 * u2 * u2;
    return {e_poly, i_poly};
}

SecondDerivatives reconstruct_second_derivatives(const CoefficientSet& cs, const JetPoint& pt,
                                                 const RiemannState& st,
                                                 double separation_floor) {
    const double gap = st.r - st.s;
    if (std::fabs(gap) < separation_floor) throw SeparationError(std::fabs(gap), separation_floor);
    const CoefficientSet::Values v = cs.values(pt);
    SecondDerivatives d;
    d.zyy = v.delta / gap - v.B;
    d.zxy = 0.5 * v.delta * (st.r + st.s) / (st.s - st.r) + 0.5 * v.C;
    d.zxx = v.delta * st.r * st.s / gap - v.D;
    return d;
}

std::pair<double, double> riemann_invariants(const CoefficientSet& cs, const JetPoint& pt,
                                             double zxy, double zyy) {
    const CoefficientSet::Values v = cs.values(pt);
    const double den = 2.0 * (zyy + v.B);
    if (den == 0.0) throw DomainError("z_yy + B vanished in invariant map");
    const double u1 = (v.C + v.delta - 2.0 * zxy) / den;
    const double u2 = (v.C - v.delta - 2.0 * zxy) / den;
    return {u1, u2};
}

}  // namespace mahyp
