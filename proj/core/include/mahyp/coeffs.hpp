#ifndef MAHYP_COEFFS_HPP
#define MAHYP_COEFFS_HPP

#include <array>
#include <optional>
#include <utility>

#include "mahyp/expr.hpp"
#include "mahyp/jet.hpp"

namespace mahyp {

/// State of the five-field system at one point: the two Riemann invariants
/// r, s plus the first-order data p, q, z they travel with.
struct RiemannState {
    double r = 0.0;
    double s = 0.0;
    double p = 0.0;
    double q = 0.0;
    double z = 0.0;
};

/// The polynomial coefficient tables of the invariant system: rho/sigma feed
/// f_r/f_s, pi feeds f_p, kappa feeds f_q. Indices 0,1,2,7,8,13 multiply
/// monomials free of p,q; 3..6,9..12 multiply monomials containing them.
struct SystemCoefficients {
    std::array<double, 14> rho{};
    std::array<double, 14> sigma{};
    std::array<double, 2> pi{};
    std::array<double, 2> kappa{};
};

inline constexpr std::array<int, 6> kIndexGroupRS = {0, 1, 2, 7, 8, 13};
inline constexpr std::array<int, 8> kIndexGroupPQ = {3, 4, 5, 6, 9, 10, 11, 12};

struct RhsValues {
    double fr = 0.0;
    double fs = 0.0;
    double fp = 0.0;
    double fq = 0.0;
    double fz = 0.0;
};

struct SecondDerivatives {
    double zxx = 0.0;
    double zxy = 0.0;
    double zyy = 0.0;
};

/// The four coefficient functions A,B,C,D of
///   A + B z_xx + C z_xy + D z_yy + (z_xx z_yy - z_xy^2) = 0
/// together with their exact symbolic partials. Partials of the positive
/// discriminant root Delta = sqrt(C^2 - 4BD + 4A) come from implicit
/// differentiation of Delta^2, so they stay finite wherever Delta > 0.
class CoefficientSet {
public:
    CoefficientSet(Expr A, Expr B, Expr C, Expr D, double hyperbolicity_floor = 1e-12);

    /// Every coefficient-level quantity the system needs at one jet point.
    struct Values {
        double A, B, C, D;
        double delta;               // +sqrt(C^2 - 4BD + 4A)
        std::array<double, 5> dA;   // partials indexed by Var
        std::array<double, 5> dB;
        std::array<double, 5> dC;
        std::array<double, 5> dD;
        std::array<double, 5> dDelta;
    };

    /// Throws HyperbolicityError when C^2-4BD+4A <= hyperbolicity_floor,
    /// DomainError from coefficient evaluation.
    Values values(const JetPoint& pt) const;

    double delta(const JetPoint& pt) const;

    const Expr& A() const { return a_; }
    const Expr& B() const { return b_; }
    const Expr& C() const { return c_; }
    const Expr& D() const { return d_; }
    const Expr& dB(Var v) const { return db_[static_cast<int>(v)]; }
    const Expr& dC(Var v) const { return dc_[static_cast<int>(v)]; }
    const Expr& dD(Var v) const { return dd_[static_cast<int>(v)]; }
    const Expr& dA(Var v) const { return da_[static_cast<int>(v)]; }

    double hyperbolicity_floor() const { return floor_; }

    /// All four coefficients are jet-independent, so Values never changes.
    bool constant_coefficients() const { return cached_.has_value(); }

private:
    Values compute_values(const JetPoint& pt) const;

    Expr a_, b_, c_, d_;
    std::array<Expr, 5> da_, db_, dc_, dd_;
    double floor_;
    std::optional<Values> cached_;
};

/// Full coefficient tables of the invariant system at one jet point.
SystemCoefficients system_coefficients(const CoefficientSet& cs, const JetPoint& pt);
SystemCoefficients system_coefficients(const CoefficientSet::Values& v);

/// The five transport right-hand sides (f_r, f_s, f_p, f_q, f_z). The mirror
/// identity f_s(sigma; r,s) = f_r(sigma; s,r) holds by construction.
RhsValues rhs(const CoefficientSet& cs, const JetPoint& pt, const RiemannState& st);
RhsValues rhs(const SystemCoefficients& sc, const RiemannState& st);

/// Independent re-derivation of (f_r, f_s) through the E/I coefficient form
/// built from the alpha/beta combinations. Shares no code with rhs(); used
/// as a cross-form oracle.
std::pair<double, double> rhs_EI_oracle(const CoefficientSet& cs, const JetPoint& pt,
                                        const RiemannState& st);

/// Map the invariants back to the Hessian:
///   z_yy = Delta/(r-s) - B,
///   z_xy = (Delta/2)(r+s)/(s-r) + C/2,
///   z_xx = Delta r s/(r-s) - D.
/// Throws SeparationError when |r-s| < separation_floor.
SecondDerivatives reconstruct_second_derivatives(const CoefficientSet& cs, const JetPoint& pt,
                                                 const RiemannState& st,
                                                 double separation_floor = 1e-10);

/// Forward map: invariants from a Hessian (the slopes of the two
/// characteristic directions). Inverse of reconstruct_second_derivatives.
std::pair<double, double> riemann_invariants(const CoefficientSet& cs, const JetPoint& pt,
                                             double zxy, double zyy);

/// Characteristic-slope source per transported field:
/// xi(r)=s, xi(s)=r, xi(p)=s, xi(q)=r, xi(z)=r.
enum class FieldId : int { r = 0, s = 1, p = 2, q = 3, z = 4 };

constexpr FieldId slope_source(FieldId f) {
    switch (f) {
        case FieldId::r: return FieldId::s;
        case FieldId::s: return FieldId::r;
        case FieldId::p: return FieldId::s;
        case FieldId::q: return FieldId::r;
        case FieldId::z: return FieldId::r;
    }
    return FieldId::r;
}

inline constexpr int kNumFields = 5;

}  // namespace mahyp

#endif
