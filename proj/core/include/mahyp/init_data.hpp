#ifndef MAHYP_INIT_DATA_HPP
#define MAHYP_INIT_DATA_HPP

#include <optional>
#include <span>
#include <vector>

#include "mahyp/coeffs.hpp"
#include "mahyp/expr.hpp"

namespace mahyp {

/// Uniform y-grid y_j = y_min + j h, j = 0..n-1.
struct YGrid {
    double y_min = -1.0;
    double h = 1.0 / 128.0;
    int n = 257;

    double y(int j) const { return y_min + h * j; }
    double y_max() const { return y(n - 1); }
};

enum class InitProvenance { from_zp, from_rs };
enum class AnchorAt { y_min, zero };

/// Anchor values (z, p, q) fixing the integration constants of the axis ODE
/// system when initial data arrives as (r0, s0).
struct InitAnchor {
    double z = 0.0;
    double p = 0.0;
    double q = 0.0;
};

/// The five initial functions (r0, s0, p0, q0, z0) on the axis x = 0,
/// together with the derived quantities p0_y and z0_yy. Immutable once
/// built; evaluation beyond grid samples is symbolic where data came from
/// expressions and interpolated where it came from ODE integration.
class InitialData {
public:
    /// Build from z0(y), p0(y): invariants by the algebraic axis formulas
    /// with symbolic z0_y, z0_yy, p0_y; q0 = z0_y.
    /// Throws FreeAxisError where |z0'' + B| < separation_floor and
    /// HyperbolicityError where the axis discriminant fails.
    static InitialData from_zp(const CoefficientSet& cs, const Expr& z0, const Expr& p0,
                               const YGrid& grid, double separation_floor = 1e-10);

    /// Build from r0(y), s0(y): integrates
    ///   p' = -(Delta/2)(r0+s0)/(r0-s0) + C/2,  q' = Delta/(r0-s0) - B,  z' = q
    /// with classical RK4 from the anchor point; coefficient arguments ride
    /// the running jet (0, y, z, p, q). Throws SeparationError when r0-s0
    /// crosses the floor.
    static InitialData from_rs(const CoefficientSet& cs, const Expr& r0, const Expr& s0,
                               const InitAnchor& anchor, const YGrid& grid,
                               double separation_floor = 1e-10,
                               AnchorAt anchor_at = AnchorAt::y_min);

    const YGrid& grid() const { return grid_; }
    InitProvenance provenance() const { return provenance_; }

    /// Exact for symbolic fields, piecewise linear (clamped at the ends) for
    /// integrated ones.
    double eval(FieldId f, double y) const;

    std::span<const double> samples(FieldId f) const { return fields_[static_cast<int>(f)]; }

    /// Symbolic form in y when available (all five fields for from_zp, the
    /// invariants for from_rs).
    const std::optional<Expr>& symbolic(FieldId f) const { return sym_[static_cast<int>(f)]; }
    std::span<const double> p0_y_samples() const { return p0_y_; }
    std::span<const double> z0_yy_samples() const { return z0_yy_; }

    /// d/dy of each of the five initial fields at the grid samples (symbolic
    /// where possible, one-step finite differences otherwise).
    std::vector<double> dy_samples(FieldId f) const;

    /// max over the five fields of sup_j |d/dy field| -- the V0 of the
    /// derivative majorant.
    double v0() const;

    struct AxisCheck {
        double delta_candidate;   // inf r0 - sup s0
        double sup_abs_r0, sup_abs_s0, sup_abs_p0, sup_abs_q0;
        double delta_used, eps_used;
        bool unit_bounds;      // |p0| <= 1 and |q0| <= 1
        bool separation;                 // inf r0 - sup s0 >= delta_used > 0
        bool amplitude_caps;          // |r0|,|s0| <= 1-(delta-eps)/2 and |q0|,|p0| <= 1
        bool separation_at_delta;          // inf r0 - sup s0 >= delta_used > 0
        int samples;
    };

    /// Grid-sampled sup/inf verdicts for the axis-only conditions. When no
    /// (delta, eps) pair is supplied the candidate separation stands in for
    /// delta and eps = delta.
    AxisCheck check_axis(std::optional<double> delta = std::nullopt,
                         std::optional<double> eps = std::nullopt) const;

private:
    InitialData() = default;

    YGrid grid_;
    InitProvenance provenance_ = InitProvenance::from_zp;
    std::vector<double> fields_[kNumFields];  // r, s, p, q, z samples
    std::vector<double> p0_y_;
    std::vector<double> z0_yy_;
    // Symbolic forms (in the y slot). All five available for from_zp; only
    // r0, s0 for from_rs.
    std::optional<Expr> sym_[kNumFields];
};

}  // namespace mahyp

#endif
