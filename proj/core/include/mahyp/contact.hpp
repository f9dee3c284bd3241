#ifndef MAHYP_CONTACT_HPP
#define MAHYP_CONTACT_HPP

#include <array>
#include <optional>

#include "mahyp/expr.hpp"

namespace mahyp {

/// 2-parameter surface (u,v) -> (x,y,z,p,q) in first-order jet space. The
/// parameter letters u,v live in the x,y expression slots. An integral
/// surface annihilates the contact form: z_u - p x_u - q y_u = 0 and the
/// same with v.
struct IntegralSurface {
    Expr x, y, z, p, q;       // expressions in (u, v)
    double u_min = -1.0, u_max = 1.0;
    double v_min = -1.0, v_max = 1.0;

    Expr component(int i) const;

    /// max |contact form| over an n-by-n parameter sample, via symbolic
    /// partials.
    double contact_defect(int n = 16) const;

    /// Graph surface (u, v, f, f_x, f_y) of a function f(x,y).
    static IntegralSurface graph(const Expr& f, double u_min, double u_max, double v_min,
                                 double v_max);
};

/// Parse a surface component in the letters u, v.
Expr parse_surface_expr(std::string_view source);

/// The Ampere contact transformation
///   x' = -p,  y' = y,  z' = z - p x,  p' = x,  q' = q
/// applied componentwise. Pure substitution; preserves the contact form.
IntegralSurface ampere_transform(const IntegralSurface& s);

/// Numerical rank (0, 1 or 2) of the Jacobian of (x(u,v), y(u,v)); singular
/// values against a scale-relative threshold of 1e-9.
int projection_rank(const IntegralSurface& s, double u, double v);

struct CorrespondenceResult {
    double ma_residual;                    // sup |hess f + 1| over samples
    std::optional<double> wave_residual;   // sup of the pushed wave residual
    bool skipped = false;                  // f was not a Monge-Ampere solution
};

/// Evaluates hess f + 1 on f; when f solves the equation, transforms the
/// graph surface and evaluates the wave residual of the pushed function
/// through the pullback identity
///   (f_yy - f_xx) dx^dy = dx^dq + dy^dp
/// restricted to the image surface. Throws NonGraphicalImage when the image
/// projection has rank < 2 at a sample.
CorrespondenceResult wave_ma_correspondence(const Expr& f, double u_min, double u_max,
                                            double v_min, double v_max, int n = 10,
                                            double solution_tol = 1e-8);

/// Pullback coefficient of a 2-form sum_{i<j} c_ij dX_i ^ dX_j restricted to
/// the surface, i.e. sum c_ij (X_i_u X_j_v - X_i_v X_j_u) at (u,v).
/// Components indexed x=0, y=1, z=2, p=3, q=4.
double pullback_2form(const IntegralSurface& s, const std::array<std::array<double, 5>, 5>& c,
                      double u, double v);

}  // namespace mahyp

#endif
