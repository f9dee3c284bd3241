#include "mahyp/contact.hpp"

#include <algorithm>
#include <cmath>

#include "mahyp/errors.hpp"

namespace mahyp {

namespace {

constexpr VarBinding kSurfaceVars[] = {{"u", Var::x}, {"v", Var::y}};

JetPoint param_point(double u, double v) { return JetPoint{u, v, 0.0, 0.0, 0.0}; }

}  // namespace

Expr parse_surface_expr(std::string_view source) { return parse_expr(source, kSurfaceVars); }

Expr IntegralSurface::component(int i) const {
    switch (i) {
        case 0: return x;
        case 1: return y;
        case 2: return z;
        case 3: return p;
        case 4: return q;
    }
    throw std::out_of_range("surface component");
}

double IntegralSurface::contact_defect(int n) const {
    const Expr xu = x.derivative(Var::x), xv = x.derivative(Var::y);
    const Expr yu = y.derivative(Var::x), yv = y.derivative(Var::y);
    const Expr zu = z.derivative(Var::x), zv = z.derivative(Var::y);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double u = u_min + (u_max - u_min) * (i + 0.5) / n;
            const double v = v_min + (v_max - v_min) * (j + 0.5) / n;
            const JetPoint pt = param_point(u, v);
            const double pv = p.eval(pt), qv = q.eval(pt);
            const double du = zu.eval(pt) - pv * xu.eval(pt) - qv * yu.eval(pt);
            const double dv = zv.eval(pt) - pv * xv.eval(pt) - qv * yv.eval(pt);
            worst = std::max({worst, std::fabs(du), std::fabs(dv)});
        }
    }
    return worst;
}

IntegralSurface IntegralSurface::graph(const Expr& f, double u_min, double u_max, double v_min,
                                       double v_max) {
    IntegralSurface s;
    s.x = Expr::variable(Var::x);
    s.y = Expr::variable(Var::y);
    s.z = f;
    s.p = f.derivative(Var::x);
    s.q = f.derivative(Var::y);
    s.u_min = u_min;
    s.u_max = u_max;
    s.v_min = v_min;
    s.v_max = v_max;
    return s;
}

IntegralSurface ampere_transform(const IntegralSurface& s) {
    IntegralSurface t;
    t.x = -s.p;
    t.y = s.y;
    t.z = s.z - s.p * s.x;
    t.p = s.x;
    t.q = s.q;
    t.u_min = s.u_min;
    t.u_max = s.u_max;
    t.v_min = s.v_min;
    t.v_max = s.v_max;
    return t;
}

int projection_rank(const IntegralSurface& s, double u, double v) {
    const JetPoint pt = param_point(u, v);
    const double a = s.x.derivative(Var::x).eval(pt);  // x_u
    const double b = s.x.derivative(Var::y).eval(pt);  // x_v
    const double c = s.y.derivative(Var::x).eval(pt);  // y_u
    const double d = s.y.derivative(Var::y).eval(pt);  // y_v

    // Singular values of [[a,b],[c,d]] in closed form.
    const double t = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
    const double s1 = std::sqrt(std::max(0.0, 0.5 * (t + disc)));
    const double s2 = std::sqrt(std::max(0.0, 0.5 * (t - disc)));

    const double threshold = 1e-9 * std::max(1.0, s1);
    int rank = 0;
    if (s1 > threshold) ++rank;
    if (s2 > threshold) ++rank;
    return rank;
}

double pullback_2form(const IntegralSurface& s, const std::array<std::array<double, 5>, 5>& c,
                      double u, double v) {
    const JetPoint pt = param_point(u, v);
    double du[5], dv[5];
    for (int i = 0; i < 5; ++i) {
        du[i] = s.component(i).derivative(Var::x).eval(pt);
        dv[i] = s.component(i).derivative(Var::y).eval(pt);
    }
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            if (c[i][j] != 0.0) acc += c[i][j] * (du[i] * dv[j] - dv[i] * du[j]);
        }
    }
    return acc;
}

CorrespondenceResult wave_ma_correspondence(const Expr& f, double u_min, double u_max,
                                            double v_min, double v_max, int n,
                                            double solution_tol) {
    CorrespondenceResult out{0.0, std::nullopt, false};
    const Expr fx = f.derivative(Var::x);
    const Expr fy = f.derivative(Var::y);
    const Expr fxx = fx.derivative(Var::x);
    const Expr fxy = fx.derivative(Var::y);
    const Expr fyy = fy.derivative(Var::y);

    auto sample = [&](int i, int j) {
        return param_point(u_min + (u_max - u_min) * (i + 0.5) / n,
                           v_min + (v_max - v_min) * (j + 0.5) / n);
    };

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const JetPoint pt = sample(i, j);
            const double hess = fxx.eval(pt) * fyy.eval(pt) - fxy.eval(pt) * fxy.eval(pt);
            out.ma_residual = std::max(out.ma_residual, std::fabs(hess + 1.0));
        }
    }
    if (out.ma_residual > solution_tol) {
        out.skipped = true;
        return out;
    }

    const IntegralSurface image =
        ampere_transform(IntegralSurface::graph(f, u_min, u_max, v_min, v_max));

    // dx^dq + dy^dp over dx^dy on the image surface: the wave residual of the
    // pushed function wherever the projection is regular.
    std::array<std::array<double, 5>, 5> wave_form{};
    wave_form[0][4] = 1.0;  // dx ^ dq
    wave_form[1][3] = 1.0;  // dy ^ dp
    std::array<std::array<double, 5>, 5> area_form{};
    area_form[0][1] = 1.0;  // dx ^ dy

    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const JetPoint pt = sample(i, j);
            const double u = pt.x, v = pt.y;
            const int rank = projection_rank(image, u, v);
            if (rank < 2) throw NonGraphicalImage(u, v, rank);
            const double num = pullback_2form(image, wave_form, u, v);
            const double den = pullback_2form(image, area_form, u, v);
            worst = std::max(worst, std::fabs(num / den));
        }
    }
    out.wave_residual = worst;
    return out;
}

}  // namespace mahyp
