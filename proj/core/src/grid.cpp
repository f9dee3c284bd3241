#include "mahyp/grid.hpp"

#include <algorithm>
#include <cmath>

#include "mahyp/errors.hpp"

namespace mahyp {

FieldGrid::FieldGrid(double x_max, int levels, YGrid ygrid)
    : x_max_(x_max), hx_(levels > 1 ? x_max / (levels - 1) : 0.0), levels_(levels),
      ygrid_(ygrid) {
    for (auto& d : data_) d.assign(static_cast<size_t>(levels_) * ygrid_.n, 0.0);
}

namespace {

// Fractional index, clamped; sets *clamped when outside [0, n-1].
double clamp_frac(double t, int n, bool* clamped) {
    if (t < 0.0) {
        if (clamped) *clamped = true;
        return 0.0;
    }
    if (t > n - 1) {
        if (clamped) *clamped = true;
        return static_cast<double>(n - 1);
    }
    return t;
}

}  // namespace

double FieldGrid::interpolate(FieldId f, double x, double y, bool* clamped) const {
    const double x_eps = 1e-12 * std::max(1.0, x_max_);
    if (x < -x_eps || x > x_max_ + x_eps) throw OutOfDomain(x, x_max_);
    double tx = hx_ > 0.0 ? x / hx_ : 0.0;
    tx = std::clamp(tx, 0.0, static_cast<double>(levels_ - 1));
    int k = std::min(static_cast<int>(tx), levels_ - 2 >= 0 ? levels_ - 2 : 0);
    const double wx = levels_ > 1 ? tx - k : 0.0;

    double ty = clamp_frac((y - ygrid_.y_min) / ygrid_.h, ygrid_.n, clamped);
    int j = std::min(static_cast<int>(ty), ygrid_.n - 2 >= 0 ? ygrid_.n - 2 : 0);
    const double wy = ygrid_.n > 1 ? ty - j : 0.0;

    const auto& d = data_[static_cast<int>(f)];
    const size_t base0 = idx(k, j);
    const double lo = d[base0] * (1.0 - wy) + d[base0 + 1] * wy;
    if (levels_ == 1 || wx == 0.0) return lo;
    const size_t base1 = idx(k + 1, j);
    const double hi = d[base1] * (1.0 - wy) + d[base1 + 1] * wy;
    return lo * (1.0 - wx) + hi * wx;
}

RiemannState FieldGrid::state_at(double x, double y, bool* clamped) const {
    RiemannState st;
    st.r = interpolate(FieldId::r, x, y, clamped);
    st.s = interpolate(FieldId::s, x, y, clamped);
    st.p = interpolate(FieldId::p, x, y, clamped);
    st.q = interpolate(FieldId::q, x, y, clamped);
    st.z = interpolate(FieldId::z, x, y, clamped);
    return st;
}

double FieldGrid::sup_distance(const FieldGrid& a, const FieldGrid& b) {
    double m = 0.0;
    for (int f = 0; f < kNumFields; ++f) {
        const auto& da = a.data_[f];
        const auto& db = b.data_[f];
        for (size_t i = 0; i < da.size(); ++i) m = std::max(m, std::fabs(da[i] - db[i]));
    }
    return m;
}

namespace {
constexpr int kSubsteps = 4;  // RK4 substeps per level interval
}

CharPath trace(const FieldGrid& grid, double x, double y, FieldId slope_field) {
    bool clamped = false;
    auto slope = [&](double tau, double g) {
        return grid.interpolate(slope_field, tau, g, &clamped);
    };

    // tau checkpoints: x, every level coordinate strictly below x, then 0.
    std::vector<double> checkpoints;
    checkpoints.push_back(x);
    for (int k = grid.levels() - 1; k >= 1; --k) {
        const double xk = grid.x(k);
        if (xk < x - 1e-14 * std::max(1.0, x)) checkpoints.push_back(xk);
    }
    if (checkpoints.back() > 0.0) checkpoints.push_back(0.0);

    std::vector<PathNode> nodes;
    nodes.reserve(kSubsteps * checkpoints.size() + 1);
    nodes.push_back({x, y});
    double g = y;
    for (size_t i = 0; i + 1 < checkpoints.size(); ++i) {
        const double h = (checkpoints[i + 1] - checkpoints[i]) / kSubsteps;  // negative
        double tau = checkpoints[i];
        for (int step = 0; step < kSubsteps; ++step) {
            const double k1 = slope(tau, g);
            const double k2 = slope(tau + 0.5 * h, g + 0.5 * h * k1);
            const double k3 = slope(tau + 0.5 * h, g + 0.5 * h * k2);
            const double k4 = slope(tau + h, g + h * k3);
            g += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            tau = (step + 1 == kSubsteps) ? checkpoints[i + 1] : tau + h;
            nodes.push_back({tau, g});
        }
    }
    std::reverse(nodes.begin(), nodes.end());
    return CharPath(slope_field, std::move(nodes), clamped);
}

double integrate_along(const FieldGrid& grid, const CharPath& path, const PathIntegrand& f,
                       double init) {
    double out;
    PathIntegrand fs[1] = {f};
    double inits[1] = {init};
    integrate_along(grid, path, fs, inits, {&out, 1});
    return out;
}

void integrate_along(const FieldGrid& grid, const CharPath& path,
                     std::span<const PathIntegrand> fs, std::span<const double> inits,
                     std::span<double> outs) {
    const auto nodes = path.nodes();
    const size_t m = fs.size();
    std::vector<double> prev(m), cur(m);

    auto eval_all = [&](const PathNode& n, std::vector<double>& vals) {
        const RiemannState st = grid.state_at(n.tau, n.y);
        for (size_t i = 0; i < m; ++i) {
            try {
                vals[i] = fs[i](n.tau, n.y, st);
            } catch (const std::exception& e) {
                throw NodeFailure(n.tau, n.y, e.what());
            }
        }
    };

    for (size_t i = 0; i < m; ++i) outs[i] = inits[i];
    if (nodes.size() < 2) return;

    eval_all(nodes[0], prev);
    for (size_t n = 1; n < nodes.size(); ++n) {
        eval_all(nodes[n], cur);
        const double h = nodes[n].tau - nodes[n - 1].tau;
        for (size_t i = 0; i < m; ++i) outs[i] += 0.5 * h * (prev[i] + cur[i]);
        std::swap(prev, cur);
    }
}

}  // namespace mahyp
