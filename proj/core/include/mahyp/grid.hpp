#ifndef MAHYP_GRID_HPP
#define MAHYP_GRID_HPP

#include <functional>
#include <span>
#include <vector>

#include "mahyp/coeffs.hpp"
#include "mahyp/init_data.hpp"

namespace mahyp {

/// The five fields sampled on x-levels 0 = x_0 < x_1 < ... < x_K (uniform
/// step) over a fixed rectangular y-range. One immutable snapshot per
/// Picard iterate; concurrent reads are safe.
class FieldGrid {
public:
    FieldGrid() = default;
    FieldGrid(double x_max, int levels, YGrid ygrid);

    int levels() const { return levels_; }              // K+1 including x=0
    double x(int k) const { return hx_ * k; }
    double x_max() const { return x_max_; }
    double hx() const { return hx_; }
    const YGrid& ygrid() const { return ygrid_; }
    int ny() const { return ygrid_.n; }

    double at(FieldId f, int k, int j) const { return data_[static_cast<int>(f)][idx(k, j)]; }
    double& at(FieldId f, int k, int j) { return data_[static_cast<int>(f)][idx(k, j)]; }
    std::span<const double> level(FieldId f, int k) const {
        return {data_[static_cast<int>(f)].data() + idx(k, 0), static_cast<size_t>(ygrid_.n)};
    }

    /// Bilinear: piecewise linear in y at the two bracketing levels, linear
    /// in x between them. y outside the sampled extent clamps to the
    /// boundary sample and sets *clamped. x outside [0, x_max] throws
    /// OutOfDomain.
    double interpolate(FieldId f, double x, double y, bool* clamped = nullptr) const;

    RiemannState state_at(double x, double y, bool* clamped = nullptr) const;

    /// sup over all nodes and fields of |a - b|; grids must be congruent.
    static double sup_distance(const FieldGrid& a, const FieldGrid& b);

private:
    size_t idx(int k, int j) const { return static_cast<size_t>(k) * ygrid_.n + j; }

    double x_max_ = 0.0;
    double hx_ = 0.0;
    int levels_ = 0;
    YGrid ygrid_;
    std::vector<double> data_[kNumFields];
};

struct PathNode {
    double tau;
    double y;
};

/// A characteristic traced backward from a query point to the axis tau = 0
/// through a frozen grid. Nodes are stored with tau ascending; the last node
/// reproduces the query point.
class CharPath {
public:
    CharPath(FieldId slope_source, std::vector<PathNode> nodes, bool clamped)
        : slope_source_(slope_source), nodes_(std::move(nodes)), clamped_(clamped) {}

    FieldId slope_field() const { return slope_source_; }
    std::span<const PathNode> nodes() const { return nodes_; }
    double foot() const { return nodes_.front().y; }   // y at tau = 0
    bool clamped() const { return clamped_; }

private:
    FieldId slope_source_;
    std::vector<PathNode> nodes_;
    bool clamped_;
};

/// Integrate dg/dtau = (slope field)(tau, g) backward from (x, y) to tau=0
/// with classical RK4. Steps align with the grid's x-levels and are split
/// four-fold, so no Runge-Kutta stage straddles an interpolation kink.
/// Leaving the y-extent clamps and flags; tracing never aborts.
CharPath trace(const FieldGrid& grid, double x, double y, FieldId slope_field);

/// Integrand: (tau, y, frozen five-field state) -> value.
using PathIntegrand = std::function<double(double, double, const RiemannState&)>;

/// init + composite trapezoidal quadrature of the integrand over the path
/// nodes. Errors from the integrand are rethrown annotated with tau.
double integrate_along(const FieldGrid& grid, const CharPath& path, const PathIntegrand& f,
                       double init);

/// Batch form: one state interpolation per node feeds every integrand.
void integrate_along(const FieldGrid& grid, const CharPath& path,
                     std::span<const PathIntegrand> fs, std::span<const double> inits,
                     std::span<double> outs);

}  // namespace mahyp

#endif
