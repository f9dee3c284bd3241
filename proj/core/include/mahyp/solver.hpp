#ifndef MAHYP_SOLVER_HPP
#define MAHYP_SOLVER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mahyp/grid.hpp"

namespace mahyp {

enum class SlopeMode { lagged, inner_fixed_point };

struct SolverConfig {
    double x_max = 1.0;
    double y_min = -1.0;
    double y_max = 1.0;
    double hx = 1.0 / 128.0;
    double hy = 1.0 / 128.0;
    int max_iterations = 50;
    double convergence_tol = 1e-10;   // sup-norm on successive difference
    SlopeMode slope_mode = SlopeMode::lagged;
    int inner_iters = 2;              // extra slope passes in inner_fixed_point mode
    double hyperbolicity_floor = 1e-12;
    double separation_floor = 1e-10;
    int threads = 0;                  // 0 = hardware concurrency

    int x_levels() const;             // K+1
    YGrid make_ygrid() const;
};

/// Per-iterate, per-level summaries consumed by the a-priori bound sweeps.
struct IterStats {
    std::vector<double> max_abs[kNumFields];  // per level: max_j |field|
    std::vector<double> max_dy[kNumFields];   // per level: max_j |d field/dy| (FD)
    std::vector<double> z_excess;             // per level: max_j (|z| - window max |z0|)
    double inf_r = 0.0;
    double sup_s = 0.0;
};

struct SolveFlags {
    long clamp_count = 0;              // nodes whose final-sweep traces clamped
    long separation_failures = 0;      // nodes where reconstruction hit the floor
    long outside_trapezoid = 0;        // nodes outside the slope-1 determinacy trapezoid
};

struct SolveResult {
    FieldGrid grid;
    std::vector<double> rn_history;    // R_1, R_2, ... sup-norm successive differences
    bool converged = false;
    int iterations = 0;                // sweeps actually run
    std::vector<IterStats> iter_stats; // [0] = initial grid, [n] = iterate n

    // Node-major (level-major) arrays aligned with grid indexing.
    std::vector<double> zxx, zxy, zyy; // reconstructed; NaN where separation failed
    std::vector<double> residual_alg;  // PDE residual from reconstructed derivatives
    std::vector<double> residual_fd;   // PDE residual from centered differences of z
    std::vector<std::uint8_t> clamped; // per node, final sweep

    SolveFlags flags;
};

/// Not-converged outcome; carries the full partial result (history, last
/// iterate, reconstruction) so callers can still inspect and emit it.
class NotConverged : public std::runtime_error {
public:
    NotConverged(SolveResult res, double tol)
        : std::runtime_error("iteration did not reach tol " + std::to_string(tol) + " after " +
                             std::to_string(res.rn_history.size()) + " sweeps"),
          result(std::move(res)) {}
    SolveResult result;
};

/// Constant-in-x extension of the axis data: every level carries a copy of
/// the initial samples.
FieldGrid initial_grid(const InitialData& init, const SolverConfig& cfg);

/// One Picard sweep: each field is re-solved along the characteristic of its
/// slope source through `prev`, integrating the right-hand side frozen on
/// `prev`, from the axis value at the foot point. slope_mode=lagged traces
/// through prev; inner_fixed_point re-traces against the emerging grid.
FieldGrid iterate_once(const CoefficientSet& cs, const FieldGrid& prev, const InitialData& init,
                       const SolverConfig& cfg);

/// Full successive-approximation run with convergence monitoring,
/// reconstruction and both PDE residual routes. Throws NotConverged when
/// max_iterations runs out, NodeFailure on per-node evaluation failures.
SolveResult solve(const CoefficientSet& cs, const InitialData& init, const SolverConfig& cfg);

/// Summaries used by bound sweeps; exposed for tests.
IterStats compute_iter_stats(const FieldGrid& g, const InitialData& init);

}  // namespace mahyp

#endif
