#include "mahyp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "mahyp/errors.hpp"

namespace mahyp {

int SolverConfig::x_levels() const {
    const int k = std::max(1, static_cast<int>(std::lround(x_max / hx)));
    return k + 1;
}

YGrid SolverConfig::make_ygrid() const {
    const int n = std::max(2, static_cast<int>(std::lround((y_max - y_min) / hy))) + 1;
    return YGrid{y_min, (y_max - y_min) / (n - 1), n};
}

FieldGrid initial_grid(const InitialData& init, const SolverConfig& cfg) {
    const YGrid yg = cfg.make_ygrid();
    const YGrid& ig = init.grid();
    if (std::fabs(ig.y_min - yg.y_min) > 1e-12 || std::fabs(ig.h - yg.h) > 1e-12 ||
        ig.n != yg.n) {
        throw ConfigError("initial data grid does not match the solver y-grid");
    }
    FieldGrid g(cfg.x_max, cfg.x_levels(), yg);
    for (int f = 0; f < kNumFields; ++f) {
        const auto src = init.samples(static_cast<FieldId>(f));
        for (int k = 0; k < g.levels(); ++k) {
            for (int j = 0; j < g.ny(); ++j) g.at(static_cast<FieldId>(f), k, j) = src[j];
        }
    }
    return g;
}

namespace {

/// Per-node update: two backward traces through the slope grid, right-hand
/// sides frozen on the rhs grid, axis values at the foot points.
struct NodeUpdate {
    double r, s, p, q, z;
    bool clamped;
};

// The five transports share two characteristic families.
static_assert(slope_source(FieldId::r) == FieldId::s && slope_source(FieldId::p) == FieldId::s);
static_assert(slope_source(FieldId::s) == FieldId::r && slope_source(FieldId::q) == FieldId::r &&
              slope_source(FieldId::z) == FieldId::r);

NodeUpdate update_node(const CoefficientSet& cs, const FieldGrid& slopes, const FieldGrid& rhs_grid,
                       const InitialData& init, double x, double y) {
    NodeUpdate out{};
    const CharPath path_s = trace(slopes, x, y, FieldId::s);  // carries r and p
    const CharPath path_r = trace(slopes, x, y, FieldId::r);  // carries s, q and z
    out.clamped = path_s.clamped() || path_r.clamped();

    auto quad = [&](const CharPath& path, auto&& f_per_node, int m, double* acc) {
        const auto nodes = path.nodes();
        if (nodes.size() < 2) return;
        double prev[3], cur[3];
        f_per_node(nodes[0], prev);
        for (size_t n = 1; n < nodes.size(); ++n) {
            f_per_node(nodes[n], cur);
            const double h = nodes[n].tau - nodes[n - 1].tau;
            for (int i = 0; i < m; ++i) acc[i] += 0.5 * h * (prev[i] + cur[i]);
            for (int i = 0; i < m; ++i) prev[i] = cur[i];
        }
    };

    // r and p ride the s-slope characteristic.
    double acc_rp[2] = {init.eval(FieldId::r, path_s.foot()), init.eval(FieldId::p, path_s.foot())};
    quad(path_s,
         [&](const PathNode& n, double* v) {
             const RiemannState st = rhs_grid.state_at(n.tau, n.y);
             const JetPoint jet{n.tau, n.y, st.z, st.p, st.q};
             const RhsValues f = rhs(cs, jet, st);
             v[0] = f.fr;
             v[1] = f.fp;
         },
         2, acc_rp);

    // s, q and z ride the r-slope characteristic.
    double acc_sqz[3] = {init.eval(FieldId::s, path_r.foot()), init.eval(FieldId::q, path_r.foot()),
                         init.eval(FieldId::z, path_r.foot())};
    quad(path_r,
         [&](const PathNode& n, double* v) {
             const RiemannState st = rhs_grid.state_at(n.tau, n.y);
             const JetPoint jet{n.tau, n.y, st.z, st.p, st.q};
             const RhsValues f = rhs(cs, jet, st);
             v[0] = f.fs;
             v[1] = f.fq;
             v[2] = f.fz;
         },
         3, acc_sqz);

    out.r = acc_rp[0];
    out.p = acc_rp[1];
    out.s = acc_sqz[0];
    out.q = acc_sqz[1];
    out.z = acc_sqz[2];
    if (!(std::isfinite(out.r) && std::isfinite(out.s) && std::isfinite(out.p) &&
          std::isfinite(out.q) && std::isfinite(out.z))) {
        throw NodeFailure(x, y, "non-finite field value");
    }
    return out;
}

struct SweepOutput {
    FieldGrid grid;
    std::vector<std::uint8_t> clamped;
};

SweepOutput sweep(const CoefficientSet& cs, const FieldGrid& slopes, const FieldGrid& rhs_grid,
                  const InitialData& init, const SolverConfig& cfg) {
    SweepOutput out{FieldGrid(rhs_grid.x_max(), rhs_grid.levels(), rhs_grid.ygrid()), {}};
    FieldGrid& next = out.grid;
    const int K = next.levels();
    const int ny = next.ny();
    out.clamped.assign(static_cast<size_t>(K) * ny, 0);

    // Level 0 is the axis data itself.
    for (int f = 0; f < kNumFields; ++f) {
        const auto src = init.samples(static_cast<FieldId>(f));
        for (int j = 0; j < ny; ++j) next.at(static_cast<FieldId>(f), 0, j) = src[j];
    }

    const long total = static_cast<long>(K - 1) * ny;  // nodes on levels 1..K-1
    int nthreads = cfg.threads > 0 ? cfg.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = static_cast<int>(std::min<long>(nthreads, std::max<long>(1, total)));

    std::mutex fail_mutex;
    std::optional<NodeFailure> failure;
    std::atomic<bool> abort{false};

    auto worker = [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            if (abort.load(std::memory_order_relaxed)) return;
            const int k = 1 + static_cast<int>(i / ny);
            const int j = static_cast<int>(i % ny);
            const double x = next.x(k);
            const double y = next.ygrid().y(j);
            try {
                const NodeUpdate u = update_node(cs, slopes, rhs_grid, init, x, y);
                next.at(FieldId::r, k, j) = u.r;
                next.at(FieldId::s, k, j) = u.s;
                next.at(FieldId::p, k, j) = u.p;
                next.at(FieldId::q, k, j) = u.q;
                next.at(FieldId::z, k, j) = u.z;
                out.clamped[static_cast<size_t>(k) * ny + j] = u.clamped ? 1 : 0;
            } catch (const NodeFailure& nf) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failure) failure = NodeFailure(x, y, nf.cause);
                abort.store(true, std::memory_order_relaxed);
                return;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failure) failure = NodeFailure(x, y, e.what());
                abort.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    if (nthreads == 1) {
        worker(0, total);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (total + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const long lo = t * chunk;
            const long hi = std::min(total, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    if (failure) throw *failure;
    return out;
}

FieldGrid run_iteration(const CoefficientSet& cs, const FieldGrid& prev, const InitialData& init,
                        const SolverConfig& cfg, std::vector<std::uint8_t>* clamp_out) {
    SweepOutput out = sweep(cs, prev, prev, init, cfg);
    if (cfg.slope_mode == SlopeMode::inner_fixed_point) {
        for (int i = 0; i < cfg.inner_iters; ++i) {
            out = sweep(cs, out.grid, prev, init, cfg);
        }
    }
    if (clamp_out) *clamp_out = std::move(out.clamped);
    return std::move(out.grid);
}

}  // namespace

FieldGrid iterate_once(const CoefficientSet& cs, const FieldGrid& prev, const InitialData& init,
                       const SolverConfig& cfg) {
    return run_iteration(cs, prev, init, cfg, nullptr);
}

namespace {

/// Sliding-window maximum of |z0| with halfwidth w samples.
std::vector<double> window_max_abs(std::span<const double> z0, int w) {
    const int n = static_cast<int>(z0.size());
    std::vector<double> out(n);
    std::deque<int> dq;
    int right = -1;
    for (int j = 0; j < n; ++j) {
        const int lo = std::max(0, j - w);
        const int hi = std::min(n - 1, j + w);
        while (right < hi) {
            ++right;
            const double v = std::fabs(z0[right]);
            while (!dq.empty() && std::fabs(z0[dq.back()]) <= v) dq.pop_back();
            dq.push_back(right);
        }
        while (!dq.empty() && dq.front() < lo) dq.pop_front();
        out[j] = std::fabs(z0[dq.front()]);
    }
    return out;
}

double fd_dy(std::span<const double> row, int j, double h) {
    const int n = static_cast<int>(row.size());
    if (n < 3) return n == 2 ? (row[1] - row[0]) / h : 0.0;
    if (j == 0) return (-3.0 * row[0] + 4.0 * row[1] - row[2]) / (2.0 * h);
    if (j == n - 1) return (3.0 * row[n - 1] - 4.0 * row[n - 2] + row[n - 3]) / (2.0 * h);
    return (row[j + 1] - row[j - 1]) / (2.0 * h);
}

}  // namespace

IterStats compute_iter_stats(const FieldGrid& g, const InitialData& init) {
    IterStats st;
    const int K = g.levels();
    const int ny = g.ny();
    st.inf_r = std::numeric_limits<double>::infinity();
    st.sup_s = -std::numeric_limits<double>::infinity();
    for (int f = 0; f < kNumFields; ++f) {
        st.max_abs[f].assign(K, 0.0);
        st.max_dy[f].assign(K, 0.0);
    }
    st.z_excess.assign(K, -std::numeric_limits<double>::infinity());

    const auto z0 = init.samples(FieldId::z);
    for (int k = 0; k < K; ++k) {
        const int w = static_cast<int>(std::floor(g.x(k) / g.ygrid().h + 1e-9));
        const std::vector<double> zmax = window_max_abs(z0, w);
        for (int f = 0; f < kNumFields; ++f) {
            const auto row = g.level(static_cast<FieldId>(f), k);
            double ma = 0.0, md = 0.0;
            for (int j = 0; j < ny; ++j) {
                ma = std::max(ma, std::fabs(row[j]));
                md = std::max(md, std::fabs(fd_dy(row, j, g.ygrid().h)));
            }
            st.max_abs[f][k] = ma;
            st.max_dy[f][k] = md;
        }
        const auto rrow = g.level(FieldId::r, k);
        const auto srow = g.level(FieldId::s, k);
        const auto zrow = g.level(FieldId::z, k);
        for (int j = 0; j < ny; ++j) {
            st.inf_r = std::min(st.inf_r, rrow[j]);
            st.sup_s = std::max(st.sup_s, srow[j]);
            st.z_excess[k] = std::max(st.z_excess[k], std::fabs(zrow[j]) - zmax[j]);
        }
    }
    return st;
}

namespace {

double fd_dxx(const FieldGrid& g, FieldId f, int k, int j) {
    const int K = g.levels();
    const double h2 = g.hx() * g.hx();
    auto v = [&](int kk) { return g.at(f, kk, j); };
    if (K < 4) return 0.0;
    if (k == 0) return (2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3)) / h2;
    if (k == K - 1) return (2.0 * v(K - 1) - 5.0 * v(K - 2) + 4.0 * v(K - 3) - v(K - 4)) / h2;
    return (v(k + 1) - 2.0 * v(k) + v(k - 1)) / h2;
}

double fd_dyy(const FieldGrid& g, FieldId f, int k, int j) {
    const int n = g.ny();
    const double h2 = g.ygrid().h * g.ygrid().h;
    auto v = [&](int jj) { return g.at(f, k, jj); };
    if (n < 4) return 0.0;
    if (j == 0) return (2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3)) / h2;
    if (j == n - 1) return (2.0 * v(n - 1) - 5.0 * v(n - 2) + 4.0 * v(n - 3) - v(n - 4)) / h2;
    return (v(j + 1) - 2.0 * v(j) + v(j - 1)) / h2;
}

double fd_dx_of(const std::vector<double>& node_major, const FieldGrid& g, int k, int j) {
    const int K = g.levels();
    const int ny = g.ny();
    const double h = g.hx();
    auto v = [&](int kk) { return node_major[static_cast<size_t>(kk) * ny + j]; };
    if (K < 3) return 0.0;
    if (k == 0) return (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
    if (k == K - 1) return (3.0 * v(K - 1) - 4.0 * v(K - 2) + v(K - 3)) / (2.0 * h);
    return (v(k + 1) - v(k - 1)) / (2.0 * h);
}

}  // namespace

SolveResult solve(const CoefficientSet& cs, const InitialData& init, const SolverConfig& cfg) {
    SolveResult res;
    FieldGrid prev = initial_grid(init, cfg);
    res.iter_stats.push_back(compute_iter_stats(prev, init));

    std::vector<std::uint8_t> clamp;
    bool converged = false;
    int n = 0;
    for (; n < cfg.max_iterations; ++n) {
        FieldGrid next = run_iteration(cs, prev, init, cfg, &clamp);
        const double rn = FieldGrid::sup_distance(next, prev);
        res.rn_history.push_back(rn);
        res.iter_stats.push_back(compute_iter_stats(next, init));
        prev = std::move(next);
        if (rn <= cfg.convergence_tol) {
            converged = true;
            ++n;
            break;
        }
    }
    res.iterations = n;
    res.converged = converged;
    res.grid = std::move(prev);
    res.clamped = std::move(clamp);
    if (res.clamped.empty()) res.clamped.assign(static_cast<size_t>(res.grid.levels()) * res.grid.ny(), 0);

    const FieldGrid& g = res.grid;
    const int K = g.levels();
    const int ny = g.ny();
    const size_t total = static_cast<size_t>(K) * ny;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    res.zxx.assign(total, nan);
    res.zxy.assign(total, nan);
    res.zyy.assign(total, nan);
    res.residual_alg.assign(total, nan);
    res.residual_fd.assign(total, nan);

    for (long i = 0; i < static_cast<long>(total); ++i) {
        const int k = static_cast<int>(i / ny);
        const int j = static_cast<int>(i % ny);
        const JetPoint jet{g.x(k), g.ygrid().y(j), g.at(FieldId::z, k, j), g.at(FieldId::p, k, j),
                           g.at(FieldId::q, k, j)};
        const RiemannState st{g.at(FieldId::r, k, j), g.at(FieldId::s, k, j), jet.p, jet.q, jet.z};
        try {
            const SecondDerivatives d =
                reconstruct_second_derivatives(cs, jet, st, cfg.separation_floor);
            res.zxx[i] = d.zxx;
            res.zxy[i] = d.zxy;
            res.zyy[i] = d.zyy;
            const CoefficientSet::Values v = cs.values(jet);
            res.residual_alg[i] = v.A + v.B * d.zxx + v.C * d.zxy + v.D * d.zyy +
                                  (d.zxx * d.zyy - d.zxy * d.zxy);
        } catch (const SeparationError&) {
            ++res.flags.separation_failures;
        }
        if (res.clamped[i]) ++res.flags.clamp_count;
    }

    // Independent residual route: centered (one-sided at edges) differences
    // of the z grid alone.
    std::vector<double> zy(total);
    for (long i = 0; i < static_cast<long>(total); ++i) {
        const int k = static_cast<int>(i / ny);
        const int j = static_cast<int>(i % ny);
        zy[i] = fd_dy(g.level(FieldId::z, k), j, g.ygrid().h);
    }
    for (long i = 0; i < static_cast<long>(total); ++i) {
        const int k = static_cast<int>(i / ny);
        const int j = static_cast<int>(i % ny);
        const double zxx = fd_dxx(g, FieldId::z, k, j);
        const double zyy = fd_dyy(g, FieldId::z, k, j);
        const double zxy = fd_dx_of(zy, g, k, j);
        const JetPoint jet{g.x(k), g.ygrid().y(j), g.at(FieldId::z, k, j), g.at(FieldId::p, k, j),
                           g.at(FieldId::q, k, j)};
        try {
            const CoefficientSet::Values v = cs.values(jet);
            res.residual_fd[i] =
                v.A + v.B * zxx + v.C * zxy + v.D * zyy + (zxx * zyy - zxy * zxy);
        } catch (const HyperbolicityError&) {
        }
    }

    // Determinacy trapezoid of slope bound 1 (reporting only).
    for (int k = 0; k < K; ++k) {
        const double lo = g.ygrid().y_min + g.x(k);
        const double hi = g.ygrid().y_max() - g.x(k);
        for (int j = 0; j < ny; ++j) {
            const double y = g.ygrid().y(j);
            if (y < lo - 1e-12 || y > hi + 1e-12) ++res.flags.outside_trapezoid;
        }
    }

    if (!converged) throw NotConverged(std::move(res), cfg.convergence_tol);
    return res;
}

}  // namespace mahyp
