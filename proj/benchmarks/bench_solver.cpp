#include <benchmark/benchmark.h>

#include "mahyp/solver.hpp"

using namespace mahyp;

namespace {

constexpr VarBinding kYOnly[] = {{"y", Var::y}};
Expr in_y(const char* src) { return parse_expr(src, kYOnly); }

CoefficientSet constant_cs() {
    return CoefficientSet(parse_expr("1/16"), parse_expr("1/2"), parse_expr("0"), parse_expr("0"));
}

CoefficientSet variable_cs() {
    return CoefficientSet(parse_expr("1/16 + 0.01*sin(x*y)"),
                          parse_expr("1/2 + 0.01*tanh(z)"), parse_expr("0.01*sin(p)"),
                          parse_expr("0.01*cos(q)"));
}

void bench_rhs_constant(benchmark::State& state) {
    const CoefficientSet cs = constant_cs();
    const JetPoint pt{0.3, -0.2, 1.0, 0.9, 0.1};
    const RiemannState st{0.4, -0.4, pt.p, pt.q, pt.z};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhs(cs, pt, st));
    }
}
BENCHMARK(bench_rhs_constant);

void bench_rhs_variable(benchmark::State& state) {
    const CoefficientSet cs = variable_cs();
    const JetPoint pt{0.3, -0.2, 1.0, 0.9, 0.1};
    const RiemannState st{0.4, -0.4, pt.p, pt.q, pt.z};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhs(cs, pt, st));
    }
}
BENCHMARK(bench_rhs_variable);

FieldGrid demo_grid(int levels, int ny) {
    FieldGrid g(1.0, levels, YGrid{-1.0, 2.0 / (ny - 1), ny});
    for (int k = 0; k < levels; ++k) {
        for (int j = 0; j < ny; ++j) {
            const double y = g.ygrid().y(j);
            g.at(FieldId::r, k, j) = 0.5;
            g.at(FieldId::s, k, j) = -0.5 - 0.1 * y;
            g.at(FieldId::p, k, j) = y;
            g.at(FieldId::q, k, j) = 0.2;
            g.at(FieldId::z, k, j) = 1.0 + y * y;
        }
    }
    return g;
}

void bench_trace(benchmark::State& state) {
    const int levels = static_cast<int>(state.range(0));
    const FieldGrid g = demo_grid(levels, 2 * levels + 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace(g, 1.0, 0.1, FieldId::s));
    }
    state.SetComplexityN(levels);
}
BENCHMARK(bench_trace)->Arg(32)->Arg(64)->Arg(128)->Complexity(benchmark::oN);

void bench_iterate_once(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SolverConfig cfg;
    cfg.x_max = 1.0;
    cfg.y_min = -1.0;
    cfg.y_max = 1.0;
    cfg.hx = 1.0 / n;
    cfg.hy = 1.0 / n;
    cfg.threads = static_cast<int>(state.range(1));
    const CoefficientSet cs = constant_cs();
    const InitialData init = InitialData::from_zp(cs, in_y("1"), in_y("1"), cfg.make_ygrid());
    const FieldGrid g0 = initial_grid(init, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(iterate_once(cs, g0, init, cfg));
    }
}
BENCHMARK(bench_iterate_once)->Args({32, 1})->Args({64, 1})->Args({64, 4})->Args({128, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
