#ifndef MAHYP_RUNNER_HPP
#define MAHYP_RUNNER_HPP

#include <string>

#include "mahyp/runconfig.hpp"

namespace mahyp {

/// Exit codes shared by the library runners and the CLI.
enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 1,
    exit_check_failed = 2,
    exit_check_unknown = 3,
    exit_not_converged = 4,
    exit_node_failure = 5,
};

struct BuiltProblem {
    CoefficientSet cs;
    InitialData init;
    SolverConfig solver;
};

/// Instantiate coefficient set, initial data and solver settings from a
/// parsed config (for the x >= 0 half-plane).
BuiltProblem build_problem(const RunConfig& cfg);

/// check: writes <out_dir>/report.json with the full condition report.
int run_check(const RunConfig& cfg, const std::string& out_dir);

/// solve: writes solution.csv, convergence.csv, meta.json. Domains with
/// x_min < 0 run the reflected problem for the left half and stitch rows.
int run_solve(const RunConfig& cfg, const std::string& out_dir);

/// transform: writes surface_in.csv, surface_out.csv, ranks.csv.
int run_transform(const RunConfig& cfg, const std::string& out_dir);

/// Bundled demonstration runs; name is one of
/// example7_1 | example7_2 | example7_3 | manufactured | ampere.
int run_demo(const std::string& name, const std::string& out_dir, int threads = 0,
             std::uint64_t seed = 42);

/// The embedded demo config text for a name (also shipped under configs/).
const char* demo_config_text(const std::string& name);

}  // namespace mahyp

#endif
