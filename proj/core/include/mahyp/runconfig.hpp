#ifndef MAHYP_RUNCONFIG_HPP
#define MAHYP_RUNCONFIG_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "mahyp/init_data.hpp"
#include "mahyp/solver.hpp"
#include "mahyp/verifier.hpp"

namespace mahyp {

/// Initial data, exactly one variant: (z0, p0) expressions in y, or (r0, s0)
/// expressions in y plus the integration anchor.
struct InitialSection {
    std::optional<std::string> z0, p0;
    std::optional<std::string> r0, s0;
    InitAnchor anchor;
    AnchorAt anchor_at = AnchorAt::y_min;

    bool is_zp() const { return z0.has_value(); }
};

struct ProblemSection {
    std::string A = "0", B = "0", C = "0", D = "0";
    InitialSection initial;
};

struct DomainSection {
    double x_min = 0.0;   // negative lower bound solves the reflected half
    double x_max = 1.0;
    double y_min = -1.0;
    double y_max = 1.0;
};

struct BoundsSection {
    std::optional<double> M1, M2, delta, eps;
    std::string eta = "0";
    std::string mode = "user-supplied";   // or "grid-estimated"
    double tail_bound = 0.0;
    SampleBox box;
    std::array<double, 2> x_range = {-1.0, 1.0};
    int x_samples = 65;
    int samples = 256;
    std::optional<MLConstants> ml;
};

struct SurfaceSection {
    std::string x = "u", y = "v", z = "0", p = "0", q = "0";
    std::array<double, 2> u_range = {-1.0, 1.0};
    std::array<double, 2> v_range = {-1.0, 1.0};
    int samples = 16;
};

struct OutputSection {
    std::string dir = "out";
};

struct RunConfig {
    ProblemSection problem;
    DomainSection domain;
    double hx = 1.0 / 128.0;
    double hy = 1.0 / 128.0;
    SolverConfig solver;                 // grid/domain fields filled from above
    std::optional<BoundsSection> bounds;
    std::optional<SurfaceSection> surface;
    std::optional<std::string> function; // f(x,y) for the wave correspondence
    OutputSection output;
    std::uint64_t seed = 42;
    int threads = 0;
};

/// Parse/serialize the JSON config document. Unknown keys are errors.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& cfg);

/// Structural equality for the round-trip contract.
bool config_equivalent(const RunConfig& a, const RunConfig& b);

}  // namespace mahyp

#endif
