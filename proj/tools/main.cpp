// Command-line front end: check / solve / transform / demo.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mahyp/errors.hpp"
#include "mahyp/runner.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

mahyp::RunConfig load(const CommonOpts& opts) {
    mahyp::RunConfig cfg = mahyp::load_config(opts.config_path);
    if (!opts.out_dir.empty()) cfg.output.dir = opts.out_dir;
    if (opts.threads > 0) cfg.threads = opts.threads;
    if (opts.seed_set) cfg.seed = opts.seed;
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "path to the JSON run configuration");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)");
    cmd->add_option("--seed", opts.seed, "sampling seed (overrides config)")
        ->each([&](const std::string&) { opts.seed_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic Monge-Ampere solver via Riemann invariants"};
    app.require_subcommand(1);

    CommonOpts check_opts, solve_opts, transform_opts;
    std::string demo_name, demo_out = "out";
    int demo_threads = 0;
    std::uint64_t demo_seed = 42;

    CLI::App* check = app.add_subcommand("check", "evaluate the sufficient-condition report");
    add_common(check, check_opts);

    CLI::App* solve = app.add_subcommand("solve", "run the characteristic Picard solver");
    add_common(solve, solve_opts);

    CLI::App* transform = app.add_subcommand("transform", "apply the Ampere contact transform");
    add_common(transform, transform_opts);

    CLI::App* demo = app.add_subcommand("demo", "run a bundled demonstration");
    demo->add_option("name", demo_name,
                     "one of: example7_1, example7_2, example7_3, manufactured, ampere")
        ->required();
    demo->add_option("--out", demo_out, "output directory");
    demo->add_option("--threads", demo_threads, "worker threads (0 = hardware)");
    demo->add_option("--seed", demo_seed, "sampling seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            const mahyp::RunConfig cfg = load(check_opts);
            return mahyp::run_check(cfg, cfg.output.dir);
        }
        if (solve->parsed()) {
            const mahyp::RunConfig cfg = load(solve_opts);
            return mahyp::run_solve(cfg, cfg.output.dir);
        }
        if (transform->parsed()) {
            const mahyp::RunConfig cfg = load(transform_opts);
            return mahyp::run_transform(cfg, cfg.output.dir);
        }
        if (demo->parsed()) {
            return mahyp::run_demo(demo_name, demo_out, demo_threads, demo_seed);
        }
    } catch (const mahyp::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mahyp::exit_config_error;
    } catch (const mahyp::NodeFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mahyp::exit_node_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mahyp::exit_config_error;
    }
    return 0;
}
