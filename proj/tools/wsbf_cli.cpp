// SPDX-License-Identifier: Apache-2.0
//
// wsbf: run or validate beamformer comparison experiments.
//
//   wsbf run <config> [--out DIR] [--runs N] [--seed N]
//   wsbf validate <config>
//
// Exit codes: 0 success, 1 configuration error, 2 solver failures above
// experiment.failure_budget.

#include "wsbf/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

void print_summary(const wsbf::ExperimentReport& report) {
    const auto& cfg = report.config;
    std::printf("runs: %d (seeds %llu..%llu)\n", cfg.monte_carlo_runs,
                static_cast<unsigned long long>(cfg.scenario.rng_seed),
                static_cast<unsigned long long>(cfg.scenario.rng_seed + cfg.monte_carlo_runs - 1));
    std::printf("%-6s %-20s %12s %10s %8s\n", "method", "metric", "median", "iqr", "fails");
    for (const auto& row : report.metrics) {
        std::printf("%-6s %-20s %12.3f %10.3f %8d\n", std::string(wsbf::to_string(row.method)).c_str(),
                    row.metric.c_str(), row.median, row.iqr, row.failures);
    }
    std::printf("solver failures: %d (%.1f%%), output: %s\n", report.solver_failures,
                100.0 * report.failure_fraction(), cfg.output_dir.string().c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive beamformer comparison for uniform linear arrays"};
    app.require_subcommand(1);

    std::string run_path;
    std::string out_dir;
    int runs = 0;
    long long seed = -1;
    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", run_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides experiment.output_dir)");
    run->add_option("--runs", runs, "Monte-Carlo runs (overrides experiment.monte_carlo_runs)")
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "base seed (overrides scenario.rng_seed)")->check(CLI::NonNegativeNumber);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "parse and check a config file");
    validate->add_option("config", validate_path, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (*validate) {
            const auto cfg = wsbf::parse_config(validate_path);
            std::printf("ok: %d elements, %d snapshots, %zu methods, mismatch %g deg\n",
                        cfg.geometry.num_elements(), cfg.scenario.num_snapshots, cfg.methods.size(),
                        cfg.mismatch_deg);
            return 0;
        }

        auto cfg = wsbf::parse_config(run_path);
        if (!out_dir.empty()) {
            cfg.output_dir = out_dir;
        }
        if (runs > 0) {
            cfg.monte_carlo_runs = runs;
        }
        if (seed >= 0) {
            cfg.scenario.rng_seed = static_cast<std::uint64_t>(seed);
        }
        wsbf::validate_config(cfg);
        const auto report = wsbf::run_experiment(cfg);
        print_summary(report);
        if (report.failure_fraction() > cfg.failure_budget) {
            std::fprintf(stderr, "error: solver failures exceed the budget of %.1f%%\n",
                         100.0 * cfg.failure_budget);
            for (const auto& r : report.runs) {
                for (const auto& [method, res] : r.methods) {
                    if (!res.solved) {
                        std::fprintf(stderr, "  seed %llu %s: %s\n", static_cast<unsigned long long>(r.seed),
                                     std::string(wsbf::to_string(method)).c_str(), res.error.c_str());
                    }
                }
            }
            return kExitSolver;
        }
        return 0;
    } catch (const wsbf::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
}
