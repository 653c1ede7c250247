// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wsbf/analysis.hpp"
#include "wsbf/config.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wsbf {

struct MetricRow {
    Method method = Method::mvdr;
    std::string metric;
    double median = 0.0;
    double iqr = 0.0;
    int failures = 0; // runs excluded from the aggregate
};

struct MethodRunResult {
    bool solved = false;
    std::string error;
    SolverDiagnostics diagnostics;
    // Metric name -> value; absent when the metric was undefined for this run.
    std::map<std::string, double> metrics;
};

struct RunResult {
    std::uint64_t seed = 0;
    std::map<Method, MethodRunResult> methods;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RunResult> runs; // indexed by run; seed = base seed + index
    std::map<Method, BeamPattern> patterns; // first successful run, export resolution
    std::vector<MetricRow> metrics;         // method-major, fixed metric order
    int solver_failures = 0;

    double failure_fraction() const;
};

// Names of the reported metrics, in output order.
std::vector<std::string> metric_names(const ExperimentConfig& config);

// Every metric for one solved beamformer.
std::map<std::string, double> evaluate_metrics(const BeamformerWeights& weights,
                                               const ExperimentConfig& config);

// Single run with seed = base seed + run_index; also returns the export
// pattern of every successful method.
RunResult run_single(const ExperimentConfig& config, int run_index,
                     std::map<Method, BeamPattern>* patterns = nullptr);

// All Monte-Carlo runs and their aggregates; writes nothing.
ExperimentReport compute_experiment(const ExperimentConfig& config);

// compute_experiment plus pattern_<method>.csv and metrics.csv in
// config.output_dir.
ExperimentReport run_experiment(const ExperimentConfig& config);

void emit_pattern_csv(const BeamPattern& pattern, const std::filesystem::path& path);
void emit_metrics_csv(const ExperimentReport& report, const std::filesystem::path& path);
std::string pattern_csv(const BeamPattern& pattern);
std::string metrics_csv(const ExperimentReport& report);

// Linear-interpolation quantile (type 7); NaN for an empty sample.
double quantile(std::vector<double> values, double q);

} // namespace wsbf
