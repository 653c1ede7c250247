// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wsbf/array_model.hpp"
#include "wsbf/solvers.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsbf {

// Everything needed to reproduce one beam-pattern study.
struct ExperimentConfig {
    Scenario scenario;
    ArrayGeometry geometry{8, 0.5};
    double grid_resolution_deg = 1.0;
    std::vector<Method> methods;
    SolverOptions solver;
    double mismatch_deg = 0.0;
    int monte_carlo_runs = 1;
    std::filesystem::path output_dir = "results";

    // Unset: max(|mismatch_deg|, 3).
    std::optional<double> ellipsoid_half_width_deg;
    int ellipsoid_samples = 13;
    double pattern_resolution_deg = 1.0; // CSV export
    double metric_resolution_deg = 0.1;
    double null_window_deg = 1.0;
    double failure_budget = 0.1; // tolerated fraction of failed solves
    int threads = 0;             // 0: hardware concurrency

    double steering_deg() const { return scenario.soi_doa_deg + mismatch_deg; }
    double effective_half_width_deg() const;
};

class ConfigError : public std::runtime_error {
public:
    enum class Kind { missing_file, syntax, unknown_key, invalid_value };

    ConfigError(Kind kind, std::string key, const std::string& message);

    Kind kind() const { return kind_; }
    const std::string& key() const { return key_; }

private:
    Kind kind_;
    std::string key_;
};

std::string_view to_string(ConfigError::Kind kind);

// Format: one `section.key = value` per line, `#` starts a comment, lists
// are comma separated. Unknown and duplicate keys are rejected.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);

// Re-checks every invariant; throws ConfigError(invalid_value).
void validate_config(const ExperimentConfig& config);

} // namespace wsbf
