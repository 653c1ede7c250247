// SPDX-License-Identifier: Apache-2.0
#include "wsbf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

namespace wsbf {

namespace {

std::string format_angle(double deg) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", deg);
    return buf;
}

std::string fixed6(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") {
        s.erase(0, 1);
    }
    return s;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for '" + path.string() + "'");
    }
}

bool needs_q(Method m) { return m == Method::wsc || m == Method::rwsc; }
bool needs_ellipsoid(Method m) { return m == Method::rmvb || m == Method::rwsc; }

} // namespace

double ExperimentReport::failure_fraction() const {
    const double total = static_cast<double>(runs.size() * config.methods.size());
    return total > 0.0 ? solver_failures / total : 0.0;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<std::string> metric_names(const ExperimentConfig& config) {
    std::vector<std::string> names;
    for (const auto& jammer : config.scenario.interferers) {
        names.push_back("null_depth_" + format_angle(jammer.doa_deg));
    }
    names.insert(names.end(), {"sidelobe_level", "pointing_error", "abs_pointing_error", "output_sinr",
                               "gain_at_soi"});
    return names;
}

std::map<std::string, double> evaluate_metrics(const BeamformerWeights& weights,
                                               const ExperimentConfig& config) {
    std::map<std::string, double> out;
    const BeamPattern pattern = beam_pattern(weights, config.geometry, config.metric_resolution_deg);
    for (const auto& jammer : config.scenario.interferers) {
        try {
            out["null_depth_" + format_angle(jammer.doa_deg)] =
                null_depth(pattern, jammer.doa_deg, config.null_window_deg);
        } catch (const DomainError&) {
        }
    }
    try {
        out["sidelobe_level"] = sidelobe_level(pattern, config.steering_deg()).level_db;
    } catch (const DomainError&) {
    }
    const double err = pointing_error(pattern, config.scenario.soi_doa_deg);
    out["pointing_error"] = err;
    out["abs_pointing_error"] = std::abs(err);
    out["output_sinr"] = output_sinr(weights, config.scenario, config.geometry);
    out["gain_at_soi"] = pattern.gain_db_at(config.scenario.soi_doa_deg);
    return out;
}

RunResult run_single(const ExperimentConfig& config, int run_index,
                     std::map<Method, BeamPattern>* patterns) {
    RunResult result;
    Scenario scenario = config.scenario;
    scenario.rng_seed = config.scenario.rng_seed + static_cast<std::uint64_t>(run_index);
    result.seed = scenario.rng_seed;

    const SnapshotMatrix X = generate_snapshots(scenario, config.geometry);
    const CovarianceMatrix R = sample_covariance(X);
    const double steer = config.steering_deg();
    const CVector a0 = steering_vector(config.geometry, steer);
    const SteeringMatrix A = steering_matrix(config.geometry, DoaGrid::uniform(config.grid_resolution_deg, steer));

    const bool any_q = std::any_of(config.methods.begin(), config.methods.end(), needs_q);
    const bool any_ell = std::any_of(config.methods.begin(), config.methods.end(), needs_ellipsoid);
    const WeightMatrix Q = any_q ? build_q(A, X) : WeightMatrix::identity(A.data.cols());
    const Ellipsoid ell = any_ell ? build_ellipsoid(config.geometry, steer, config.effective_half_width_deg(),
                                                    config.ellipsoid_samples)
                                  : Ellipsoid{a0, CMatrix(a0.size(), 0)};

    for (Method m : config.methods) {
        MethodRunResult& slot = result.methods[m];
        try {
            BeamformerWeights w;
            switch (m) {
            case Method::mvdr: w = mvdr(R, a0, config.solver.diagonal_loading); break;
            case Method::sc: w = solve_sc(R, A, a0, config.solver); break;
            case Method::wsc: w = solve_wsc(R, A, Q, a0, config.solver); break;
            case Method::rmvb: w = solve_rmvb(R, ell, config.solver); break;
            case Method::rwsc: w = solve_rwsc(R, A, Q, ell, config.solver); break;
            }
            slot.diagnostics = w.diagnostics;
            slot.metrics = evaluate_metrics(w, config);
            slot.solved = true;
            if (patterns) {
                patterns->emplace(m, beam_pattern(w, config.geometry, config.pattern_resolution_deg));
            }
        } catch (const SolverError& e) {
            slot.error = e.what();
        } catch (const DomainError& e) {
            slot.error = e.what();
        }
    }
    return result;
}

ExperimentReport compute_experiment(const ExperimentConfig& config) {
    validate_config(config);
    ExperimentReport report;
    report.config = config;
    const int runs = config.monte_carlo_runs;
    report.runs.resize(static_cast<std::size_t>(runs));
    std::vector<std::map<Method, BeamPattern>> patterns(static_cast<std::size_t>(runs));

    unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(runs));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < runs; i = next++) {
            report.runs[static_cast<std::size_t>(i)] = run_single(config, i, &patterns[static_cast<std::size_t>(i)]);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back(work);
        }
    }

    for (Method m : config.methods) {
        for (auto& per_run : patterns) {
            auto it = per_run.find(m);
            if (it != per_run.end()) {
                report.patterns.emplace(m, std::move(it->second));
                break;
            }
        }
    }

    const auto names = metric_names(config);
    for (Method m : config.methods) {
        for (const auto& name : names) {
            std::vector<double> values;
            int failures = 0;
            for (const auto& run : report.runs) {
                const auto& r = run.methods.at(m);
                const auto it = r.metrics.find(name);
                if (r.solved && it != r.metrics.end() && std::isfinite(it->second)) {
                    values.push_back(it->second);
                } else {
                    ++failures;
                }
            }
            const double q1 = quantile(values, 0.25);
            const double q3 = quantile(values, 0.75);
            report.metrics.push_back({m, name, quantile(values, 0.5), q3 - q1, failures});
        }
        for (const auto& run : report.runs) {
            if (!run.methods.at(m).solved) {
                ++report.solver_failures;
            }
        }
    }
    return report;
}

std::string pattern_csv(const BeamPattern& pattern) {
    std::string out = "theta_deg,gain_db,raw_gain\n";
    for (std::size_t i = 0; i < pattern.angles_deg.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out += fixed6(pattern.angles_deg[i]) + "," + fixed6(pattern.gain_db(k)) + "," +
               fixed6(pattern.raw_gain(k)) + "\n";
    }
    return out;
}

std::string metrics_csv(const ExperimentReport& report) {
    std::string out = "method,metric,median,iqr,failures\n";
    for (const auto& row : report.metrics) {
        out += std::string(to_string(row.method)) + "," + row.metric + "," + fixed6(row.median) + "," +
               fixed6(row.iqr) + "," + std::to_string(row.failures) + "\n";
    }
    return out;
}

void emit_pattern_csv(const BeamPattern& pattern, const std::filesystem::path& path) {
    write_file(path, pattern_csv(pattern));
}

void emit_metrics_csv(const ExperimentReport& report, const std::filesystem::path& path) {
    write_file(path, metrics_csv(report));
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    ExperimentReport report = compute_experiment(config);
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create '" + config.output_dir.string() + "': " + ec.message());
    }
    for (Method m : config.methods) {
        const auto path = config.output_dir / ("pattern_" + std::string(to_string(m)) + ".csv");
        const auto it = report.patterns.find(m);
        if (it != report.patterns.end()) {
            emit_pattern_csv(it->second, path);
        } else {
            write_file(path, "theta_deg,gain_db,raw_gain\n");
        }
    }
    emit_metrics_csv(report, config.output_dir / "metrics.csv");
    return report;
}

} // namespace wsbf
