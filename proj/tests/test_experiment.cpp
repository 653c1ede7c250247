#include "wsbf/experiment.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace wsbf;

namespace {

const std::filesystem::path kConfigDir = WSBF_CONFIG_DIR;

ExperimentConfig small_config() {
    ExperimentConfig c = parse_config(kConfigDir / "fig2.cfg");
    c.monte_carlo_runs = 3;
    c.output_dir = std::filesystem::temp_directory_path() / "wsbf_test_experiment";
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_CASE("quantile") {
    CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
    CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
    CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.25) == 1.75);
    CHECK(std::isnan(quantile({}, 0.5)));
    std::vector<double> v{5, -1, 7.5, 2, 2, 9, -3};
    const double q1 = quantile(v, 0.25), q3 = quantile(v, 0.75);
    std::mt19937 rng(4);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(v.begin(), v.end(), rng);
        CHECK(quantile(v, 0.25) == q1);
        CHECK(quantile(v, 0.75) == q3);
    }
}

TEST_CASE("pattern csv format") {
    const CVector w = steering_vector(ArrayGeometry(8, 0.5), 0.0) / 8.0;
    const std::string csv = pattern_csv(beam_pattern(w, ArrayGeometry(8, 0.5), 1.0));
    CHECK(csv.rfind("theta_deg,gain_db,raw_gain\n", 0) == 0);
    CHECK(count_lines(csv) == 182);
    CHECK(csv.find("\r") == std::string::npos);
    CHECK(csv.find("\n-90.000000,") != std::string::npos);
    CHECK(csv.find("\n0.000000,0.000000,1.000000\n") != std::string::npos);

    CVector pair(2);
    pair << 1.0, 1.0;
    const std::string floor = pattern_csv(beam_pattern(pair, ArrayGeometry(2, 0.5), 1.0));
    CHECK(floor.find("\n90.000000,-200.000000,") != std::string::npos);
}

TEST_CASE("metric table shape") {
    const ExperimentConfig c = small_config();
    const ExperimentReport r = compute_experiment(c);
    const auto names = metric_names(c);
    CHECK(std::find(names.begin(), names.end(), "null_depth_70") != names.end());
    CHECK(std::find(names.begin(), names.end(), "sidelobe_level") != names.end());
    CHECK(std::find(names.begin(), names.end(), "pointing_error") != names.end());
    CHECK(std::find(names.begin(), names.end(), "output_sinr") != names.end());
    CHECK(r.metrics.size() == c.methods.size() * names.size());
    CHECK(r.patterns.size() == c.methods.size());
    CHECK(r.runs.size() == 3);
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
        CHECK(r.runs[i].seed == c.scenario.rng_seed + i);
    }
    const std::string csv = metrics_csv(r);
    CHECK(csv.rfind("method,metric,median,iqr,failures\n", 0) == 0);
    CHECK(count_lines(csv) == r.metrics.size() + 1);
    for (Method m : c.methods) {
        CHECK(csv.find("\n" + std::string(to_string(m)) + ",null_depth_70,") != std::string::npos);
    }
    CHECK(r.solver_failures == 0);
}

TEST_CASE("experiment output is deterministic and independent of threads") {
    ExperimentConfig c = small_config();
    c.threads = 1;
    const std::string a = metrics_csv(compute_experiment(c));
    c.threads = 4;
    const ExperimentReport r = compute_experiment(c);
    CHECK(metrics_csv(r) == a);

    std::filesystem::remove_all(c.output_dir);
    run_experiment(c);
    const std::string m1 = slurp(c.output_dir / "metrics.csv");
    const std::string p1 = slurp(c.output_dir / "pattern_rwsc.csv");
    CHECK(m1 == a);
    CHECK(count_lines(p1) == 182);
    run_experiment(c);
    CHECK(slurp(c.output_dir / "metrics.csv") == m1);
    CHECK(slurp(c.output_dir / "pattern_rwsc.csv") == p1);
    for (Method m : c.methods) {
        CHECK(std::filesystem::exists(c.output_dir / ("pattern_" + std::string(to_string(m)) + ".csv")));
    }
    std::filesystem::remove_all(c.output_dir);
}

TEST_CASE("solver failures are counted and excluded") {
    ExperimentConfig c = parse_config(kConfigDir / "fig1.cfg");
    c.monte_carlo_runs = 2;
    c.methods = {Method::mvdr};
    c.scenario.num_snapshots = 1;
    c.solver.diagonal_loading = 0.0;
    const ExperimentReport r = compute_experiment(c);
    CHECK(r.solver_failures == 2);
    CHECK(r.failure_fraction() == 1.0);
    for (const auto& row : r.metrics) {
        CHECK(row.failures == 2);
    }
    CHECK(r.patterns.empty());
    CHECK(metrics_csv(r).find(",nan,nan,2\n") != std::string::npos);
}

TEST_CASE("emit reports I/O failures with the path") {
    const CVector w = steering_vector(ArrayGeometry(8, 0.5), 0.0) / 8.0;
    const auto bad = std::filesystem::path("/nonexistent_dir_wsbf") / "p.csv";
    try {
        emit_pattern_csv(beam_pattern(w, ArrayGeometry(8, 0.5), 1.0), bad);
        FAIL("write to a missing directory succeeded");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("nonexistent_dir_wsbf") != std::string::npos);
    }
}

TEST_CASE("cli exit codes") {
    const std::string cli = WSBF_CLI_PATH;
    const auto code = [](const std::string& cmd) {
        const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    CHECK(code(cli + " validate " + (kConfigDir / "fig1.cfg").string()) == 0);
    CHECK(code(cli + " validate /nonexistent.cfg") == 1);
    CHECK(code(cli + " frobnicate") == 1);

    const auto dir = std::filesystem::temp_directory_path() / "wsbf_cli_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "bad.cfg");
        out << "experiment.methods = mvdr\nscenario.num_snapshots = 1\nsolver.diagonal_loading = 0\n"
            << "scenario.interferer_doas_deg = 40\nscenario.interferer_inrs_db = 20\n";
    }
    CHECK(code(cli + " run " + (dir / "bad.cfg").string() + " --out " + (dir / "out").string()) == 2);
    CHECK(code(cli + " run " + (kConfigDir / "fig1.cfg").string() + " --runs 1 --out " + (dir / "ok").string()) ==
          0);
    CHECK(std::filesystem::exists(dir / "ok" / "pattern_wsc.csv"));
    std::filesystem::remove_all(dir);
}
