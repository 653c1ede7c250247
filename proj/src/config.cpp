// SPDX-License-Identifier: Apache-2.0
#include "wsbf/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace wsbf {

std::string_view to_string(ConfigError::Kind kind) {
    switch (kind) {
    case ConfigError::Kind::missing_file: return "missing_file";
    case ConfigError::Kind::syntax: return "syntax";
    case ConfigError::Kind::unknown_key: return "unknown_key";
    case ConfigError::Kind::invalid_value: return "invalid_value";
    }
    return "unknown";
}

ConfigError::ConfigError(Kind kind, std::string key, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + (key.empty() ? "" : " [" + key + "]") + ": " +
                         message),
      kind_(kind), key_(std::move(key)) {}

double ExperimentConfig::effective_half_width_deg() const {
    return ellipsoid_half_width_deg.value_or(std::max(std::abs(mismatch_deg), 3.0));
}

namespace {

using Kind = ConfigError::Kind;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        items.push_back(trim(item));
    }
    if (!value.empty() && value.back() == ',') {
        items.emplace_back();
    }
    return items;
}

double to_double(const std::string& key, const std::string& text) {
    double out = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(out)) {
        throw ConfigError(Kind::invalid_value, key, "expected a real number, got '" + text + "'");
    }
    return out;
}

long long to_integer(const std::string& key, const std::string& text) {
    long long out = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(Kind::invalid_value, key, "expected an integer, got '" + text + "'");
    }
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
    std::vector<double> out;
    if (text.empty()) {
        return out;
    }
    for (const auto& item : split_list(text)) {
        out.push_back(to_double(key, item));
    }
    return out;
}

int to_int(const std::string& key, const std::string& text) {
    const long long v = to_integer(key, text);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError(Kind::invalid_value, key, "integer out of range");
    }
    return static_cast<int>(v);
}

struct Builder {
    ExperimentConfig cfg;
    int num_elements = 8;
    double spacing = 0.5;
    std::vector<double> jammer_doas;
    std::vector<double> jammer_inrs;
};

using Setter = std::function<void(Builder&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"scenario.soi_doa_deg", [](Builder& b, auto& k, auto& v) { b.cfg.scenario.soi_doa_deg = to_double(k, v); }},
        {"scenario.soi_snr_db", [](Builder& b, auto& k, auto& v) { b.cfg.scenario.soi_snr_db = to_double(k, v); }},
        {"scenario.interferer_doas_deg", [](Builder& b, auto& k, auto& v) { b.jammer_doas = to_doubles(k, v); }},
        {"scenario.interferer_inrs_db", [](Builder& b, auto& k, auto& v) { b.jammer_inrs = to_doubles(k, v); }},
        {"scenario.num_snapshots", [](Builder& b, auto& k, auto& v) { b.cfg.scenario.num_snapshots = to_int(k, v); }},
        {"scenario.noise_power", [](Builder& b, auto& k, auto& v) { b.cfg.scenario.noise_power = to_double(k, v); }},
        {"scenario.rng_seed",
         [](Builder& b, auto& k, auto& v) {
             const long long seed = to_integer(k, v);
             if (seed < 0) {
                 throw ConfigError(Kind::invalid_value, k, "seed must be nonnegative");
             }
             b.cfg.scenario.rng_seed = static_cast<std::uint64_t>(seed);
         }},
        {"array.num_elements", [](Builder& b, auto& k, auto& v) { b.num_elements = to_int(k, v); }},
        {"array.spacing_wavelengths", [](Builder& b, auto& k, auto& v) { b.spacing = to_double(k, v); }},
        {"grid.resolution_deg", [](Builder& b, auto& k, auto& v) { b.cfg.grid_resolution_deg = to_double(k, v); }},
        {"solver.gamma", [](Builder& b, auto& k, auto& v) { b.cfg.solver.gamma = to_double(k, v); }},
        {"solver.p", [](Builder& b, auto& k, auto& v) { b.cfg.solver.p = to_double(k, v); }},
        {"solver.max_iterations", [](Builder& b, auto& k, auto& v) { b.cfg.solver.max_iterations = to_int(k, v); }},
        {"solver.objective_tolerance", [](Builder& b, auto& k, auto& v) { b.cfg.solver.objective_tolerance = to_double(k, v); }},
        {"solver.irls_epsilon", [](Builder& b, auto& k, auto& v) { b.cfg.solver.irls_epsilon = to_double(k, v); }},
        {"solver.diagonal_loading", [](Builder& b, auto& k, auto& v) { b.cfg.solver.diagonal_loading = to_double(k, v); }},
        {"experiment.methods",
         [](Builder& b, auto& k, auto& v) {
             b.cfg.methods.clear();
             for (const auto& name : split_list(v)) {
                 const auto m = parse_method(name);
                 if (!m) {
                     throw ConfigError(Kind::invalid_value, k, "unknown method '" + name + "'");
                 }
                 b.cfg.methods.push_back(*m);
             }
         }},
        {"experiment.mismatch_deg", [](Builder& b, auto& k, auto& v) { b.cfg.mismatch_deg = to_double(k, v); }},
        {"experiment.monte_carlo_runs", [](Builder& b, auto& k, auto& v) { b.cfg.monte_carlo_runs = to_int(k, v); }},
        {"experiment.output_dir",
         [](Builder& b, auto& k, auto& v) {
             if (v.empty()) {
                 throw ConfigError(Kind::invalid_value, k, "output directory is empty");
             }
             b.cfg.output_dir = v;
         }},
        {"experiment.ellipsoid_half_width_deg", [](Builder& b, auto& k, auto& v) { b.cfg.ellipsoid_half_width_deg = to_double(k, v); }},
        {"experiment.ellipsoid_samples", [](Builder& b, auto& k, auto& v) { b.cfg.ellipsoid_samples = to_int(k, v); }},
        {"experiment.pattern_resolution_deg", [](Builder& b, auto& k, auto& v) { b.cfg.pattern_resolution_deg = to_double(k, v); }},
        {"experiment.metric_resolution_deg", [](Builder& b, auto& k, auto& v) { b.cfg.metric_resolution_deg = to_double(k, v); }},
        {"experiment.null_window_deg", [](Builder& b, auto& k, auto& v) { b.cfg.null_window_deg = to_double(k, v); }},
        {"experiment.failure_budget", [](Builder& b, auto& k, auto& v) { b.cfg.failure_budget = to_double(k, v); }},
        {"experiment.threads", [](Builder& b, auto& k, auto& v) { b.cfg.threads = to_int(k, v); }},
    };
    return table;
}

template <typename F>
void check(const std::string& key, F&& fn) {
    try {
        fn();
    } catch (const DomainError& e) {
        throw ConfigError(Kind::invalid_value, key, e.what());
    }
}

} // namespace

void validate_config(const ExperimentConfig& c) {
    const Scenario& sc = c.scenario;
    check("scenario.soi_doa_deg", [&] {
        Scenario soi_only;
        soi_only.soi_doa_deg = sc.soi_doa_deg;
        soi_only.validate();
    });
    if (sc.num_snapshots < 1) {
        throw ConfigError(Kind::invalid_value, "scenario.num_snapshots", "must be at least 1");
    }
    if (!(sc.noise_power > 0.0)) {
        throw ConfigError(Kind::invalid_value, "scenario.noise_power", "must be positive");
    }
    check("scenario.interferer_doas_deg", [&] { sc.validate(); });
    const SolverOptions& so = c.solver;
    if (!(so.gamma >= 0.0) || !std::isfinite(so.gamma)) {
        throw ConfigError(Kind::invalid_value, "solver.gamma", "must be nonnegative");
    }
    if (!(so.p > 0.0 && so.p <= 1.0)) {
        throw ConfigError(Kind::invalid_value, "solver.p", "must lie in (0, 1]");
    }
    if (so.max_iterations < 1) {
        throw ConfigError(Kind::invalid_value, "solver.max_iterations", "must be positive");
    }
    if (!(so.objective_tolerance > 0.0)) {
        throw ConfigError(Kind::invalid_value, "solver.objective_tolerance", "must be positive");
    }
    if (!(so.irls_epsilon >= so.irls_epsilon_floor)) {
        throw ConfigError(Kind::invalid_value, "solver.irls_epsilon", "must be at least 1e-12");
    }
    if (!(so.diagonal_loading >= 0.0)) {
        throw ConfigError(Kind::invalid_value, "solver.diagonal_loading", "must be nonnegative");
    }
    check("solver", [&] { so.validate(); });
    check("grid.resolution_deg", [&] { (void)DoaGrid::uniform(c.grid_resolution_deg, c.steering_deg()); });
    if (std::abs(c.steering_deg()) > 90.0) {
        throw ConfigError(Kind::invalid_value, "experiment.mismatch_deg", "steering angle leaves [-90, 90]");
    }
    if (c.methods.empty()) {
        throw ConfigError(Kind::invalid_value, "experiment.methods", "at least one method is required");
    }
    for (std::size_t i = 0; i < c.methods.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (c.methods[i] == c.methods[j]) {
                throw ConfigError(Kind::invalid_value, "experiment.methods", "method listed twice");
            }
        }
    }
    if (c.monte_carlo_runs < 1) {
        throw ConfigError(Kind::invalid_value, "experiment.monte_carlo_runs", "must be at least 1");
    }
    const double hw = c.effective_half_width_deg();
    if (!(hw >= 0.0) || std::abs(c.steering_deg()) + hw > 90.0) {
        throw ConfigError(Kind::invalid_value, "experiment.ellipsoid_half_width_deg",
                          "uncertainty arc must be nonnegative and stay inside [-90, 90]");
    }
    if (c.ellipsoid_samples < 2) {
        throw ConfigError(Kind::invalid_value, "experiment.ellipsoid_samples", "must be at least 2");
    }
    for (auto [key, res] : {std::pair{"experiment.pattern_resolution_deg", c.pattern_resolution_deg},
                            std::pair{"experiment.metric_resolution_deg", c.metric_resolution_deg}}) {
        if (!(res > 0.0 && res <= 1.0)) {
            throw ConfigError(Kind::invalid_value, key, "resolution must lie in (0, 1]");
        }
    }
    if (!(c.null_window_deg > 0.0)) {
        throw ConfigError(Kind::invalid_value, "experiment.null_window_deg", "must be positive");
    }
    if (!(c.failure_budget >= 0.0 && c.failure_budget <= 1.0)) {
        throw ConfigError(Kind::invalid_value, "experiment.failure_budget", "must lie in [0, 1]");
    }
    if (c.threads < 0) {
        throw ConfigError(Kind::invalid_value, "experiment.threads", "must be nonnegative");
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    Builder b;
    b.cfg.methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(Kind::syntax, "", "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(Kind::syntax, "", "line " + std::to_string(line_no) + ": empty key");
        }
        const auto& table = setters();
        const auto it = table.find(key);
        if (it == table.end()) {
            throw ConfigError(Kind::unknown_key, key, "line " + std::to_string(line_no) + ": unknown key");
        }
        if (!seen.insert(key).second) {
            throw ConfigError(Kind::syntax, key, "line " + std::to_string(line_no) + ": duplicate key");
        }
        it->second(b, key, value);
    }

    if (b.jammer_doas.size() != b.jammer_inrs.size()) {
        throw ConfigError(Kind::invalid_value, "scenario.interferer_inrs_db",
                          "needs one INR per interferer DOA");
    }
    for (std::size_t j = 0; j < b.jammer_doas.size(); ++j) {
        b.cfg.scenario.interferers.push_back({b.jammer_doas[j], b.jammer_inrs[j]});
    }
    try {
        b.cfg.geometry = ArrayGeometry(b.num_elements, b.spacing);
    } catch (const DomainError& e) {
        throw ConfigError(Kind::invalid_value, "array", e.what());
    }
    validate_config(b.cfg);
    return b.cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(Kind::missing_file, "", "cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace wsbf
