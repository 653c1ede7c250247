// SPDX-License-Identifier: Apache-2.0
#include "wsbf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wsbf {

namespace {

constexpr double kAngleTol = 1e-9;

std::size_t nearest_index(const std::vector<double>& angles, double theta) {
    const auto it = std::lower_bound(angles.begin(), angles.end(), theta);
    if (it == angles.begin()) {
        return 0;
    }
    if (it == angles.end()) {
        return angles.size() - 1;
    }
    const auto hi = static_cast<std::size_t>(it - angles.begin());
    return (theta - angles[hi - 1] <= angles[hi] - theta) ? hi - 1 : hi;
}

// Golden-section search for the minimum of the raw gain on [lo, hi].
double refine_minimum(const BeamPattern& pattern, double lo, double hi) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double theta) { return array_gain(pattern.weights, *pattern.geometry, theta); };
    double a = lo;
    double b = hi;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    return std::min({f1, f2, f(lo), f(hi)});
}

} // namespace

double to_db(double ratio) {
    if (!(ratio > 0.0)) {
        return kDbFloor;
    }
    return std::max(10.0 * std::log10(ratio), kDbFloor);
}

double array_gain(const CVector& w, const ArrayGeometry& geometry, double theta_deg) {
    return std::norm(w.dot(steering_vector(geometry, theta_deg)));
}

double BeamPattern::resolution_deg() const {
    return angles_deg.size() > 1 ? angles_deg[1] - angles_deg[0] : 0.0;
}

double BeamPattern::gain_db_at(double theta_deg) const {
    if (angles_deg.empty()) {
        throw DomainError("empty beam pattern");
    }
    return gain_db(static_cast<Eigen::Index>(nearest_index(angles_deg, theta_deg)));
}

BeamPattern beam_pattern(const CVector& w, const ArrayGeometry& geometry, double resolution_deg) {
    if (!(resolution_deg > 0.0 && resolution_deg <= 1.0)) {
        throw DomainError("pattern resolution must lie in (0, 1] degrees");
    }
    if (w.size() != geometry.num_elements()) {
        throw DomainError("weight vector does not match the array");
    }
    if (w.norm() == 0.0 || !w.allFinite()) {
        throw DomainError("weight vector is zero or non-finite");
    }
    BeamPattern pattern;
    const auto steps = static_cast<long>(std::floor(180.0 / resolution_deg + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        pattern.angles_deg.push_back(std::min(-90.0 + static_cast<double>(i) * resolution_deg, 90.0));
    }
    const auto n = static_cast<Eigen::Index>(pattern.angles_deg.size());
    pattern.raw_gain.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        pattern.raw_gain(i) = array_gain(w, geometry, pattern.angles_deg[static_cast<std::size_t>(i)]);
    }
    pattern.peak_raw_gain = pattern.raw_gain.maxCoeff();
    pattern.gain_db.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        pattern.gain_db(i) = to_db(pattern.raw_gain(i) / pattern.peak_raw_gain);
    }
    pattern.weights = w;
    pattern.geometry = geometry;
    return pattern;
}

BeamPattern beam_pattern(const BeamformerWeights& w, const ArrayGeometry& geometry,
                         double resolution_deg) {
    return beam_pattern(w.w, geometry, resolution_deg);
}

double null_depth(const BeamPattern& pattern, double theta_deg, double window_deg) {
    if (pattern.angles_deg.empty()) {
        throw DomainError("empty beam pattern");
    }
    if (!(window_deg > 0.0)) {
        throw DomainError("null window must be positive");
    }
    const double lo = theta_deg - window_deg;
    const double hi = theta_deg + window_deg;
    if (lo < pattern.angles_deg.front() - kAngleTol || hi > pattern.angles_deg.back() + kAngleTol) {
        throw DomainError("null window extends outside the pattern grid");
    }
    std::size_t best = pattern.angles_deg.size();
    for (std::size_t i = 0; i < pattern.angles_deg.size(); ++i) {
        const double theta = pattern.angles_deg[i];
        if (theta < lo - kAngleTol || theta > hi + kAngleTol) {
            continue;
        }
        if (best == pattern.angles_deg.size() ||
            pattern.raw_gain(static_cast<Eigen::Index>(i)) < pattern.raw_gain(static_cast<Eigen::Index>(best))) {
            best = i;
        }
    }
    if (best == pattern.angles_deg.size()) {
        throw DomainError("null window contains no grid point");
    }
    double raw = pattern.raw_gain(static_cast<Eigen::Index>(best));
    if (pattern.geometry && pattern.weights.size() > 0 && raw > 0.0) {
        const double left = best > 0 ? std::max(pattern.angles_deg[best - 1], lo) : lo;
        const double right = best + 1 < pattern.angles_deg.size() ? std::min(pattern.angles_deg[best + 1], hi) : hi;
        raw = std::min(raw, refine_minimum(pattern, std::max(left, -90.0), std::min(right, 90.0)));
    }
    return to_db(raw / pattern.peak_raw_gain);
}

SidelobeLevel sidelobe_level(const BeamPattern& pattern, double mainlobe_center_deg) {
    const auto& g = pattern.gain_db;
    const auto n = static_cast<std::size_t>(g.size());
    if (n < 2) {
        throw DomainError("beam pattern too short for sidelobe analysis");
    }
    auto at = [&](std::size_t i) { return g(static_cast<Eigen::Index>(i)); };
    auto is_local_max = [&](std::size_t i) {
        const bool left_ok = i == 0 || at(i) >= at(i - 1);
        const bool right_ok = i + 1 == n || at(i) >= at(i + 1);
        return left_ok && right_ok;
    };

    std::size_t peak = n;
    double peak_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double dist = std::abs(pattern.angles_deg[i] - mainlobe_center_deg);
        if (dist > 2.0 + kAngleTol || !is_local_max(i)) {
            continue;
        }
        if (dist < peak_dist - kAngleTol || (std::abs(dist - peak_dist) <= kAngleTol && at(i) > at(peak))) {
            peak = i;
            peak_dist = dist;
        }
    }
    if (peak == n) {
        throw DomainError("no local maximum within 2 degrees of the main-lobe center");
    }

    std::size_t left = peak;
    while (left > 0 && at(left - 1) <= at(left)) {
        --left;
    }
    std::size_t right = peak;
    while (right + 1 < n && at(right + 1) <= at(right)) {
        ++right;
    }

    SidelobeLevel out;
    if (left == 0 && right + 1 == n) {
        out.level_db = std::max(at(0), at(n - 1));
        out.has_sidelobe = false;
        return out;
    }
    out.has_sidelobe = true;
    out.level_db = kDbFloor;
    for (std::size_t i = 0; i < left; ++i) {
        out.level_db = std::max(out.level_db, at(i));
    }
    for (std::size_t i = right + 1; i < n; ++i) {
        out.level_db = std::max(out.level_db, at(i));
    }
    return out;
}

double pointing_error(const BeamPattern& pattern, double true_doa_deg) {
    if (pattern.angles_deg.empty()) {
        throw DomainError("empty beam pattern");
    }
    const double peak = pattern.raw_gain.maxCoeff();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pattern.angles_deg.size(); ++i) {
        if (pattern.raw_gain(static_cast<Eigen::Index>(i)) < peak * (1.0 - 1e-12)) {
            continue;
        }
        const double err = pattern.angles_deg[i] - true_doa_deg;
        if (std::abs(err) < std::abs(best)) {
            best = err;
        }
    }
    return best;
}

double output_sinr(const CVector& w, const Scenario& scenario, const ArrayGeometry& geometry) {
    scenario.validate();
    if (w.size() != geometry.num_elements()) {
        throw DomainError("weight vector does not match the array");
    }
    const double sigma2 = scenario.noise_power;
    const double signal = sigma2 * db_to_linear(scenario.soi_snr_db) * array_gain(w, geometry, scenario.soi_doa_deg);
    double disturbance = sigma2 * w.squaredNorm();
    for (const auto& jammer : scenario.interferers) {
        disturbance += sigma2 * db_to_linear(jammer.inr_db) * array_gain(w, geometry, jammer.doa_deg);
    }
    if (!(disturbance > 0.0)) {
        throw DomainError("weight vector is zero");
    }
    return to_db(signal / disturbance);
}

double output_sinr(const BeamformerWeights& w, const Scenario& scenario, const ArrayGeometry& geometry) {
    return output_sinr(w.w, scenario, geometry);
}

} // namespace wsbf
