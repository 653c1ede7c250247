// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wsbf/array_model.hpp"
#include "wsbf/solvers.hpp"

#include <optional>
#include <vector>

namespace wsbf {

inline constexpr double kDbFloor = -200.0;

// Power response |w^H a(theta)|^2 on a uniform grid over [-90, 90],
// normalized so its maximum is 0 dB. Keeps the weights so metrics can
// refine between grid points.
struct BeamPattern {
    std::vector<double> angles_deg;
    RVector gain_db;
    RVector raw_gain;
    CVector weights;
    std::optional<ArrayGeometry> geometry;
    double peak_raw_gain = 0.0;

    double resolution_deg() const;
    // gain_db at the grid angle closest to theta_deg.
    double gain_db_at(double theta_deg) const;
};

struct SidelobeLevel {
    double level_db = kDbFloor;
    bool has_sidelobe = false; // false: the main lobe spans the whole grid
};

// |w^H a(theta)|^2 at a single angle.
double array_gain(const CVector& w, const ArrayGeometry& geometry, double theta_deg);

double to_db(double ratio);

BeamPattern beam_pattern(const CVector& w, const ArrayGeometry& geometry, double resolution_deg = 0.1);
BeamPattern beam_pattern(const BeamformerWeights& w, const ArrayGeometry& geometry,
                         double resolution_deg = 0.1);

// Minimum normalized gain over [theta - window, theta + window], clamped at
// -200 dB. The grid minimum is refined by a golden-section search between
// its neighbours when the pattern carries its weights.
double null_depth(const BeamPattern& pattern, double theta_deg, double window_deg = 1.0);

// Highest gain outside the main lobe. The main lobe is the contiguous
// region around the local maximum nearest `mainlobe_center_deg` (within
// 2 degrees), bounded by the first local minimum on each side.
SidelobeLevel sidelobe_level(const BeamPattern& pattern, double mainlobe_center_deg);

// Angle of the global maximum minus the true DOA. Equal maxima resolve to
// the one closest to the true DOA.
double pointing_error(const BeamPattern& pattern, double true_doa_deg);

// SINR from the scenario's true source powers, in dB (clamped at -200).
double output_sinr(const CVector& w, const Scenario& scenario, const ArrayGeometry& geometry);
double output_sinr(const BeamformerWeights& w, const Scenario& scenario, const ArrayGeometry& geometry);

} // namespace wsbf
