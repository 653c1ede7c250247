// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wsbf/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace wsbf {

// Uniform linear array: element count and inter-element spacing in wavelengths.
class ArrayGeometry {
public:
    ArrayGeometry(int num_elements, double spacing_wavelengths);

    int num_elements() const { return num_elements_; }
    double spacing_wavelengths() const { return spacing_wavelengths_; }

    // Inter-element phase progression 2*pi*(d/lambda)*sin(theta).
    double phase_step(double theta_deg) const;

private:
    int num_elements_;
    double spacing_wavelengths_;
};

// Ordered set of candidate interference directions, in degrees.
class DoaGrid {
public:
    // Validates ordering and range. `excluded_deg` is the look direction
    // that no grid angle may coincide with.
    DoaGrid(std::vector<double> angles_deg, double excluded_deg);

    // Every multiple of `step_deg` in [-90, 90], minus `excluded_deg`.
    static DoaGrid uniform(double step_deg, double excluded_deg);

    const std::vector<double>& angles_deg() const { return angles_; }
    std::size_t size() const { return angles_.size(); }
    double excluded_deg() const { return excluded_; }

private:
    std::vector<double> angles_;
    double excluded_;
};

struct SteeringMatrix {
    CMatrix data; // M x N
    DoaGrid grid;
};

struct Interferer {
    double doa_deg;
    double inr_db;
};

struct Scenario {
    double soi_doa_deg = 0.0;
    double soi_snr_db = 10.0;
    std::vector<Interferer> interferers;
    int num_snapshots = 100;
    double noise_power = 1.0;
    std::uint64_t rng_seed = 0;

    // Throws DomainError when an invariant is violated.
    void validate() const;
};

struct SnapshotMatrix {
    CMatrix data; // M x K
};

// Test hook: replaces the random SOI waveform with a constant amplitude.
struct SnapshotOverrides {
    std::optional<Complex> fixed_soi_amplitude;
};

CVector steering_vector(const ArrayGeometry& geometry, double theta_deg);

SteeringMatrix steering_matrix(const ArrayGeometry& geometry, const DoaGrid& grid);

// Draws K snapshots of the narrowband ULA signal model: SOI plus
// interferers as i.i.d. circular complex Gaussian sources, plus white
// noise. Deterministic for a fixed scenario.rng_seed.
SnapshotMatrix generate_snapshots(const Scenario& scenario, const ArrayGeometry& geometry,
                                  const SnapshotOverrides& overrides = {});

double db_to_linear(double db);

} // namespace wsbf
