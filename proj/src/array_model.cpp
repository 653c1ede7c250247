// SPDX-License-Identifier: Apache-2.0
#include "wsbf/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace wsbf {

namespace {

constexpr double kAngleTol = 1e-9;

void check_angle(double theta_deg) {
    if (!std::isfinite(theta_deg) || std::abs(theta_deg) > 90.0 + kAngleTol) {
        std::ostringstream msg;
        msg << "angle " << theta_deg << " deg outside [-90, 90]";
        throw DomainError(msg.str());
    }
}

} // namespace

ArrayGeometry::ArrayGeometry(int num_elements, double spacing_wavelengths)
    : num_elements_(num_elements), spacing_wavelengths_(spacing_wavelengths) {
    if (num_elements < 2) {
        throw DomainError("array needs at least two elements");
    }
    if (!(spacing_wavelengths > 0.0) || !std::isfinite(spacing_wavelengths)) {
        throw DomainError("element spacing must be positive");
    }
}

double ArrayGeometry::phase_step(double theta_deg) const {
    return 2.0 * kPi * spacing_wavelengths_ * std::sin(deg2rad(theta_deg));
}

DoaGrid::DoaGrid(std::vector<double> angles_deg, double excluded_deg)
    : angles_(std::move(angles_deg)), excluded_(excluded_deg) {
    if (angles_.empty()) {
        throw DomainError("DOA grid is empty");
    }
    for (std::size_t i = 0; i < angles_.size(); ++i) {
        check_angle(angles_[i]);
        if (i > 0 && !(angles_[i] > angles_[i - 1])) {
            throw DomainError("DOA grid must be strictly increasing");
        }
        if (std::abs(angles_[i] - excluded_) <= kAngleTol) {
            throw DomainError("DOA grid contains the look direction");
        }
    }
}

DoaGrid DoaGrid::uniform(double step_deg, double excluded_deg) {
    if (!(step_deg > 0.0) || step_deg > 180.0) {
        throw DomainError("grid step must lie in (0, 180]");
    }
    const auto count = static_cast<long>(std::floor(180.0 / step_deg + 1e-9));
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(count) + 1);
    for (long i = 0; i <= count; ++i) {
        // Snap to the step lattice so repeated construction is exact.
        const double theta = -90.0 + static_cast<double>(i) * step_deg;
        if (std::abs(theta - excluded_deg) <= kAngleTol) {
            continue;
        }
        angles.push_back(std::min(theta, 90.0));
    }
    return DoaGrid(std::move(angles), excluded_deg);
}

void Scenario::validate() const {
    check_angle(soi_doa_deg);
    if (num_snapshots < 1) {
        throw DomainError("num_snapshots must be at least 1");
    }
    if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
        throw DomainError("noise_power must be positive");
    }
    for (std::size_t j = 0; j < interferers.size(); ++j) {
        check_angle(interferers[j].doa_deg);
        if (std::abs(interferers[j].doa_deg - soi_doa_deg) <= kAngleTol) {
            throw DomainError("interferer DOA coincides with the SOI DOA");
        }
        for (std::size_t i = 0; i < j; ++i) {
            if (std::abs(interferers[j].doa_deg - interferers[i].doa_deg) <= kAngleTol) {
                throw DomainError("interferer DOAs must be distinct");
            }
        }
    }
}

CVector steering_vector(const ArrayGeometry& geometry, double theta_deg) {
    check_angle(theta_deg);
    const double phi = geometry.phase_step(theta_deg);
    CVector a(geometry.num_elements());
    for (int m = 0; m < geometry.num_elements(); ++m) {
        a(m) = std::polar(1.0, static_cast<double>(m) * phi);
    }
    return a;
}

SteeringMatrix steering_matrix(const ArrayGeometry& geometry, const DoaGrid& grid) {
    CMatrix data(geometry.num_elements(), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t n = 0; n < grid.size(); ++n) {
        data.col(static_cast<Eigen::Index>(n)) = steering_vector(geometry, grid.angles_deg()[n]);
    }
    return SteeringMatrix{std::move(data), grid};
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

SnapshotMatrix generate_snapshots(const Scenario& scenario, const ArrayGeometry& geometry,
                                  const SnapshotOverrides& overrides) {
    scenario.validate();
    const int M = geometry.num_elements();
    const int K = scenario.num_snapshots;

    std::vector<CVector> directions;
    std::vector<double> amplitudes; // per-component standard deviation
    directions.push_back(steering_vector(geometry, scenario.soi_doa_deg));
    amplitudes.push_back(std::sqrt(scenario.noise_power * db_to_linear(scenario.soi_snr_db) / 2.0));
    for (const auto& jammer : scenario.interferers) {
        directions.push_back(steering_vector(geometry, jammer.doa_deg));
        amplitudes.push_back(std::sqrt(scenario.noise_power * db_to_linear(jammer.inr_db) / 2.0));
    }
    const double noise_sd = std::sqrt(scenario.noise_power / 2.0);

    std::mt19937_64 rng(scenario.rng_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&](double sd) {
        const double re = normal(rng);
        const double im = normal(rng);
        return Complex(sd * re, sd * im);
    };

    CMatrix X(M, K);
    for (int k = 0; k < K; ++k) {
        CVector x = CVector::Zero(M);
        for (std::size_t l = 0; l < directions.size(); ++l) {
            Complex amp = draw(amplitudes[l]);
            if (l == 0 && overrides.fixed_soi_amplitude) {
                amp = *overrides.fixed_soi_amplitude;
            }
            x += amp * directions[l];
        }
        for (int m = 0; m < M; ++m) {
            x(m) += draw(noise_sd);
        }
        X.col(k) = x;
    }
    return SnapshotMatrix{std::move(X)};
}

} // namespace wsbf
