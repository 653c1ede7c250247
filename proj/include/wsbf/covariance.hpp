// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wsbf/array_model.hpp"

namespace wsbf {

// Spatial covariance R_x; Hermitian positive semidefinite.
struct CovarianceMatrix {
    CMatrix data;

    int size() const { return static_cast<int>(data.rows()); }
};

// (1/K) X X^H, symmetrized so the result is exactly Hermitian.
CovarianceMatrix sample_covariance(const SnapshotMatrix& X);

// R + epsilon * tr(R)/M * I.
CovarianceMatrix diagonal_load(const CovarianceMatrix& R, double epsilon);

// sigma^2 I + sum_l p_l a(theta_l) a(theta_l)^H for the scenario's true powers.
CovarianceMatrix analytic_covariance(const Scenario& scenario, const ArrayGeometry& geometry);

CMatrix hermitian_part(const CMatrix& A);

} // namespace wsbf
