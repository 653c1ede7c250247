// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wsbf/array_model.hpp"

namespace wsbf {

// Diagonal of the interference weighting matrix Q, one entry per grid
// direction. Entries lie in [0, 1] with unit maximum unless all are zero.
struct WeightMatrix {
    RVector diag;

    static WeightMatrix identity(Eigen::Index n) { return WeightMatrix{RVector::Ones(n)}; }
    static WeightMatrix zero(Eigen::Index n) { return WeightMatrix{RVector::Zero(n)}; }
};

// Squared modulus of each row's complex mean over snapshots, scaled so the
// largest entry is 1. An all-zero input gives the all-zero vector.
RVector snm(const CMatrix& C);

// Q = diag[snm(A^H X)]. When the data carries no energy (snm is all zero)
// the identity is returned so the weighted penalty falls back to the
// unweighted one.
WeightMatrix build_q(const SteeringMatrix& A, const SnapshotMatrix& X);

} // namespace wsbf
