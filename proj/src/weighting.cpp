// SPDX-License-Identifier: Apache-2.0
#include "wsbf/weighting.hpp"

namespace wsbf {

RVector snm(const CMatrix& C) {
    if (C.cols() < 1) {
        throw DomainError("snm needs at least one column");
    }
    const CVector mean = C.rowwise().mean();
    RVector power = mean.cwiseAbs2();
    const double peak = power.size() > 0 ? power.maxCoeff() : 0.0;
    if (peak > 0.0) {
        power /= peak;
    }
    return power;
}

WeightMatrix build_q(const SteeringMatrix& A, const SnapshotMatrix& X) {
    if (A.data.rows() != X.data.rows()) {
        throw DomainError("steering matrix and snapshots disagree on element count");
    }
    RVector diag = snm(A.data.adjoint() * X.data);
    if (diag.size() == 0 || diag.maxCoeff() <= 0.0) {
        return WeightMatrix::identity(A.data.cols());
    }
    return WeightMatrix{std::move(diag)};
}

} // namespace wsbf
