// SPDX-License-Identifier: Apache-2.0
#include "wsbf/covariance.hpp"

namespace wsbf {

CMatrix hermitian_part(const CMatrix& A) {
    CMatrix H = 0.5 * (A + A.adjoint());
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
        H(i, i) = Complex(H(i, i).real(), 0.0);
    }
    return H;
}

CovarianceMatrix sample_covariance(const SnapshotMatrix& X) {
    const auto K = X.data.cols();
    if (K < 1) {
        throw DomainError("sample covariance needs at least one snapshot");
    }
    CMatrix R = X.data * X.data.adjoint() / static_cast<double>(K);
    return CovarianceMatrix{hermitian_part(R)};
}

CovarianceMatrix diagonal_load(const CovarianceMatrix& R, double epsilon) {
    if (!(epsilon >= 0.0)) {
        throw DomainError("diagonal loading must be nonnegative");
    }
    if (R.data.rows() != R.data.cols()) {
        throw DomainError("covariance must be square");
    }
    const double M = static_cast<double>(R.data.rows());
    const double level = epsilon * R.data.trace().real() / M;
    CMatrix loaded = R.data;
    loaded.diagonal().array() += Complex(level, 0.0);
    return CovarianceMatrix{std::move(loaded)};
}

CovarianceMatrix analytic_covariance(const Scenario& scenario, const ArrayGeometry& geometry) {
    scenario.validate();
    const int M = geometry.num_elements();
    CMatrix R = scenario.noise_power * CMatrix::Identity(M, M);
    auto add = [&](double doa, double db) {
        const CVector a = steering_vector(geometry, doa);
        R += scenario.noise_power * db_to_linear(db) * (a * a.adjoint());
    };
    add(scenario.soi_doa_deg, scenario.soi_snr_db);
    for (const auto& jammer : scenario.interferers) {
        add(jammer.doa_deg, jammer.inr_db);
    }
    return CovarianceMatrix{hermitian_part(R)};
}

} // namespace wsbf
