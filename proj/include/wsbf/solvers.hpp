// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wsbf/array_model.hpp"
#include "wsbf/cone_solver.hpp"
#include "wsbf/covariance.hpp"
#include "wsbf/weighting.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wsbf {

enum class Method { mvdr, sc, wsc, rmvb, rwsc };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);
inline constexpr Method kAllMethods[] = {Method::mvdr, Method::sc, Method::wsc, Method::rmvb,
                                         Method::rwsc};

struct SolverOptions {
    double gamma = 2.0; // penalty weight
    double p = 1.0;     // sparsity exponent, 0 < p <= 1
    int max_iterations = 100;
    double objective_tolerance = 1e-8; // relative change between IRLS iterates
    double irls_epsilon = 1e-8;        // initial smoothing of |u|^p
    double irls_epsilon_floor = 1e-12;
    int anneal_every = 10; // iterations between epsilon *= 0.1
    double diagonal_loading = 1e-6;
    bool extrapolate = true; // safeguarded over-relaxation of IRLS steps
    ConeSolverOptions cone;

    void validate() const;
};

struct SolverDiagnostics {
    int iterations = 0;
    double final_objective = 0.0;
    // mvdr/sc/wsc: |w^H a0 - 1|. rmvb/rwsc: min over the ellipsoid of
    // Re(w^H a) - 1, which must be nonnegative up to solver precision.
    double constraint_residual = 0.0;
    bool converged = true;
    // Smoothed objective after each IRLS iteration; entry 0 is the start point.
    std::vector<double> objective_history;
};

struct BeamformerWeights {
    CVector w;
    Method method = Method::mvdr;
    SolverDiagnostics diagnostics;
};

// {center + shape * u : ||u|| <= 1}; shape has full column rank or no columns.
struct Ellipsoid {
    CVector center;
    CMatrix shape;

    int rank() const { return static_cast<int>(shape.cols()); }
    // ||shape^+ (a - center)||: at most 1 for points of the set.
    double normalized_radius(const CVector& a) const;
    // Distance from a - center to the column space of shape.
    double off_space_residual(const CVector& a) const;
    // min over the set of Re(w^H a).
    double worst_case_gain(const CVector& w) const;
};

// Accepts either snapshots (estimated with sample_covariance) or a
// prebuilt covariance.
class CovarianceSource {
public:
    CovarianceSource(const CovarianceMatrix& R) : R_(R) {}
    CovarianceSource(const SnapshotMatrix& X) : R_(sample_covariance(X)) {}
    const CovarianceMatrix& get() const { return R_; }

private:
    CovarianceMatrix R_;
};

BeamformerWeights mvdr(const CovarianceSource& R, const CVector& a0,
                       double diagonal_loading = SolverOptions{}.diagonal_loading);

BeamformerWeights solve_sc(const CovarianceSource& R, const SteeringMatrix& A, const CVector& a0,
                           const SolverOptions& options = {});

BeamformerWeights solve_wsc(const CovarianceSource& R, const SteeringMatrix& A,
                            const WeightMatrix& Q, const CVector& a0,
                            const SolverOptions& options = {});

// Samples a(theta) over [theta0 - half_width, theta0 + half_width]; the
// center is the sample mean and the shape spans the principal components
// of the centered samples, scaled to the tightest ellipsoid of that shape
// containing the sampled arc.
Ellipsoid build_ellipsoid(const ArrayGeometry& geometry, double theta0_deg, double half_width_deg,
                          int num_samples);

BeamformerWeights solve_rmvb(const CovarianceSource& R, const Ellipsoid& ellipsoid,
                             const SolverOptions& options = {});

BeamformerWeights solve_rwsc(const CovarianceSource& R, const SteeringMatrix& A,
                             const WeightMatrix& Q, const Ellipsoid& ellipsoid,
                             const SolverOptions& options = {});

// Symmetrize and diagonally load; every solver applies this on entry.
CMatrix prepare_covariance(const CovarianceMatrix& R, double diagonal_loading);

} // namespace wsbf
