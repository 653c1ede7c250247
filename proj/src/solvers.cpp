// SPDX-License-Identifier: Apache-2.0
#include "wsbf/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace wsbf {

std::string_view to_string(Method method) {
    switch (method) {
    case Method::mvdr: return "mvdr";
    case Method::sc: return "sc";
    case Method::wsc: return "wsc";
    case Method::rmvb: return "rmvb";
    case Method::rwsc: return "rwsc";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : kAllMethods) {
        if (to_string(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

void SolverOptions::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw DomainError("gamma must be nonnegative");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw DomainError("p must lie in (0, 1]");
    }
    if (max_iterations < 1) {
        throw DomainError("max_iterations must be positive");
    }
    if (!(objective_tolerance > 0.0)) {
        throw DomainError("objective_tolerance must be positive");
    }
    if (!(irls_epsilon > 0.0) || !(irls_epsilon_floor > 0.0) || irls_epsilon_floor > irls_epsilon) {
        throw DomainError("IRLS smoothing must satisfy 0 < floor <= epsilon");
    }
    if (anneal_every < 1) {
        throw DomainError("anneal_every must be positive");
    }
    if (!(diagonal_loading >= 0.0)) {
        throw DomainError("diagonal_loading must be nonnegative");
    }
}

CMatrix prepare_covariance(const CovarianceMatrix& R, double diagonal_loading) {
    if (R.data.rows() != R.data.cols() || R.data.rows() == 0) {
        throw DomainError("covariance must be a nonempty square matrix");
    }
    if (!R.data.allFinite()) {
        throw DomainError("covariance has non-finite entries");
    }
    return diagonal_load(CovarianceMatrix{hermitian_part(R.data)}, diagonal_loading).data;
}

namespace {

double quad_form(const CMatrix& R, const CVector& w) { return w.dot(R * w).real(); }

// w = R^-1 a / Re(a^H R^-1 a) for an already prepared R.
CVector distortionless_solve(const CMatrix& R, const CVector& a0) {
    Eigen::LLT<CMatrix> llt(R);
    if (llt.info() != Eigen::Success || llt.rcond() < 1e-15) {
        throw SolverError("covariance is numerically singular after loading");
    }
    const CVector Ria = llt.solve(a0);
    const double denom = a0.dot(Ria).real();
    if (!(denom > 0.0)) {
        throw SolverError("degenerate distortionless constraint");
    }
    return Ria / denom;
}

struct RobustInner {
    RVector c;
    RMatrix G;
    ConeSolverOptions options;
};

CVector robust_solve(const CMatrix& R, const RobustInner& inner, bool& converged) {
    const ConeSolution sol = solve_worst_case_gain(embed_hermitian(R), inner.c, inner.G, inner.options);
    converged = converged && sol.converged;
    return unembed(sol.x);
}

void check_dims(const CMatrix& R, Eigen::Index m, const char* what) {
    if (R.rows() != m) {
        throw DomainError(std::string(what) + " does not match the covariance dimension");
    }
}

// Majorize-minimize over the smoothed penalty gamma * sum (|b_i^H w|^2 + eps)^(p/2).
// Each step solves the constrained quadratic problem with effective
// covariance R + gamma B D B^H, D the current majorizer weights.
struct IrlsProblem {
    const CMatrix& R;
    const CMatrix& B;
    const SolverOptions& opt;
    std::function<CVector(const CMatrix&)> inner;
    std::function<bool(const CVector&)> feasible;
};

double smoothed_objective(const IrlsProblem& pr, const CVector& w, double eps) {
    const RVector u2 = (pr.B.adjoint() * w).cwiseAbs2();
    const double penalty = (u2.array() + eps).pow(pr.opt.p / 2.0).sum();
    return quad_form(pr.R, w) + pr.opt.gamma * penalty;
}

CVector run_irls(const IrlsProblem& pr, CVector w, SolverDiagnostics& diag) {
    const SolverOptions& opt = pr.opt;
    double eps = opt.irls_epsilon;
    double beta = 1.0;
    double f = smoothed_objective(pr, w, eps);
    diag.objective_history.assign(1, f);
    diag.iterations = 0;
    diag.converged = false;

    for (int it = 1; it <= opt.max_iterations; ++it) {
        if (it > 1 && (it - 1) % opt.anneal_every == 0) {
            eps = std::max(eps * 0.1, opt.irls_epsilon_floor);
        }
        const double f_start = smoothed_objective(pr, w, eps);
        const CVector u = pr.B.adjoint() * w;
        const RVector d = (u.cwiseAbs2().array() + eps).pow((opt.p - 2.0) / 2.0) * (opt.p / 2.0);
        const CMatrix R_eff = hermitian_part(pr.R + opt.gamma * pr.B * d.asDiagonal() * pr.B.adjoint());

        CVector w_next = pr.inner(R_eff);
        double f_next = smoothed_objective(pr, w_next, eps);
        if (!(f_next <= f_start + 1e-13 * std::max(1.0, std::abs(f_start))) || !w_next.allFinite()) {
            // Inner solve lost precision; the current iterate is already optimal
            // for this majorizer up to rounding.
            w_next = w;
            f_next = f_start;
        } else if (opt.extrapolate) {
            const CVector trial = w_next + beta * (w_next - w);
            const double f_trial = smoothed_objective(pr, trial, eps);
            if (f_trial < f_next && pr.feasible(trial)) {
                w_next = trial;
                f_next = f_trial;
                beta = std::min(beta * 2.0, 64.0);
            } else {
                beta = std::max(beta * 0.5, 0.25);
            }
        }

        w = std::move(w_next);
        diag.objective_history.push_back(f_next);
        diag.iterations = it;
        const double change = std::abs(f - f_next);
        f = f_next;
        if (change <= opt.objective_tolerance * std::max(std::abs(f_next), 1e-300)) {
            diag.converged = true;
            break;
        }
    }
    diag.final_objective = f;
    return w;
}

CMatrix weighted_penalty_matrix(const SteeringMatrix& A, const RVector& q) {
    if (q.size() != A.data.cols()) {
        throw DomainError("weight matrix size does not match the steering grid");
    }
    if ((q.array() < 0.0).any() || !q.allFinite()) {
        throw DomainError("weights must be finite and nonnegative");
    }
    return A.data * q.asDiagonal();
}

BeamformerWeights sparse_distortionless(const CovarianceSource& Rs, const CMatrix& B,
                                        const CVector& a0, const SolverOptions& opt, Method method) {
    opt.validate();
    const CMatrix R = prepare_covariance(Rs.get(), opt.diagonal_loading);
    check_dims(R, a0.size(), "look-direction vector");
    check_dims(R, B.rows(), "steering matrix");

    BeamformerWeights out;
    out.method = method;
    CVector w = distortionless_solve(R, a0);
    if (opt.gamma > 0.0 && B.cols() > 0 && B.cwiseAbs().maxCoeff() > 0.0) {
        const IrlsProblem pr{R, B, opt, [&](const CMatrix& Re) { return distortionless_solve(Re, a0); },
                             [](const CVector&) { return true; }};
        w = run_irls(pr, std::move(w), out.diagnostics);
    } else {
        out.diagnostics.final_objective = quad_form(R, w);
        out.diagnostics.objective_history = {out.diagnostics.final_objective};
    }
    out.diagnostics.constraint_residual = std::abs(w.dot(a0) - Complex(1.0, 0.0));
    out.w = std::move(w);
    return out;
}

RobustInner robust_inner(const Ellipsoid& ell, const SolverOptions& opt) {
    return RobustInner{embed_vector(ell.center), embed_adjoint_map(ell.shape), opt.cone};
}

} // namespace

BeamformerWeights mvdr(const CovarianceSource& Rs, const CVector& a0, double diagonal_loading) {
    const CMatrix R = prepare_covariance(Rs.get(), diagonal_loading);
    check_dims(R, a0.size(), "look-direction vector");
    if (a0.norm() == 0.0) {
        throw DomainError("look-direction vector is zero");
    }
    BeamformerWeights out;
    out.method = Method::mvdr;
    out.w = distortionless_solve(R, a0);
    out.diagnostics.final_objective = quad_form(R, out.w);
    out.diagnostics.objective_history = {out.diagnostics.final_objective};
    out.diagnostics.constraint_residual = std::abs(out.w.dot(a0) - Complex(1.0, 0.0));
    return out;
}

BeamformerWeights solve_sc(const CovarianceSource& R, const SteeringMatrix& A, const CVector& a0,
                           const SolverOptions& options) {
    return sparse_distortionless(R, A.data, a0, options, Method::sc);
}

BeamformerWeights solve_wsc(const CovarianceSource& R, const SteeringMatrix& A,
                            const WeightMatrix& Q, const CVector& a0, const SolverOptions& options) {
    return sparse_distortionless(R, weighted_penalty_matrix(A, Q.diag), a0, options, Method::wsc);
}

double Ellipsoid::normalized_radius(const CVector& a) const {
    if (shape.cols() == 0) {
        return 0.0;
    }
    const CVector u = shape.completeOrthogonalDecomposition().solve(CVector(a - center));
    return u.norm();
}

double Ellipsoid::off_space_residual(const CVector& a) const {
    const CVector diff = a - center;
    if (shape.cols() == 0) {
        return diff.norm();
    }
    const CVector u = shape.completeOrthogonalDecomposition().solve(diff);
    return (diff - shape * u).norm();
}

double Ellipsoid::worst_case_gain(const CVector& w) const {
    const double spread = shape.cols() > 0 ? (shape.adjoint() * w).norm() : 0.0;
    return w.dot(center).real() - spread;
}

Ellipsoid build_ellipsoid(const ArrayGeometry& geometry, double theta0_deg, double half_width_deg,
                          int num_samples) {
    if (num_samples < 2) {
        throw DomainError("ellipsoid needs at least two samples");
    }
    if (!(half_width_deg >= 0.0) || !std::isfinite(half_width_deg)) {
        throw DomainError("ellipsoid half-width must be nonnegative");
    }
    const int M = geometry.num_elements();
    if (half_width_deg == 0.0) {
        return Ellipsoid{steering_vector(geometry, theta0_deg), CMatrix(M, 0)};
    }

    auto arc = [&](int count) {
        CMatrix S(M, count);
        for (int k = 0; k < count; ++k) {
            const double theta = theta0_deg - half_width_deg +
                                 2.0 * half_width_deg * static_cast<double>(k) / (count - 1);
            S.col(k) = steering_vector(geometry, theta);
        }
        return S;
    };

    const CMatrix samples = arc(num_samples);
    const CVector center = samples.rowwise().mean();
    const CMatrix centered = samples.colwise() - center;

    Eigen::JacobiSVD<CMatrix> svd(centered, Eigen::ComputeThinU);
    const RVector& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > 1e-9 * sv(0) && sv(rank) > 1e-14) {
        ++rank;
    }
    if (rank == 0) {
        return Ellipsoid{center, CMatrix(M, 0)};
    }
    const CMatrix basis = svd.matrixU().leftCols(rank);
    const RVector sigma = sv.head(rank);

    // Tightest scaling of the principal axes that holds every sample, and
    // every point of a 16x refinement of the arc between them.
    const CMatrix dense = arc(16 * (num_samples - 1) + 1);
    double scale = 0.0;
    for (const CMatrix* pts : {&samples, &dense}) {
        const CMatrix coords = (basis.adjoint() * (pts->colwise() - center)).array().colwise() /
                               sigma.cast<Complex>().array();
        scale = std::max(scale, coords.colwise().norm().maxCoeff());
    }
    CMatrix shape = basis * (sigma * scale).cast<Complex>().asDiagonal();
    return Ellipsoid{center, std::move(shape)};
}

BeamformerWeights solve_rmvb(const CovarianceSource& Rs, const Ellipsoid& ellipsoid,
                             const SolverOptions& options) {
    options.validate();
    const CMatrix R = prepare_covariance(Rs.get(), options.diagonal_loading);
    check_dims(R, ellipsoid.center.size(), "ellipsoid");

    BeamformerWeights out;
    out.method = Method::rmvb;
    const ConeSolution sol = solve_worst_case_gain(
        embed_hermitian(R), embed_vector(ellipsoid.center), embed_adjoint_map(ellipsoid.shape),
        options.cone);
    out.w = unembed(sol.x);
    out.diagnostics.iterations = sol.stages;
    out.diagnostics.converged = sol.converged;
    out.diagnostics.final_objective = quad_form(R, out.w);
    out.diagnostics.objective_history = {out.diagnostics.final_objective};
    out.diagnostics.constraint_residual = ellipsoid.worst_case_gain(out.w) - 1.0;
    return out;
}

BeamformerWeights solve_rwsc(const CovarianceSource& Rs, const SteeringMatrix& A,
                             const WeightMatrix& Q, const Ellipsoid& ellipsoid,
                             const SolverOptions& options) {
    options.validate();
    const CMatrix R = prepare_covariance(Rs.get(), options.diagonal_loading);
    check_dims(R, ellipsoid.center.size(), "ellipsoid");
    const CMatrix B = weighted_penalty_matrix(A, Q.diag);
    check_dims(R, B.rows(), "steering matrix");

    const RobustInner inner = robust_inner(ellipsoid, options);
    bool cone_ok = true;
    BeamformerWeights out;
    out.method = Method::rwsc;
    CVector w = robust_solve(R, inner, cone_ok);
    if (options.gamma > 0.0 && B.cols() > 0 && B.cwiseAbs().maxCoeff() > 0.0) {
        const IrlsProblem pr{R, B, options,
                             [&](const CMatrix& Re) { return robust_solve(Re, inner, cone_ok); },
                             [&](const CVector& v) { return ellipsoid.worst_case_gain(v) >= 1.0 - 1e-12; }};
        w = run_irls(pr, std::move(w), out.diagnostics);
    } else {
        out.diagnostics.final_objective = quad_form(R, w);
        out.diagnostics.objective_history = {out.diagnostics.final_objective};
    }
    out.diagnostics.converged = out.diagnostics.converged && cone_ok;
    out.diagnostics.constraint_residual = ellipsoid.worst_case_gain(w) - 1.0;
    out.w = std::move(w);
    return out;
}

} // namespace wsbf
