// SPDX-License-Identifier: Apache-2.0
#include "wsbf/cone_solver.hpp"

#include <cmath>
#include <limits>

namespace wsbf {

RMatrix embed_hermitian(const CMatrix& H) {
    const auto n = H.rows();
    RMatrix P(2 * n, 2 * n);
    P.topLeftCorner(n, n) = H.real();
    P.topRightCorner(n, n) = -H.imag();
    P.bottomLeftCorner(n, n) = H.imag();
    P.bottomRightCorner(n, n) = H.real();
    return 0.5 * (P + P.transpose());
}

RVector embed_vector(const CVector& c) {
    RVector out(2 * c.size());
    out << c.real(), c.imag();
    return out;
}

RMatrix embed_adjoint_map(const CMatrix& E) {
    const auto n = E.rows();
    const auto r = E.cols();
    RMatrix G(2 * r, 2 * n);
    G.topLeftCorner(r, n) = E.real().transpose();
    G.topRightCorner(r, n) = E.imag().transpose();
    G.bottomLeftCorner(r, n) = -E.imag().transpose();
    G.bottomRightCorner(r, n) = E.real().transpose();
    return G;
}

CVector unembed(const RVector& x) {
    const auto n = x.size() / 2;
    CVector w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        w(i) = Complex(x(i), x(n + i));
    }
    return w;
}

namespace {

struct Problem {
    const RMatrix& P;
    const RVector& c;
    const RMatrix& G;

    double margin(const RVector& x) const {
        const double cone = G.rows() > 0 ? (G * x).norm() : 0.0;
        return c.dot(x) - cone - 1.0;
    }
};

// Barrier objective t x'Px - log(s^2 - |v|^2); +inf outside the domain.
double barrier_value(const Problem& pr, double t, const RVector& x) {
    const double s = pr.c.dot(x) - 1.0;
    const double vv = pr.G.rows() > 0 ? (pr.G * x).squaredNorm() : 0.0;
    const double phi = s * s - vv;
    if (!(s > 0.0) || !(phi > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return t * x.dot(pr.P * x) - std::log(phi);
}

RVector feasible_start(const Problem& pr) {
    const Eigen::Index n = pr.c.size();
    std::vector<RVector> candidates;
    candidates.push_back(pr.c);
    if (pr.G.rows() > 0) {
        const RMatrix GtG = pr.G.transpose() * pr.G;
        Eigen::SelfAdjointEigenSolver<RMatrix> eig(GtG);
        const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
        RVector inv = RVector::Zero(n);
        RMatrix range_basis(n, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (eig.eigenvalues()(i) > 1e-12 * top) {
                inv(i) = 1.0 / eig.eigenvalues()(i);
                range_basis.conservativeResize(n, range_basis.cols() + 1);
                range_basis.col(range_basis.cols() - 1) = eig.eigenvectors().col(i);
            }
        }
        // Component of c outside the row space of G: the cone term vanishes on it.
        candidates.push_back(pr.c - range_basis * (range_basis.transpose() * pr.c));
        // Pseudo-inverse direction, feasible whenever c lies in the row space
        // and the origin is outside the ellipsoid.
        candidates.push_back(eig.eigenvectors() * inv.asDiagonal() *
                             (eig.eigenvectors().transpose() * pr.c));
    }
    for (const auto& d : candidates) {
        const double gain = pr.c.dot(d) - (pr.G.rows() > 0 ? (pr.G * d).norm() : 0.0);
        if (gain > 1e-12 * std::max(1.0, d.norm() * pr.c.norm())) {
            return d * (2.0 / gain);
        }
    }
    throw SolverError("worst-case gain constraint is infeasible: the uncertainty set reaches the origin");
}

// Newton iterations on the barrier objective for fixed t.
bool centering(const Problem& pr, double t, RVector& x, const ConeSolverOptions& opt,
               int& steps) {
    for (int it = 0; it < opt.max_newton_steps; ++it) {
        const double s = pr.c.dot(x) - 1.0;
        RVector v = pr.G.rows() > 0 ? RVector(pr.G * x) : RVector::Zero(0);
        const double phi = s * s - v.squaredNorm();
        RVector dphi = 2.0 * s * pr.c;
        RMatrix hphi = 2.0 * pr.c * pr.c.transpose();
        if (pr.G.rows() > 0) {
            dphi -= 2.0 * pr.G.transpose() * v;
            hphi -= 2.0 * pr.G.transpose() * pr.G;
        }
        const RVector grad = 2.0 * t * pr.P * x - dphi / phi;
        RMatrix hess = 2.0 * t * pr.P + dphi * dphi.transpose() / (phi * phi) - hphi / phi;
        hess = 0.5 * (hess + hess.transpose());

        Eigen::LDLT<RMatrix> ldlt(hess);
        RVector dx = ldlt.solve(-grad);
        if (ldlt.info() != Eigen::Success || !dx.allFinite()) {
            dx = hess.fullPivLu().solve(-grad);
        }
        const double decrement = -grad.dot(dx);
        ++steps;
        if (!std::isfinite(decrement)) {
            return false;
        }
        // decrement / 2 bounds the suboptimality of the scaled barrier, t x^T P x.
        const double scale = std::max(1.0, t * x.dot(pr.P * x));
        if (decrement / 2.0 <= opt.newton_tolerance * scale) {
            return true;
        }
        const double f0 = barrier_value(pr, t, x);
        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            const RVector trial = x + alpha * dx;
            const double f1 = barrier_value(pr, t, trial);
            if (f1 <= f0 - 0.25 * alpha * decrement) {
                x = trial;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) {
            // No further progress is representable at this precision.
            return decrement / 2.0 <= 1e3 * opt.newton_tolerance * std::max(1.0, std::abs(f0));
        }
    }
    return false;
}

// Newton on the KKT system with the cone constraint held active:
// 2 P x = lambda grad g(x), g(x) = 1.
void polish(const Problem& pr, RVector& x, int max_steps) {
    const Eigen::Index n = x.size();
    auto kkt = [&](const RVector& xv, double lambda, RVector& grad_g, RMatrix& hess_g) {
        grad_g = pr.c;
        hess_g = RMatrix::Zero(n, n);
        if (pr.G.rows() > 0) {
            const RVector v = pr.G * xv;
            const double nv = v.norm();
            if (nv > 1e-14 * std::max(1.0, xv.norm())) {
                const RVector Gtv = pr.G.transpose() * v;
                grad_g -= Gtv / nv;
                hess_g = -(pr.G.transpose() * pr.G) / nv + Gtv * Gtv.transpose() / (nv * nv * nv);
            }
        }
        RVector res(n + 1);
        res.head(n) = 2.0 * pr.P * xv - lambda * grad_g;
        res(n) = pr.c.dot(xv) - (pr.G.rows() > 0 ? (pr.G * xv).norm() : 0.0) - 1.0;
        return res;
    };

    RVector grad_g;
    RMatrix hess_g;
    kkt(x, 0.0, grad_g, hess_g);
    const RVector Px2 = 2.0 * pr.P * x;
    double lambda = grad_g.dot(Px2) / std::max(grad_g.squaredNorm(), 1e-300);
    RVector res = kkt(x, lambda, grad_g, hess_g);
    double best = res.norm();

    for (int it = 0; it < max_steps && best > 0.0; ++it) {
        RMatrix J = RMatrix::Zero(n + 1, n + 1);
        J.topLeftCorner(n, n) = 2.0 * pr.P - lambda * hess_g;
        J.topRightCorner(n, 1) = -grad_g;
        J.bottomLeftCorner(1, n) = grad_g.transpose();
        const RVector step = J.fullPivLu().solve(-res);
        if (!step.allFinite()) {
            return;
        }
        const RVector x_new = x + step.head(n);
        const double lambda_new = lambda + step(n);
        RVector g2;
        RMatrix h2;
        const RVector res_new = kkt(x_new, lambda_new, g2, h2);
        if (!(res_new.norm() < best)) {
            return;
        }
        x = x_new;
        lambda = lambda_new;
        res = res_new;
        grad_g = g2;
        hess_g = h2;
        best = res_new.norm();
    }
}

} // namespace

ConeSolution solve_worst_case_gain(const RMatrix& P, const RVector& c, const RMatrix& G,
                                   const ConeSolverOptions& options) {
    const Eigen::Index n = c.size();
    if (P.rows() != n || P.cols() != n || (G.rows() > 0 && G.cols() != n)) {
        throw DomainError("cone problem dimensions disagree");
    }
    Eigen::LLT<RMatrix> llt(P);
    if (llt.info() != Eigen::Success) {
        throw SolverError("quadratic form is not positive definite");
    }
    const Problem pr{P, c, G};

    ConeSolution sol;
    sol.x = feasible_start(pr);
    sol.converged = true;

    double t = options.initial_t;
    const double nu = 2.0; // barrier parameter of one second-order cone
    for (int stage = 0; stage < options.max_stages; ++stage) {
        const bool ok = centering(pr, t, sol.x, options, sol.newton_steps);
        ++sol.stages;
        if (!ok) {
            sol.converged = false;
        }
        if (nu / t <= options.gap_tolerance) {
            break;
        }
        t *= options.t_growth;
    }
    if (nu / t > options.gap_tolerance) {
        sol.converged = false;
    }

    const RVector before = sol.x;
    polish(pr, sol.x, options.max_polish_steps);
    if (pr.margin(sol.x) < -1e-12 || !sol.x.allFinite()) {
        sol.x = before;
    }
    sol.objective = sol.x.dot(P * sol.x);
    sol.margin = pr.margin(sol.x);
    return sol;
}

} // namespace wsbf
