// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wsbf/types.hpp"

namespace wsbf {

// Log-barrier interior-point solver for the single-cone problem
//
//     minimize    x^T P x
//     subject to  c^T x - ||G x||_2 >= 1
//
// with P symmetric positive definite. This is the real-composite form of
// the worst-case unit-gain constraint over an ellipsoid of steering
// vectors. G may have zero rows (point ellipsoid).
struct ConeSolverOptions {
    double initial_t = 1.0;
    double t_growth = 10.0;
    double newton_tolerance = 1e-10;
    double gap_tolerance = 1e-9;
    int max_newton_steps = 200;
    int max_stages = 40;
    int max_polish_steps = 30;
};

struct ConeSolution {
    RVector x;
    double objective = 0.0;
    double margin = 0.0; // c^T x - ||G x|| - 1
    int stages = 0;
    int newton_steps = 0;
    bool converged = false;
};

// Throws SolverError when the constraint set is empty or P is not
// positive definite.
ConeSolution solve_worst_case_gain(const RMatrix& P, const RVector& c, const RMatrix& G,
                                   const ConeSolverOptions& options = {});

// Real-composite embeddings of complex quantities, x = [Re w; Im w].
RMatrix embed_hermitian(const CMatrix& H);        // w^H H w = x^T P x
RVector embed_vector(const CVector& c);           // Re(w^H c) = c~^T x
RMatrix embed_adjoint_map(const CMatrix& E);      // ||E^H w|| = ||G x||
CVector unembed(const RVector& x);

} // namespace wsbf
