#pragma once

#include "nsch/types.hpp"

namespace nsch {

// Applies f -> div(beta_face * grad f) with the Neumann boundary encoded in
// grad (boundary-normal faces 0).
ScalarField apply_varcoef_laplacian(const Grid& g, const FaceField& beta,
                                    const ScalarField& f);

// Solves div(beta_face * grad f) = rhs with homogeneous Neumann boundary,
// beta_face >= 0 on interior faces, by preconditioned conjugate gradients
// (DCT constant-coefficient preconditioner). The result has mean(f) = 0.
//
// tol is the relative 2-norm residual reduction; the iteration cap is
// max_iter_factor * nx * ny. Throws IncompatibleRHS when |mean(rhs)| exceeds
// 1e-10 * rms(rhs), NonConvergence (with iterations and final residual) on
// budget exhaustion.
ScalarField solve_poisson_varcoef(const Grid& g, const FaceField& beta,
                                  const ScalarField& rhs, double tol,
                                  int max_iter_factor = 10);

}  // namespace nsch
