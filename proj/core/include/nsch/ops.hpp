#pragma once

#include "nsch/types.hpp"

namespace nsch {

// Two-point difference gradient from cell centers to faces. Boundary-normal
// faces get exactly 0, which encodes the homogeneous Neumann condition and
// makes grad/div exact adjoints in the hx*hy-weighted inner products.
FaceField grad_cc_to_face(const Grid& g, const ScalarField& f);

// Discrete divergence of a face field back to cell centers:
// (F_E - F_W)/hx + (F_N - F_S)/hy.
ScalarField div_face_to_cc(const Grid& g, const FaceField& F);

// 5-point Neumann Laplacian via mirrored ghost cells. Computed with the
// same floating-point expressions as div_face_to_cc(grad_cc_to_face(f)),
// so the operator identity holds bitwise.
ScalarField laplace_neumann(const Grid& g, const ScalarField& f);

// Conservative first-order upwind divergence of F * phi_upwind. Boundary
// faces contribute zero flux, so the cell sum telescopes to zero exactly.
ScalarField advect_upwind(const Grid& g, const ScalarField& phi,
                          const FaceField& F);

// Weighted inner products matching the quadrature used everywhere else.
double inner_cc(const Grid& g, const ScalarField& a, const ScalarField& b);
double inner_face(const Grid& g, const FaceField& a, const FaceField& b);

}  // namespace nsch
