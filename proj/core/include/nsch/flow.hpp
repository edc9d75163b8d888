#pragma once

#include <utility>

#include "nsch/material.hpp"
#include "nsch/phasefield.hpp"
#include "nsch/types.hpp"

namespace nsch {

// Flow state: volume-averaged face velocity with no-slip boundary, the
// rewritten pressure g (mean zero), and the cell density rho(phi).
struct FlowState {
    FaceField v;
    ScalarField g;
    ScalarField rho;
    double t = 0.0;

    FlowState(const Grid& gr) : v(gr), g(gr), rho(gr) {}
};

struct NsOptions {
    double tol_visc = 1e-10;    // relative residual of the viscous solve
    double tol_poisson = 1e-10; // relative residual of the projection solve
    int max_iter_factor = 10;
    bool include_bj = true;     // include the beta*J momentum flux term
    double cfl_safety = 0.5;    // advective CFL fraction
};

// Face force -sqrt(a(phi)) * lap(A(phi)) * grad(phi): the cell scalar is
// averaged to faces, the gradient is native there. Boundary faces 0.
FaceField capillary_force(const Grid& g, const ScalarField& phi,
                          const MaterialModel& M);

// Advective face mass flux rho_face * v + beta * J. The beta term is skipped
// entirely when beta == 0 or include_bj is false, so matched-density runs are
// bitwise identical to a build without the term.
FaceField mass_flux(const Grid& g, const ScalarField& rho, const FaceField& v,
                    const FaceField& J, double beta, bool include_bj);

// Conservative first-order upwind divergence of the momentum flux G*v on the
// staggered control volumes of each velocity component.
FaceField advect_momentum(const Grid& g, const FaceField& G,
                          const FaceField& v);

// int 2 eta(phi) |D v|^2: the quadratic form of the discrete viscous
// operator, sum_c 2 eta (exx^2 + eyy^2) hx hy plus sum_corners
// 4 eta exy^2 hx hy with no-slip ghost strains at the walls.
double viscous_dissipation(const Grid& g, const FaceField& v,
                           const ScalarField& phi, const MaterialModel& M);

// Semi-implicit predictor: explicit conservative momentum advection by
// mass_flux(rho^n, v^n, J), explicit capillary force and previous pressure
// gradient, implicit viscous term solved by preconditioned CG. Coefficient
// fields (density in the time term, viscosity) are taken at phi_coef.
FaceField momentum_predictor(const Grid& g, const FlowState& flow,
                             const PhaseState& phase,
                             const ScalarField& phi_coef, double dt,
                             const MaterialModel& M, const NsOptions& opt);

// Pressure projection: solves div((1/rho_face) grad dg) = div(vstar)/dt and
// returns (vstar - dt/rho_face * grad dg, dg) with mean(dg) = 0.
std::pair<FaceField, ScalarField> project(const Grid& g,
                                          const FaceField& vstar,
                                          const ScalarField& rho, double dt,
                                          double tol,
                                          int max_iter_factor = 10);

// Full Navier-Stokes step (predictor + incremental projection); density and
// viscosity are updated to phi_next, the phase state supplies the forward
// flux J for the beta*J momentum transport.
FlowState step_ns(const Grid& g, const FlowState& flow,
                  const PhaseState& phase, const ScalarField& phi_next,
                  double dt, const MaterialModel& M, const NsOptions& opt);

}  // namespace nsch
