#pragma once

#include "nsch/material.hpp"
#include "nsch/types.hpp"

namespace nsch {

// Cahn-Hilliard state. mu, J and Jhat describe the flux that produced phi:
// immediately after a step they hold the driving potential of that step
// (evaluated with the pre-step face mobility); for a freshly initialized
// state they are the instantaneous evaluations at phi.
struct PhaseState {
    ScalarField phi;
    ScalarField mu;
    FaceField J;
    FaceField Jhat;
    double t = 0.0;

    PhaseState(const Grid& g) : phi(g), mu(g), J(g), Jhat(g) {}
};

enum class ChScheme { Stabilized, Explicit };

struct ChStepOptions {
    ChScheme scheme = ChScheme::Stabilized;
    double tol = 1e-12;          // relative residual of the implicit solve
    int max_iter_factor = 10;    // iteration cap = factor * nx * ny
    double stab_S = -1.0;        // explicit override; < 0 derives S from M
    double phi0_max_abs = 1.0;   // sup-norm envelope of the initial data
    double c_stab = 0.05;        // explicit-scheme fourth-order CFL constant
};

// mu = psi_eps'(clamped phi) - sqrt(a(phi)) * laplace(A(phi)).
ScalarField chemical_potential(const Grid& g, const ScalarField& phi,
                               const MaterialModel& M);

// Face mobility m_eps((phi_L + phi_R)/2); boundary-normal faces 0.
FaceField mobility_face(const Grid& g, const ScalarField& phi,
                        const MaterialModel& M);

// J = -m_face grad(mu), Jhat = -sqrt(m_face) grad(mu); J = sqrt(m_face)*Jhat
// holds exactly per face because J is built from Jhat.
void flux(const Grid& g, const ScalarField& phi, const ScalarField& mu,
          const MaterialModel& M, FaceField& J, FaceField& Jhat);

// State with instantaneous mu/J/Jhat at phi.
PhaseState phase_state_instant(const Grid& g, ScalarField phi,
                               const MaterialModel& M, double t);

// One Cahn-Hilliard step of d_t phi + v.grad phi = -div J. The returned
// state's mu/J/Jhat are the forward quantities that moved phi (face mobility
// from the pre-step phi), so the pair (pre-step phi, returned mu) reproduces
// the step's dissipation exactly.
PhaseState step_ch(const Grid& g, const PhaseState& s, const FaceField& v,
                   double dt, const MaterialModel& M, const ChStepOptions& opt);

// |LHS - RHS| of the discrete weak flux identity
//   sum_faces J.eta = sum_cells mu div(m_avg eta)
// with value-averaged face mobility on the right-hand side.
double weak_flux_residual(const Grid& g, const PhaseState& s,
                          const MaterialModel& M, const FaceField& eta);

}  // namespace nsch
