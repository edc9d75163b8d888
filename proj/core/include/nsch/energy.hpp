#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nsch/flow.hpp"
#include "nsch/material.hpp"
#include "nsch/phasefield.hpp"
#include "nsch/types.hpp"

namespace nsch {

// One row of the time series. The driver pairs row n with the forward flux
// of step n -> n+1 (the last row of a run is fully instantaneous), and owns
// the two cumulative columns, which integrate [0, t_n) by the left-endpoint
// rule so that row 0 shows 0.
struct EnergyReport {
    double t = 0.0;
    double e_kin = 0.0;       // 1/2 sum_faces rho_face v^2 hx hy
    double e_free = 0.0;      // sum psi_eps(phi) + 1/2 |grad A(phi)|^2
    double e_tot = 0.0;       // e_kin + e_free, exact sum
    double d_visc = 0.0;      // viscous quadratic form at (v, phi)
    double d_flux = 0.0;      // sum_faces |Jhat|^2 hx hy
    double mass = 0.0;        // mean phi
    double g_eps_int = 0.0;   // sum G_eps(phi) hx hy
    double lapA_sq_cum = 0.0;
    double psi_ln_prime_sq_cum = 0.0;
    double phi_min = 0.0;
    double phi_max = 0.0;
};

// All instantaneous functionals of (flow, phase); cumulative columns are
// left at 0. Accumulations are serial so results are independent of the
// thread cap.
EnergyReport report(const Grid& g, const FlowState& flow,
                    const PhaseState& phase, const MaterialModel& M);

// Integrands of the two cumulative columns.
double lap_a_sq(const Grid& g, const ScalarField& phi,
                const MaterialModel& M);
double psi_ln_prime_sq(const Grid& g, const ScalarField& phi,
                       const MaterialModel& M);

struct InequalityCheck {
    bool pass = false;
    double slack = 0.0;  // signed; <= tol passes
};

// slack = e_tot(t) + sum_{i in [s,t)} (t_{i+1} - t_i)(d_visc_i + d_flux_i)
//         - e_tot(s).
// With every-step history and forward rates this telescopes the per-step
// scheme inequality exactly.
InequalityCheck check_energy_inequality(
    const std::vector<EnergyReport>& history, std::size_t s_idx,
    std::size_t t_idx, double tol);

// Per-eps trajectory summary for the uniformity table.
struct SweepSummary {
    double eps = 0.0;
    double sup_e_tot = 0.0;
    double lapA_sq_cum = 0.0;
    double eps3_psiln_sq = 0.0;  // eps^3 * cumulative |psi_ln'|^2
    double jhat_sq_cum = 0.0;    // cumulative d_flux
};

struct BoundsVerdict {
    bool pass = false;
    std::string detail;  // per-quantity violations, empty when pass
};

// Uniformity heuristic: every quantity must stay within `factor` of its
// value at the largest eps (the first row). Requires >= 3 rows.
BoundsVerdict check_uniform_bounds(const std::vector<SweepSummary>& rows,
                                   double factor = 10.0);

}  // namespace nsch
