#pragma once

#include <string>
#include <vector>

#include "nsch/energy.hpp"
#include "nsch/sim.hpp"

namespace nsch {

// Exact column headers of the two CSV artifacts (no line terminator).
inline constexpr const char* kSeriesHeader =
    "t,e_kin,e_free,e_tot,d_visc,d_flux,mass,g_eps_int,lapA_sq_cum,"
    "psi_ln_sq_cum,phi_min,phi_max";
inline constexpr const char* kSweepHeader =
    "eps,sup_e_tot,lapA_sq_cum,eps3_psiln_sq,jhat_sq_cum,dist_phi_prev,"
    "dist_gradA_prev";

// One CRLF-terminated row, every value as %.16e (17 significant digits,
// round-trip exact).
std::string series_row(const EnergyReport& r);
std::string sweep_row(const SweepRow& r);

// Parses a series.csv written by this tool; throws CorruptSnapshot on a
// header mismatch or malformed row.
std::vector<EnergyReport> read_series_csv(const std::string& path);

}  // namespace nsch
