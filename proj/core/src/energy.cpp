#include "nsch/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsch/errors.hpp"
#include "nsch/ops.hpp"

namespace nsch {

namespace {

ScalarField a_param_field(const Grid& g, const ScalarField& phi,
                          const MaterialModel& M) {
    ScalarField A(g);
    if (M.a_const()) {
        const double r = std::sqrt(M.params().a0);
        for (size_t k = 0; k < phi.v.size(); ++k) A.v[k] = r * phi.v[k];
    } else {
        for (size_t k = 0; k < phi.v.size(); ++k) A.v[k] = M.A_of(phi.v[k]);
    }
    return A;
}

}  // namespace

EnergyReport report(const Grid& g, const FlowState& flow,
                    const PhaseState& phase, const MaterialModel& M) {
    EnergyReport r;
    r.t = phase.t;
    const double cm = g.cell_measure();

    long double ek = 0.0L;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double rf = 0.5 * (flow.rho(i - 1, j) + flow.rho(i, j));
            ek += 0.5L * rf * static_cast<long double>(flow.v.fx(i, j)) *
                  flow.v.fx(i, j);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double rf = 0.5 * (flow.rho(i, j - 1) + flow.rho(i, j));
            ek += 0.5L * rf * static_cast<long double>(flow.v.fy(i, j)) *
                  flow.v.fy(i, j);
        }
    r.e_kin = static_cast<double>(ek) * cm;

    long double ef = 0.0L;
    for (size_t k = 0; k < phase.phi.v.size(); ++k) {
        const double s = std::clamp(phase.phi.v[k], -1.0, 1.0);
        ef += M.psi_eps(s);
    }
    const ScalarField A = a_param_field(g, phase.phi, M);
    const FaceField gA = grad_cc_to_face(g, A);
    long double eg = 0.0L;
    for (double x : gA.x) eg += 0.5L * static_cast<long double>(x) * x;
    for (double x : gA.y) eg += 0.5L * static_cast<long double>(x) * x;
    r.e_free = static_cast<double>(ef + eg) * cm;
    r.e_tot = r.e_kin + r.e_free;

    r.d_visc = viscous_dissipation(g, flow.v, phase.phi, M);

    long double df = 0.0L;
    for (double x : phase.Jhat.x) df += static_cast<long double>(x) * x;
    for (double x : phase.Jhat.y) df += static_cast<long double>(x) * x;
    r.d_flux = static_cast<double>(df) * cm;

    r.mass = mean(phase.phi);

    long double ge = 0.0L;
    for (double s : phase.phi.v) ge += M.entropy_G_eps(std::clamp(s, -1.0, 1.0));
    r.g_eps_int = static_cast<double>(ge) * cm;

    r.phi_min = *std::min_element(phase.phi.v.begin(), phase.phi.v.end());
    r.phi_max = *std::max_element(phase.phi.v.begin(), phase.phi.v.end());
    return r;
}

double lap_a_sq(const Grid& g, const ScalarField& phi,
                const MaterialModel& M) {
    const ScalarField A = a_param_field(g, phi, M);
    const ScalarField lap = laplace_neumann(g, A);
    long double s = 0.0L;
    for (double x : lap.v) s += static_cast<long double>(x) * x;
    return static_cast<double>(s) * g.cell_measure();
}

double psi_ln_prime_sq(const Grid& g, const ScalarField& phi,
                       const MaterialModel& M) {
    // Same clamp as the solver when eps > 0; at eps = 0 the solver never
    // touches psi_ln, so a fixed guard keeps the diagnostic finite.
    const double lim =
        M.eps() > 0.0 ? 1.0 - M.delta_clip() : 1.0 - 1e-12;
    long double s = 0.0L;
    for (double x : phi.v) {
        const double d = M.psi_ln_prime(std::clamp(x, -lim, lim));
        s += static_cast<long double>(d) * d;
    }
    return static_cast<double>(s) * g.cell_measure();
}

InequalityCheck check_energy_inequality(
    const std::vector<EnergyReport>& history, std::size_t s_idx,
    std::size_t t_idx, double tol) {
    if (s_idx > t_idx || t_idx >= history.size())
        throw ConfigError("check_energy_inequality: bad index pair");
    long double diss = 0.0L;
    for (std::size_t i = s_idx; i < t_idx; ++i) {
        const double dt = history[i + 1].t - history[i].t;
        diss += static_cast<long double>(dt) *
                (history[i].d_visc + history[i].d_flux);
    }
    InequalityCheck c;
    c.slack = static_cast<double>(history[t_idx].e_tot - history[s_idx].e_tot +
                                  diss);
    c.pass = c.slack <= tol;
    return c;
}

BoundsVerdict check_uniform_bounds(const std::vector<SweepSummary>& rows,
                                   double factor) {
    if (rows.size() < 3)
        throw ConfigError("check_uniform_bounds requires at least 3 eps values");
    BoundsVerdict v;
    v.pass = true;
    std::ostringstream os;
    const SweepSummary& ref = rows.front();
    const double tiny = 1e-300;
    auto chk = [&](const char* name, double base,
                   double (*get)(const SweepSummary&)) {
        for (std::size_t k = 1; k < rows.size(); ++k) {
            const double val = get(rows[k]);
            if (val > factor * std::max(base, tiny)) {
                v.pass = false;
                os << name << " at eps=" << rows[k].eps << " is " << val
                   << " > " << factor << " x " << base << "\n";
            }
        }
    };
    chk("sup_e_tot", ref.sup_e_tot,
        [](const SweepSummary& s) { return s.sup_e_tot; });
    chk("lapA_sq_cum", ref.lapA_sq_cum,
        [](const SweepSummary& s) { return s.lapA_sq_cum; });
    chk("eps3_psiln_sq", ref.eps3_psiln_sq,
        [](const SweepSummary& s) { return s.eps3_psiln_sq; });
    chk("jhat_sq_cum", ref.jhat_sq_cum,
        [](const SweepSummary& s) { return s.jhat_sq_cum; });
    v.detail = os.str();
    return v;
}

}  // namespace nsch
