#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "nsch/energy.hpp"
#include "nsch/errors.hpp"
#include "nsch/flow.hpp"
#include "nsch/phasefield.hpp"

using namespace nsch;

namespace {

MaterialModel model(double eps) {
    MaterialParams p;
    p.eps = eps;
    return MaterialModel(p);
}

}  // namespace

TEST_CASE("report columns on a frozen uniform state") {
    Grid g(8, 8, 1.0, 1.0);
    MaterialModel M = model(0.1);
    ScalarField phi(g, 0.0);
    PhaseState phase = phase_state_instant(g, phi, M, 0.25);
    FlowState flow(g);
    flow.t = 0.25;
    for (double& x : flow.rho.v) x = M.density(0.0);
    // Unit velocity on every face; only interior faces carry energy.
    for (double& x : flow.v.x) x = 1.0;
    for (double& x : flow.v.y) x = 1.0;

    const EnergyReport r = report(g, flow, phase, M);
    CHECK(r.t == 0.25);
    // 112 interior faces, rho = 1, cell measure 1/64.
    CHECK(r.e_kin == Catch::Approx(0.875));
    // psi_eps(0) = 1/4 over the unit square, no gradient part.
    CHECK(r.e_free == Catch::Approx(0.25));
    CHECK(r.e_tot == Catch::Approx(1.125));
    CHECK(r.d_flux == 0.0);  // mu is uniform, so Jhat = 0
    CHECK(r.mass == 0.0);
    CHECK(r.g_eps_int == Catch::Approx(0.0).margin(1e-12));
    CHECK(r.phi_min == 0.0);
    CHECK(r.phi_max == 0.0);
    CHECK(r.lapA_sq_cum == 0.0);  // cumulative columns belong to run()
    CHECK(r.psi_ln_prime_sq_cum == 0.0);
    // Uniform slip still shears against the no-slip walls.
    CHECK(r.d_visc > 0.0);
}

TEST_CASE("wall shear makes uniform slip dissipative") {
    Grid g(8, 8, 1.0, 1.0);
    MaterialModel M = model(0.1);
    ScalarField phi(g, 0.0);
    FaceField v(g);
    for (double& x : v.x) x = 1.0;
    CHECK(viscous_dissipation(g, v, phi, M) > 0.0);
}

TEST_CASE("report total is the exact sum of its parts") {
    Grid g(16, 12, 1.3, 0.9);
    MaterialModel M = model(5e-2);
    ScalarField phi(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            phi(i, j) = 0.8 * std::sin(2.0 * M_PI * g.xc(i) / g.lx) *
                        std::cos(M_PI * g.yc(j) / g.ly);
    PhaseState phase = phase_state_instant(g, phi, M, 0.0);
    FlowState flow(g);
    for (size_t k = 0; k < flow.rho.v.size(); ++k)
        flow.rho.v[k] = M.density(phi.v[k]);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            flow.v.fx(i, j) = 0.1 * std::sin(M_PI * g.yc(j));
    const EnergyReport r = report(g, flow, phase, M);
    CHECK(r.e_tot == r.e_kin + r.e_free);
    CHECK(r.e_kin > 0.0);
    CHECK(r.e_free > 0.0);
    CHECK(r.d_flux > 0.0);
    CHECK(r.d_visc > 0.0);
    CHECK(r.phi_min == Catch::Approx(-0.8).margin(0.05));
    CHECK(r.phi_max == Catch::Approx(0.8).margin(0.05));
    CHECK(r.mass == Catch::Approx(mean(phi)));
}

TEST_CASE("entropy production integrands") {
    Grid g(16, 16, 1.0, 1.0);
    MaterialModel M = model(0.1);
    ScalarField c(g, 0.3);
    CHECK(lap_a_sq(g, c, M) == 0.0);
    const double p0 = psi_ln_prime_sq(g, c, M);
    CHECK(p0 == Catch::Approx(std::pow(M.psi_ln_prime(0.3), 2)));
    ScalarField sat(g, 1.0);  // clamped evaluation stays finite
    CHECK(std::isfinite(psi_ln_prime_sq(g, sat, M)));
    ScalarField stripe(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            stripe(i, j) =
                0.9 * std::tanh((g.xc(i) - 0.5) / (std::sqrt(2.0) * 0.1));
    CHECK(lap_a_sq(g, stripe, M) > 0.0);
}

TEST_CASE("energy inequality bookkeeping over a fabricated history") {
    std::vector<EnergyReport> h(3);
    h[0].t = 0.0;
    h[0].e_tot = 10.0;
    h[0].d_visc = 1.0;
    h[0].d_flux = 0.5;
    h[1].t = 1.0;
    h[1].e_tot = 8.0;
    h[1].d_visc = 0.7;
    h[1].d_flux = 0.5;
    h[2].t = 2.0;
    h[2].e_tot = 7.0;

    const InequalityCheck a = check_energy_inequality(h, 0, 1, 0.0);
    CHECK(a.slack == Catch::Approx(8.0 - 10.0 + 1.5));
    CHECK(a.pass);

    const InequalityCheck b = check_energy_inequality(h, 1, 2, 0.1);
    CHECK(b.slack == Catch::Approx(7.0 - 8.0 + 1.2));
    CHECK_FALSE(b.pass);
    CHECK(check_energy_inequality(h, 1, 2, 0.3).pass);

    const InequalityCheck c = check_energy_inequality(h, 0, 2, 0.0);
    CHECK(c.slack == Catch::Approx(7.0 - 10.0 + 1.5 + 1.2));

    CHECK_THROWS_AS(check_energy_inequality(h, 2, 1, 0.0), ConfigError);
    CHECK_THROWS_AS(check_energy_inequality(h, 0, 5, 0.0), ConfigError);
}

TEST_CASE("uniform bound verdicts across a sweep") {
    std::vector<SweepSummary> rows(3);
    rows[0] = {1e-1, 1.0, 2.0, 3.0, 4.0};
    rows[1] = {3e-2, 1.5, 4.0, 6.0, 8.0};
    rows[2] = {1e-2, 2.0, 8.0, 9.0, 12.0};
    const BoundsVerdict ok = check_uniform_bounds(rows, 10.0);
    CHECK(ok.pass);

    rows[2].lapA_sq_cum = 25.0;  // beyond 10x the first row
    const BoundsVerdict bad = check_uniform_bounds(rows, 10.0);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.detail.empty());

    rows.resize(2);
    CHECK_THROWS_AS(check_uniform_bounds(rows, 10.0), ConfigError);
}
