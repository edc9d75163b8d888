#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "nsch/errors.hpp"
#include "nsch/ops.hpp"
#include "nsch/phasefield.hpp"
#include "nsch/rng.hpp"

using namespace nsch;

namespace {

MaterialModel model(double a0, double a1, double eps) {
    MaterialParams p;
    p.a0 = a0;
    p.a1 = a1;
    p.eps = eps;
    return MaterialModel(p);
}

ScalarField stripe(const Grid& g, double amp, double width) {
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f(i, j) = amp * std::tanh((g.xc(i) - 0.5 * g.lx) /
                                      (std::sqrt(2.0) * width));
    return f;
}

ScalarField smooth_blob(const Grid& g, double amp) {
    ScalarField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f(i, j) = amp * std::sin(2.0 * M_PI * g.xc(i) / g.lx) *
                      std::cos(M_PI * g.yc(j) / g.ly);
    return f;
}

// Test-local Ginzburg-Landau energy, written against the definitions rather
// than the library's report path.
double free_energy(const Grid& g, const ScalarField& phi,
                   const MaterialModel& M) {
    long double e = 0.0L;
    for (double s : phi.v) {
        const double c = std::min(std::max(s, -1.0), 1.0);
        e += M.psi_eps(c);
    }
    ScalarField A(g);
    for (size_t k = 0; k < phi.v.size(); ++k) A.v[k] = M.A_of(phi.v[k]);
    const FaceField gA = grad_cc_to_face(g, A);
    long double gsq = 0.0L;
    for (double x : gA.x) gsq += static_cast<long double>(x) * x;
    for (double x : gA.y) gsq += static_cast<long double>(x) * x;
    return static_cast<double>((e + 0.5L * gsq) *
                               static_cast<long double>(g.cell_measure()));
}

double flux_dissipation(const Grid& g, const FaceField& Jhat) {
    long double q = 0.0L;
    for (double x : Jhat.x) q += static_cast<long double>(x) * x;
    for (double x : Jhat.y) q += static_cast<long double>(x) * x;
    return static_cast<double>(q * static_cast<long double>(g.cell_measure()));
}

}  // namespace

TEST_CASE("chemical potential of uniform states is the clamped derivative") {
    Grid g(16, 16, 1.0, 1.0);
    MaterialModel M = model(1.0, 0.0, 0.1);
    ScalarField c(g, 0.4);
    const ScalarField mu = chemical_potential(g, c, M);
    const double expected = M.psi_eps_prime(0.4);
    for (double x : mu.v) CHECK(x == Catch::Approx(expected).margin(1e-14));

    ScalarField sat(g, 1.0);  // clamp keeps the singular term finite
    const ScalarField mus = chemical_potential(g, sat, M);
    for (double x : mus.v) CHECK(std::isfinite(x));
}

TEST_CASE("chemical potential rejects non-finite input") {
    Grid g(8, 8, 1.0, 1.0);
    MaterialModel M = model(1.0, 0.0, 0.1);
    ScalarField f(g, 0.1);
    f(3, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(chemical_potential(g, f, M), NonFinite);
}

TEST_CASE("face mobility evaluates at the face average") {
    Grid g(8, 8, 1.0, 1.0);
    MaterialModel M = model(1.0, 0.0, 0.1);
    ScalarField f(g);
    for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i) f(i, j) = 0.1 * i;
    const FaceField m = mobility_face(g, f, M);
    CHECK(m.fx(3, 2) == Catch::Approx(M.mobility_eps(0.25)));
    CHECK(m.fy(3, 2) == Catch::Approx(M.mobility_eps(0.3)));
    // Boundary-normal faces carry no flux.
    for (int j = 0; j < 8; ++j) {
        CHECK(m.fx(0, j) == 0.0);
        CHECK(m.fx(8, j) == 0.0);
    }
}

TEST_CASE("flux factorization J = sqrt(m) Jhat holds bitwise") {
    Grid g(24, 16, 1.0, 1.0);
    MaterialModel M = model(1.0, 0.0, 5e-2);
    const ScalarField phi = stripe(g, 0.9, 0.07);
    const ScalarField mu = chemical_potential(g, phi, M);
    FaceField J(g), Jhat(g);
    flux(g, phi, mu, M, J, Jhat);
    const FaceField m = mobility_face(g, phi, M);
    for (size_t k = 0; k < J.x.size(); ++k)
        CHECK(J.x[k] == std::sqrt(m.x[k]) * Jhat.x[k]);
    for (size_t k = 0; k < J.y.size(); ++k)
        CHECK(J.y[k] == std::sqrt(m.y[k]) * Jhat.y[k]);
}

TEST_CASE("stabilized step conserves mass to rounding") {
    Grid g(32, 32, 1.0, 1.0);
    MaterialModel M = model(1.0, 0.0, 0.1);
    Rng rng(11);
    ScalarField phi(g);
    for (double& x : phi.v) x = 0.3 * rng.symmetric();
    PhaseState s = phase_state_instant(g, phi, M, 0.0);
    ChStepOptions opt;
    opt.phi0_max_abs = max_abs(s.phi.v);
    const double m0 = mean(s.phi);
    FaceField v(g);
    for (int k = 0; k < 20; ++k) {
        s = step_ch(g, s, v, 1e-4, M, opt);
        CHECK(std::abs(mean(s.phi) - m0) <= 1e-13);
    }
}

TEST_CASE("stabilized step dissipates free energy without flow") {
    Grid g(32, 32, 1.0, 1.0);
    MaterialModel M = model(1.0, 0.0, 0.1);
    ScalarField phi = smooth_blob(g, 0.2);
    PhaseState s = phase_state_instant(g, phi, M, 0.0);
    ChStepOptions opt;
    opt.phi0_max_abs = max_abs(s.phi.v);
    FaceField v(g);
    const double dt = 2e-4;
    double e_prev = free_energy(g, s.phi, M);
    const double budget = 1e-10 * e_prev;
    for (int k = 0; k < 15; ++k) {
        const PhaseState next = step_ch(g, s, v, dt, M, opt);
        const double e_next = free_energy(g, next.phi, M);
        // Per-step inequality with the forward flux of this very step.
        const double d = flux_dissipation(g, next.Jhat);
        CHECK(e_next + dt * d <= e_prev + budget);
        s = next;
        e_prev = e_next;
    }
}

TEST_CASE("advected step still conserves mass") {
    Grid g(32, 32, 1.0, 1.0);
    MaterialModel M = model(1.0, 0.0, 0.1);
    ScalarField phi = smooth_blob(g, 0.3);
    PhaseState s = phase_state_instant(g, phi, M, 0.0);
    ChStepOptions opt;
    opt.phi0_max_abs = max_abs(s.phi.v);
    FaceField v(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            v.fx(i, j) = 0.3 * std::sin(M_PI * g.yc(j));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            v.fy(i, j) = 0.3 * std::sin(M_PI * g.xc(i));
    const double m0 = mean(s.phi);
    for (int k = 0; k < 10; ++k) {
        s = step_ch(g, s, v, 1e-4, M, opt);
        CHECK(std::abs(mean(s.phi) - m0) <= 1e-13);
    }
}

TEST_CASE("schemes guard their stability bounds") {
    Grid g(16, 16, 1.0, 1.0);
    MaterialModel M = model(1.0, 0.0, 0.1);
    const ScalarField phi = smooth_blob(g, 0.3);
    PhaseState s = phase_state_instant(g, phi, M, 0.0);

    ChStepOptions expl;
    expl.scheme = ChScheme::Explicit;
    expl.phi0_max_abs = max_abs(s.phi.v);
    // c_stab h^4 / (m_max a_max) = 0.05 / 16^4 here.
    CHECK_THROWS_AS(step_ch(g, s, FaceField(g), 1e-5, M, expl),
                    StabilityViolation);
    CHECK_NOTHROW(step_ch(g, s, FaceField(g), 5e-7, M, expl));

    ChStepOptions stab;
    stab.phi0_max_abs = max_abs(s.phi.v);
    FaceField fast(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) fast.fx(i, j) = 50.0;
    // Advective bound h/|v| = 1/800.
    CHECK_THROWS_AS(step_ch(g, s, fast, 1e-2, M, stab), StabilityViolation);
    CHECK_NOTHROW(step_ch(g, s, fast, 1e-3, M, stab));
}

TEST_CASE("explicit step matches the scheme definition") {
    Grid g(16, 16, 1.0, 1.0);
    MaterialModel M = model(1.0, 0.0, 0.1);
    const ScalarField phi = smooth_blob(g, 0.3);
    PhaseState s = phase_state_instant(g, phi, M, 0.0);
    ChStepOptions expl;
    expl.scheme = ChScheme::Explicit;
    expl.phi0_max_abs = max_abs(s.phi.v);
    const double dt = 5e-7;
    const PhaseState out = step_ch(g, s, FaceField(g), dt, M, expl);
    // phi^{n+1} = phi^n - dt div J(phi^n) with the instantaneous flux.
    const ScalarField divJ = div_face_to_cc(g, out.J);
    for (size_t k = 0; k < out.phi.v.size(); ++k)
        CHECK(out.phi.v[k] ==
              Catch::Approx(s.phi.v[k] - dt * divJ.v[k]).margin(1e-15));
    CHECK(out.t == Catch::Approx(dt));
}

TEST_CASE("stabilized scheme requires a constant gradient coefficient") {
    Grid g(16, 16, 1.0, 1.0);
    MaterialModel M = model(1.0, 2.0, 0.1);
    const ScalarField phi = smooth_blob(g, 0.3);
    PhaseState s = phase_state_instant(g, phi, M, 0.0);
    ChStepOptions opt;
    opt.phi0_max_abs = max_abs(s.phi.v);
    CHECK_THROWS_AS(step_ch(g, s, FaceField(g), 1e-5, M, opt), ConfigError);
}

TEST_CASE("weak flux identity residual shrinks under refinement") {
    MaterialModel M = model(1.0, 0.0, 0.1);
    double res[3];
    const int sizes[3] = {32, 64, 128};
    for (int r = 0; r < 3; ++r) {
        Grid g(sizes[r], sizes[r], 1.0, 1.0);
        const ScalarField phi = stripe(g, 0.8, 0.08);
        PhaseState s = phase_state_instant(g, phi, M, 0.0);
        FaceField eta(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i)
                eta.fx(i, j) = std::sin(2.0 * M_PI * i * g.hx) *
                               std::cos(M_PI * g.yc(j));
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                eta.fy(i, j) = std::cos(2.0 * M_PI * g.xc(i)) *
                               std::sin(M_PI * j * g.hy);
        res[r] = weak_flux_residual(g, s, M, eta);
        CHECK(res[r] >= 0.0);
    }
    CHECK(std::log2(res[0] / res[1]) >= 0.9);
    CHECK(std::log2(res[1] / res[2]) >= 0.9);
}

TEST_CASE("non-positive dt is rejected") {
    Grid g(8, 8, 1.0, 1.0);
    MaterialModel M = model(1.0, 0.0, 0.1);
    PhaseState s = phase_state_instant(g, ScalarField(g), M, 0.0);
    ChStepOptions opt;
    CHECK_THROWS_AS(step_ch(g, s, FaceField(g), 0.0, M, opt), ConfigError);
    CHECK_THROWS_AS(step_ch(g, s, FaceField(g), -1e-3, M, opt), ConfigError);
}
