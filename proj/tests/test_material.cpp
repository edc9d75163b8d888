#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nsch/errors.hpp"
#include "nsch/material.hpp"

using namespace nsch;

namespace {

MaterialModel model(double rho1, double rho2, double eta1, double eta2,
                    double a0, double a1, double eps) {
    MaterialParams p;
    p.rho1 = rho1;
    p.rho2 = rho2;
    p.eta1 = eta1;
    p.eta2 = eta2;
    p.a0 = a0;
    p.a1 = a1;
    p.eps = eps;
    return MaterialModel(p);
}

}  // namespace

TEST_CASE("constructor rejects inadmissible parameters") {
    CHECK_THROWS_AS(model(0.0, 1, 1, 1, 1, 0, 0.1), CoefficientBelowBound);
    CHECK_THROWS_AS(model(1, 1, 1, -1, 1, 0, 0.1), CoefficientBelowBound);
    CHECK_THROWS_AS(model(1, 1, 1, 1, 0, 0, 0.1), CoefficientBelowBound);
    CHECK_THROWS_AS(model(1, 1, 1, 1, 1, -2, 0.1), CoefficientBelowBound);
    CHECK_THROWS_AS(model(1, 1, 1, 1, 1, 0, 1.0), ConfigError);
    CHECK_THROWS_AS(model(1, 1, 1, 1, 1, 0, -0.1), ConfigError);
}

TEST_CASE("density and viscosity blends clamp their argument") {
    MaterialModel M = model(1.0, 3.0, 0.1, 0.4, 1.0, 0.0, 0.1);
    CHECK(M.beta() == Catch::Approx(1.0));
    CHECK(M.density(-1.0) == Catch::Approx(1.0));
    CHECK(M.density(1.0) == Catch::Approx(3.0));
    CHECK(M.density(0.0) == Catch::Approx(2.0));
    CHECK(M.density(5.0) == Catch::Approx(3.0));   // clamped
    CHECK(M.density(-9.0) == Catch::Approx(1.0));  // clamped
    CHECK(M.viscosity(-1.0) == Catch::Approx(0.1));
    CHECK(M.viscosity(1.0) == Catch::Approx(0.4));
    CHECK(M.viscosity(2.0) == Catch::Approx(0.4));
    // Bounds advertised for the analysis hypotheses.
    CHECK(M.c0() <= 0.1);
    CHECK(M.K() >= 1.0);
}

TEST_CASE("degenerate and clamped mobility") {
    MaterialModel M = model(1, 1, 1, 1, 1.0, 0.0, 0.1);
    CHECK(M.mobility(0.0) == 1.0);
    CHECK(M.mobility(1.0) == 0.0);
    CHECK(M.mobility(-1.0) == 0.0);
    CHECK(M.mobility(1.5) == 0.0);
    CHECK(M.mobility(0.5) == Catch::Approx(0.75));
    // m_eps floors at eps(2 - eps) = 0.19 for eps = 0.1.
    CHECK(M.mobility_eps(1.0) == Catch::Approx(0.19));
    CHECK(M.mobility_eps(-1.0) == Catch::Approx(0.19));
    CHECK(M.mobility_eps(47.0) == Catch::Approx(0.19));
    CHECK(M.mobility_eps(0.5) == Catch::Approx(0.75));
    for (double s : {-0.999, -0.3, 0.0, 0.77, 0.9999})
        CHECK(M.mobility_eps(s) >= 0.19 - 1e-15);  // floor up to rounding
}

TEST_CASE("potential family values") {
    MaterialModel M = model(1, 1, 1, 1, 1.0, 0.0, 0.1);
    CHECK(M.psi(0.0) == Catch::Approx(0.25));
    CHECK(M.psi(1.0) == 0.0);
    CHECK(M.psi(-1.0) == 0.0);
    CHECK(M.psi_prime(0.0) == 0.0);
    CHECK(M.psi_prime(1.0) == 0.0);
    CHECK(M.psi_prime(0.5) == Catch::Approx(-0.375));
    CHECK(M.psi_second(0.0) == Catch::Approx(-1.0));
    CHECK(M.psi_second(1.0) == Catch::Approx(2.0));

    CHECK(M.psi_ln(0.0) == 0.0);
    CHECK(M.psi_ln(1.0) == Catch::Approx(1.3862943611198906));
    CHECK(M.psi_ln(-1.0) == Catch::Approx(1.3862943611198906));
    CHECK(M.psi_ln_prime(0.0) == 0.0);
    CHECK(M.psi_ln_prime(0.5) == Catch::Approx(1.0986122886681097));
    CHECK(M.psi_ln_prime(-0.5) == Catch::Approx(-1.0986122886681097));
    CHECK(M.psi_ln_second(0.0) == Catch::Approx(2.0));
    CHECK_THROWS_AS(M.psi_ln(1.5), SingularArgument);
    CHECK_THROWS_AS(M.psi_ln_prime(1.0), SingularArgument);
    CHECK_THROWS_AS(M.psi_ln_second(-1.0), SingularArgument);

    CHECK(M.psi_eps(0.0) == Catch::Approx(0.25));
    CHECK(M.psi_eps_prime(0.5) ==
          Catch::Approx(-0.375 + 0.1 * 1.0986122886681097));
    CHECK(M.psi_eps_second(0.0) == Catch::Approx(-1.0 + 0.2));
    // Singular derivative is only ever evaluated at clamped arguments.
    CHECK(M.clamp_eval(1.0) < 1.0);
    CHECK_NOTHROW(M.psi_eps_prime(M.clamp_eval(1.0)));
    CHECK(M.kappa() <= M.psi_eps_second(0.0));

    MaterialModel M0 = model(1, 1, 1, 1, 1.0, 0.0, 0.0);
    CHECK(M0.psi_eps(0.3) == M0.psi(0.3));        // log part skipped
    CHECK(M0.psi_eps_prime(1.0) == M0.psi_prime(1.0));
}

TEST_CASE("concentration reparametrization A and its inverse") {
    MaterialModel Mc = model(1, 1, 1, 1, 4.0, 0.0, 0.1);
    CHECK(Mc.A_of(0.5) == Catch::Approx(1.0));  // sqrt(4) * s
    CHECK(Mc.A_inv(1.0) == Catch::Approx(0.5));

    MaterialModel Mv = model(1, 1, 1, 1, 1.0, 3.0, 0.1);
    CHECK(Mv.A_of(0.0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(Mv.A_of(1.0) == Catch::Approx(1.3801729981504732).margin(1e-10));
    CHECK(Mv.A_of(-1.0) == Catch::Approx(-1.3801729981504732).margin(1e-10));
    for (double s : {-0.95, -0.4, 0.0, 0.3, 0.7, 1.0})
        CHECK(Mv.A_inv(Mv.A_of(s)) == Catch::Approx(s).margin(1e-10));
}

TEST_CASE("entropy functionals against closed forms") {
    // a = 1: G'' = 1/(1-s^2), so G(s) = s atanh(s) + log(1-s^2)/2.
    MaterialModel M = model(1, 1, 1, 1, 1.0, 0.0, 0.1);
    CHECK(M.entropy_G(0.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(M.entropy_G(0.5) ==
          Catch::Approx(0.13081203594113696).margin(1e-8));
    CHECK(M.entropy_G(-0.5) ==
          Catch::Approx(0.13081203594113696).margin(1e-8));
    // Clamped integrand switches to the constant 1/(eps(2-eps)) band.
    CHECK(M.entropy_G_eps(0.95) ==
          Catch::Approx(0.57482185906165482).margin(1e-8));
    CHECK(M.entropy_G_eps(0.5) ==
          Catch::Approx(0.13081203594113696).margin(1e-8));
    // G is even and increasing in |s|; G_eps <= G on the tail.
    CHECK(M.entropy_G(0.9) > M.entropy_G(0.5));
    CHECK(M.entropy_G_eps(0.99) <= M.entropy_G(0.99) + 1e-9);
}

TEST_CASE("stabilization constant tracks the visited curvature range") {
    MaterialModel M = model(1, 1, 1, 1, 1.0, 0.0, 1e-2);
    // Initial data capped at 1 - 1e-5: the half-gap pad keeps the visited
    // interval at |s| <= 1 - 5e-6 where psi_eps'' tops out near 2e3.
    const double S = M.stabilization_S(1.0 - 1e-5);
    CHECK(S >= 1995.0);
    CHECK(S <= 2010.0);
    // A comfortable envelope needs far less stabilization.
    const double S2 = M.stabilization_S(0.9);
    CHECK(S2 >= 2.0);
    CHECK(S2 <= 10.0);
    CHECK(S2 < S);
    // eps = 0 keeps the quartic bound.
    MaterialModel M0 = model(1, 1, 1, 1, 1.0, 0.0, 0.0);
    CHECK(M0.stabilization_S(1.0) == Catch::Approx(2.0));
}

TEST_CASE("mean separation constants satisfy their inequality") {
    MaterialModel M = model(1, 1, 1, 1, 1.0, 0.0, 5e-2);
    const double alpha = 0.3;
    auto [C, c] = M.mean_separation_constants(alpha);
    CHECK(C > 0.0);
    CHECK(c >= 0.0);
    for (int km = -7; km <= 7; ++km) {
        const double mbar = (1.0 - alpha) * km / 7.0;
        for (int ks = -999; ks <= 999; ++ks) {
            const double s = ks / 1000.0;
            const double lhs = M.psi_eps_prime(s) * (s - mbar);
            const double rhs =
                C * M.eps() * std::fabs(M.psi_ln_prime(s)) - c;
            REQUIRE(lhs >= rhs - 1e-12);
        }
    }
    CHECK_THROWS_AS(M.mean_separation_constants(0.0), ConfigError);
    CHECK_THROWS_AS(M.mean_separation_constants(1.0), ConfigError);
}
