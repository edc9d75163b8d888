#pragma once

#include <utility>

#include "nsch/quadrature.hpp"

namespace nsch {

struct MaterialParams {
    double rho1 = 1.0;  // density of the phi = -1 fluid
    double rho2 = 1.0;  // density of the phi = +1 fluid
    double eta1 = 1.0;  // viscosity of the phi = -1 fluid
    double eta2 = 1.0;  // viscosity of the phi = +1 fluid
    double a0 = 1.0;    // gradient coefficient a(s) = a0 + a1 s^2
    double a1 = 0.0;
    double eps = 1e-2;  // regularization parameter, in [0,1)
};

// Constitutive bundle: densities, viscosity blend, degenerate and clamped
// mobilities, the quartic + logarithmic potential family, the concentration
// reparametrization A, and the entropy functionals. Immutable after
// construction; the entropy tables are built eagerly in the constructor.
class MaterialModel {
  public:
    explicit MaterialModel(const MaterialParams& p);

    const MaterialParams& params() const { return p_; }
    double rho1() const { return p_.rho1; }
    double rho2() const { return p_.rho2; }
    double beta() const { return beta_; }  // (rho2 - rho1) / 2
    double eps() const { return p_.eps; }
    // Evaluation clamp distance for the singular derivative, min(eps/2, 1e-9).
    double delta_clip() const { return delta_clip_; }
    double c0() const { return c0_; }  // lower bound of a and eta
    double K() const { return K_; }    // upper bound of a and eta
    bool a_const() const { return p_.a1 == 0.0; }

    double density(double s) const;    // affine, argument clamped to [-1,1]
    double viscosity(double s) const;  // affine blend, argument clamped
    double mobility(double s) const;   // 1 - s^2 on [-1,1], 0 outside
    double mobility_eps(double s) const;  // m(clamp(s, +-(1-eps)))

    double psi(double s) const;         // (1 - s^2)^2 / 4
    double psi_prime(double s) const;   // s^3 - s
    double psi_second(double s) const;  // 3 s^2 - 1
    // Logarithmic part; value extends continuously to +-1, derivative is
    // singular there (throws SingularArgument outside its domain).
    double psi_ln(double s) const;
    double psi_ln_prime(double s) const;
    double psi_ln_second(double s) const;
    double psi_eps(double s) const;  // psi + eps * psi_ln (log skipped at eps=0)
    double psi_eps_prime(double s) const;
    double psi_eps_second(double s) const;
    // clamp(s, +-(1 - delta_clip)): evaluation point for psi_eps_prime.
    double clamp_eval(double s) const;
    // Sampled lower bound of psi_eps'' on the clamped interval.
    double kappa() const { return kappa_; }

    double coef_a(double s) const { return p_.a0 + p_.a1 * s * s; }
    double coef_a_prime(double s) const { return 2.0 * p_.a1 * s; }
    double sqrt_a(double s) const;
    // A(s) = int_0^s sqrt(a); closed form for constant a, adaptive Gauss
    // quadrature (tol 1e-12) otherwise.
    double A_of(double s) const;
    // Inverse of A by safeguarded Newton (tol 1e-12).
    double A_inv(double r) const;

    // Entropy functionals G'' = sqrt(a)/m (entropy_G) and sqrt(a)/m_eps
    // (entropy_G_eps), with G(0) = G'(0) = 0, evaluated from cumulative
    // adaptive quadrature tables on [-1,1] (tol 1e-10 per panel budget).
    double entropy_G(double s) const;
    double entropy_G_eps(double s) const;

    // Stabilization constant for the semi-implicit scheme: max |psi_eps''|
    // over the widest interval the run can visit, derived from the initial
    // sup norm and floored by the eps/2 interior band.
    double stabilization_S(double phi0_max_abs) const;

    // Admissible constants (C_alpha, c_alpha) such that
    //   psi_eps'(s) (s - mbar) >= C_alpha * eps * |psi_ln'(s)| - c_alpha
    // for every mean value |mbar| <= 1 - alpha and s in (-1,1).
    std::pair<double, double> mean_separation_constants(double alpha) const;

  private:
    MaterialParams p_;
    double beta_ = 0.0;
    double delta_clip_ = 0.0;
    double c0_ = 0.0, K_ = 0.0;
    double kappa_ = 0.0;
    HermiteTable table_G_, table_G_eps_;

    HermiteTable build_entropy_table(bool clamped) const;
};

}  // namespace nsch
