#include "nsch/phasefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsch/dct.hpp"
#include "nsch/errors.hpp"
#include "nsch/ops.hpp"
#include "nsch/parallel.hpp"

namespace nsch {

namespace {

ScalarField a_field(const Grid& g, const ScalarField& phi,
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

// Shifts x so its mean matches the target mean exactly (up to one rounding
// per cell); keeps iterative-solver mean drift out of the conservation budget.
void recenter_to(std::vector<double>& x, const std::vector<double>& target) {
    long double st = 0.0L, sx = 0.0L;
    for (double v : target) st += v;
    for (double v : x) sx += v;
    const double shift = static_cast<double>((st - sx) / x.size());
    for (double& v : x) v += shift;
}

double advective_bound(const Grid& g, const FaceField& v) {
    double bx = max_abs(v.x), by = max_abs(v.y);
    double bound = std::numeric_limits<double>::infinity();
    if (bx > 0.0) bound = std::min(bound, g.hx / bx);
    if (by > 0.0) bound = std::min(bound, g.hy / by);
    return bound;
}

struct BiCgStabWork {
    std::vector<double> r, rhat, p, v, s, t, phat, shat;
};

// Preconditioned BiCGStab on vectors of size n; apply and prec write their
// output into the second argument. Relative tolerance against ||b||.
template <class Apply, class Prec>
int bicgstab(const Apply& apply, const Prec& prec, const std::vector<double>& b,
             std::vector<double>& x, double tol, int max_iter,
             BiCgStabWork& w) {
    const size_t n = b.size();
    const double nb = norm2(b);
    if (nb == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return 0;
    }
    w.r.resize(n);
    apply(x, w.r);
    for (size_t k = 0; k < n; ++k) w.r[k] = b[k] - w.r[k];
    if (norm2(w.r) <= tol * nb) return 0;
    w.rhat = w.r;
    w.p.assign(n, 0.0);
    w.v.assign(n, 0.0);
    w.s.resize(n);
    w.t.resize(n);
    w.phat.resize(n);
    w.shat.resize(n);
    double rho_old = 1.0, alpha = 1.0, omega = 1.0;
    for (int it = 1; it <= max_iter; ++it) {
        const double rho = dot(w.rhat, w.r);
        if (!(std::fabs(rho) > 0.0) || omega == 0.0)
            throw NonConvergence("BiCGStab breakdown", it, norm2(w.r) / nb);
        const double beta = (rho / rho_old) * (alpha / omega);
        for (size_t k = 0; k < n; ++k)
            w.p[k] = w.r[k] + beta * (w.p[k] - omega * w.v[k]);
        prec(w.p, w.phat);
        apply(w.phat, w.v);
        const double denom = dot(w.rhat, w.v);
        if (!(std::fabs(denom) > 0.0))
            throw NonConvergence("BiCGStab breakdown", it, norm2(w.r) / nb);
        alpha = rho / denom;
        for (size_t k = 0; k < n; ++k) w.s[k] = w.r[k] - alpha * w.v[k];
        if (norm2(w.s) <= tol * nb) {
            for (size_t k = 0; k < n; ++k) x[k] += alpha * w.phat[k];
            return it;
        }
        prec(w.s, w.shat);
        apply(w.shat, w.t);
        const double tt = dot(w.t, w.t);
        if (tt == 0.0)
            throw NonConvergence("BiCGStab breakdown", it, norm2(w.s) / nb);
        omega = dot(w.t, w.s) / tt;
        for (size_t k = 0; k < n; ++k)
            x[k] += alpha * w.phat[k] + omega * w.shat[k];
        for (size_t k = 0; k < n; ++k) w.r[k] = w.s[k] - omega * w.t[k];
        if (norm2(w.r) <= tol * nb) return it;
        rho_old = rho;
    }
    throw NonConvergence("implicit Cahn-Hilliard solve", max_iter,
                         norm2(w.r) / nb);
}

}  // namespace

ScalarField chemical_potential(const Grid& g, const ScalarField& phi,
                               const MaterialModel& M) {
    ScalarField lapA = laplace_neumann(g, a_field(g, phi, M));
    if (!all_finite(lapA.v))
        throw NonFinite("laplacian of A(phi) is not finite");
    ScalarField mu(g);
    parallel_for(g.ny, [&](int jb, int je) {
        for (int j = jb; j < je; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double s = phi(i, j);
                mu(i, j) = M.psi_eps_prime(M.clamp_eval(s)) -
                           M.sqrt_a(s) * lapA(i, j);
            }
    });
    return mu;
}

FaceField mobility_face(const Grid& g, const ScalarField& phi,
                        const MaterialModel& M) {
    FaceField m(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            m.fx(i, j) = M.mobility_eps(0.5 * (phi(i - 1, j) + phi(i, j)));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            m.fy(i, j) = M.mobility_eps(0.5 * (phi(i, j - 1) + phi(i, j)));
    return m;
}

void flux(const Grid& g, const ScalarField& phi, const ScalarField& mu,
          const MaterialModel& M, FaceField& J, FaceField& Jhat) {
    const FaceField m = mobility_face(g, phi, M);
    const FaceField gmu = grad_cc_to_face(g, mu);
    J = FaceField(g);
    Jhat = FaceField(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double s = std::sqrt(m.fx(i, j));
            Jhat.fx(i, j) = -s * gmu.fx(i, j);
            J.fx(i, j) = s * Jhat.fx(i, j);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double s = std::sqrt(m.fy(i, j));
            Jhat.fy(i, j) = -s * gmu.fy(i, j);
            J.fy(i, j) = s * Jhat.fy(i, j);
        }
}

PhaseState phase_state_instant(const Grid& g, ScalarField phi,
                               const MaterialModel& M, double t) {
    PhaseState s(g);
    s.phi = std::move(phi);
    s.mu = chemical_potential(g, s.phi, M);
    flux(g, s.phi, s.mu, M, s.J, s.Jhat);
    s.t = t;
    return s;
}

PhaseState step_ch(const Grid& g, const PhaseState& s, const FaceField& v,
                   double dt, const MaterialModel& M,
                   const ChStepOptions& opt) {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");

    double bound = advective_bound(g, v);
    if (opt.scheme == ChScheme::Explicit) {
        const double h = std::min(g.hx, g.hy);
        const double m_max = M.mobility_eps(0.0);
        const double a_max = M.coef_a(1.0);
        bound = std::min(bound, opt.c_stab * h * h * h * h / (m_max * a_max));
    }
    if (dt > 1.1 * bound)
        throw StabilityViolation("dt = " + std::to_string(dt) +
                                 " exceeds the stability bound " +
                                 std::to_string(bound) + " by more than 10%");

    const ScalarField adv = advect_upwind(g, s.phi, v);
    PhaseState out(g);
    out.t = s.t + dt;

    if (opt.scheme == ChScheme::Explicit) {
        out.mu = chemical_potential(g, s.phi, M);
        flux(g, s.phi, out.mu, M, out.J, out.Jhat);
        const ScalarField divJ = div_face_to_cc(g, out.J);
        out.phi = s.phi;
        for (size_t k = 0; k < out.phi.v.size(); ++k)
            out.phi.v[k] += dt * (-adv.v[k] - divJ.v[k]);
        recenter_to(out.phi.v, s.phi.v);
        if (!all_finite(out.phi.v))
            throw NonFinite("explicit Cahn-Hilliard step produced non-finite "
                            "values");
        return out;
    }

    // Stabilized semi-implicit step: the A-path collapses to a0 * lap(phi)
    // only for constant a.
    if (!M.a_const())
        throw ConfigError(
            "the stabilized scheme requires a constant gradient coefficient "
            "(a1 = 0); use the explicit scheme");
    const double a0 = M.params().a0;
    const double S =
        opt.stab_S >= 0.0 ? opt.stab_S : M.stabilization_S(opt.phi0_max_abs);

    const FaceField m = mobility_face(g, s.phi, M);
    const double m_hat = std::max(max_abs(m.x), max_abs(m.y));
    const size_t n = s.phi.v.size();

    // out = x/dt - div(m grad(-a0 lap x + S x))
    auto apply = [&](const std::vector<double>& xv, std::vector<double>& yv) {
        ScalarField x(g);
        x.v = xv;
        ScalarField lap = laplace_neumann(g, x);
        ScalarField p(g);
        for (size_t k = 0; k < n; ++k) p.v[k] = S * xv[k] - a0 * lap.v[k];
        FaceField gp = grad_cc_to_face(g, p);
        for (size_t k = 0; k < gp.x.size(); ++k) gp.x[k] *= m.x[k];
        for (size_t k = 0; k < gp.y.size(); ++k) gp.y[k] *= m.y[k];
        ScalarField d = div_face_to_cc(g, gp);
        yv.resize(n);
        const double idt = 1.0 / dt;
        for (size_t k = 0; k < n; ++k) yv[k] = xv[k] * idt - d.v[k];
    };
    auto prec = [&](const std::vector<double>& rv, std::vector<double>& zv) {
        dct_modal_solve(g, 1.0 / dt, S * m_hat, a0 * m_hat, rv, zv);
    };

    // rhs = phi/dt - advect + div(m grad(psi_eps'(clamped phi) - S phi))
    ScalarField q(g);
    for (size_t k = 0; k < n; ++k)
        q.v[k] = M.psi_eps_prime(M.clamp_eval(s.phi.v[k])) - S * s.phi.v[k];
    FaceField gq = grad_cc_to_face(g, q);
    for (size_t k = 0; k < gq.x.size(); ++k) gq.x[k] *= m.x[k];
    for (size_t k = 0; k < gq.y.size(); ++k) gq.y[k] *= m.y[k];
    const ScalarField dq = div_face_to_cc(g, gq);
    std::vector<double> b(n);
    const double idt = 1.0 / dt;
    for (size_t k = 0; k < n; ++k)
        b[k] = s.phi.v[k] * idt - adv.v[k] + dq.v[k];

    out.phi = s.phi;  // initial guess
    BiCgStabWork w;
    bicgstab(apply, prec, b, out.phi.v, opt.tol,
             opt.max_iter_factor * g.cells(), w);
    recenter_to(out.phi.v, s.phi.v);
    if (!all_finite(out.phi.v))
        throw NonFinite("stabilized Cahn-Hilliard step produced non-finite "
                        "values");

    // Forward potential of this step; with the pre-step face mobility it
    // reproduces the step's flux dissipation exactly.
    ScalarField lap_new = laplace_neumann(g, out.phi);
    out.mu = ScalarField(g);
    for (size_t k = 0; k < n; ++k)
        out.mu.v[k] = -a0 * lap_new.v[k] + S * (out.phi.v[k] - s.phi.v[k]) +
                      M.psi_eps_prime(M.clamp_eval(s.phi.v[k]));
    const FaceField gmu = grad_cc_to_face(g, out.mu);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) {
            const double sq = std::sqrt(m.fx(i, j));
            out.Jhat.fx(i, j) = -sq * gmu.fx(i, j);
            out.J.fx(i, j) = sq * out.Jhat.fx(i, j);
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double sq = std::sqrt(m.fy(i, j));
            out.Jhat.fy(i, j) = -sq * gmu.fy(i, j);
            out.J.fy(i, j) = sq * out.Jhat.fy(i, j);
        }
    return out;
}

double weak_flux_residual(const Grid& g, const PhaseState& s,
                          const MaterialModel& M, const FaceField& eta) {
    const double lhs = inner_face(g, s.J, eta);
    // Value-averaged face mobility: a deliberately different discretization
    // from the flux kernel's evaluate-at-average rule.
    FaceField me(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            me.fx(i, j) = 0.5 * (M.mobility_eps(s.phi(i - 1, j)) +
                                 M.mobility_eps(s.phi(i, j)));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            me.fy(i, j) = 0.5 * (M.mobility_eps(s.phi(i, j - 1)) +
                                 M.mobility_eps(s.phi(i, j)));
    for (size_t k = 0; k < me.x.size(); ++k) me.x[k] *= eta.x[k];
    for (size_t k = 0; k < me.y.size(); ++k) me.y[k] *= eta.y[k];
    const ScalarField d = div_face_to_cc(g, me);
    const double rhs = inner_cc(g, s.mu, d);
    return std::fabs(lhs - rhs);
}

}  // namespace nsch
