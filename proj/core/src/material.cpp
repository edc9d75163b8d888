#include "nsch/material.hpp"

#include <algorithm>
#include <cmath>

#include "nsch/errors.hpp"

namespace nsch {

namespace {

double clamp(double s, double lo, double hi) {
    return std::min(std::max(s, lo), hi);
}

// x * ln x extended by 0 at x = 0.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

MaterialModel::MaterialModel(const MaterialParams& p) : p_(p) {
    if (!(p_.rho1 > 0.0) || !(p_.rho2 > 0.0))
        throw CoefficientBelowBound("densities must be positive");
    if (!(p_.eta1 > 0.0) || !(p_.eta2 > 0.0))
        throw CoefficientBelowBound("viscosities must be positive");
    if (!(p_.a0 > 0.0) || p_.a1 < 0.0)
        throw CoefficientBelowBound(
            "gradient coefficient needs a0 > 0 and a1 >= 0");
    // eps = 0 is the unregularized degenerate mode used by the equilibrium
    // diagnostics and the explicit scheme; regularized runs need (0,1).
    if (!(p_.eps >= 0.0 && p_.eps < 1.0))
        throw ConfigError("eps must lie in [0,1)");

    beta_ = 0.5 * (p_.rho2 - p_.rho1);
    delta_clip_ = std::min(0.5 * p_.eps, 1e-9);
    c0_ = std::min({p_.a0, p_.eta1, p_.eta2});
    K_ = std::max({p_.a0 + p_.a1, p_.eta1, p_.eta2});

    // Sampled lower bound of psi_eps'' over the clamped interval.
    double lo = -1.0 + delta_clip_, hi = 1.0 - delta_clip_;
    double kmin = psi_eps_second(0.0);
    const int ns = 4000;
    for (int k = 0; k <= ns; ++k) {
        double s = lo + (hi - lo) * k / ns;
        kmin = std::min(kmin, psi_eps_second(s));
    }
    kappa_ = kmin;

    table_G_ = build_entropy_table(false);
    table_G_eps_ = build_entropy_table(true);
}

double MaterialModel::density(double s) const {
    double c = clamp(s, -1.0, 1.0);
    return 0.5 * (p_.rho1 + p_.rho2) + beta_ * c;
}

double MaterialModel::viscosity(double s) const {
    double c = clamp(s, -1.0, 1.0);
    return 0.5 * (p_.eta1 + p_.eta2) + 0.5 * (p_.eta2 - p_.eta1) * c;
}

double MaterialModel::mobility(double s) const {
    return std::fabs(s) <= 1.0 ? 1.0 - s * s : 0.0;
}

double MaterialModel::mobility_eps(double s) const {
    double c = clamp(s, -1.0 + p_.eps, 1.0 - p_.eps);
    return 1.0 - c * c;
}

double MaterialModel::psi(double s) const {
    double q = 1.0 - s * s;
    return 0.25 * q * q;
}

double MaterialModel::psi_prime(double s) const { return s * s * s - s; }

double MaterialModel::psi_second(double s) const { return 3.0 * s * s - 1.0; }

double MaterialModel::psi_ln(double s) const {
    if (std::fabs(s) > 1.0)
        throw SingularArgument("psi_ln is defined on [-1,1]");
    return xlogx(1.0 + s) + xlogx(1.0 - s);
}

double MaterialModel::psi_ln_prime(double s) const {
    if (std::fabs(s) >= 1.0)
        throw SingularArgument("psi_ln' is singular at |s| >= 1");
    return std::log1p(s) - std::log1p(-s);
}

double MaterialModel::psi_ln_second(double s) const {
    if (std::fabs(s) >= 1.0)
        throw SingularArgument("psi_ln'' is singular at |s| >= 1");
    return 2.0 / (1.0 - s * s);
}

double MaterialModel::psi_eps(double s) const {
    if (p_.eps == 0.0) return psi(s);
    return psi(s) + p_.eps * psi_ln(s);
}

double MaterialModel::psi_eps_prime(double s) const {
    if (p_.eps == 0.0) return psi_prime(s);
    return psi_prime(s) + p_.eps * psi_ln_prime(s);
}

double MaterialModel::psi_eps_second(double s) const {
    if (p_.eps == 0.0) return psi_second(s);
    return psi_second(s) + p_.eps * psi_ln_second(s);
}

double MaterialModel::clamp_eval(double s) const {
    return clamp(s, -1.0 + delta_clip_, 1.0 - delta_clip_);
}

double MaterialModel::sqrt_a(double s) const { return std::sqrt(coef_a(s)); }

double MaterialModel::A_of(double s) const {
    if (a_const()) return std::sqrt(p_.a0) * s;
    return adaptive_gauss([this](double t) { return sqrt_a(t); }, 0.0, s,
                          1e-12);
}

double MaterialModel::A_inv(double r) const {
    if (a_const()) return r / std::sqrt(p_.a0);
    // A is strictly increasing with A'(s) = sqrt(a) >= sqrt(a0), so the root
    // lies within [0, r/sqrt(a0)] (resp. mirrored for r < 0).
    double lo = std::min(0.0, r / std::sqrt(p_.a0));
    double hi = std::max(0.0, r / std::sqrt(p_.a0));
    double x = r / std::sqrt(p_.a0 + 0.5 * p_.a1);
    for (int it = 0; it < 200; ++it) {
        double f = A_of(x) - r;
        if (std::fabs(f) <= 1e-12 * std::max(1.0, std::fabs(r))) return x;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        double step = f / sqrt_a(x);
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // bisection fallback
        if (xn == x) return x;
        x = xn;
    }
    throw NonConvergence("A_inv Newton iteration", 200, 0.0);
}

HermiteTable MaterialModel::build_entropy_table(bool clamped) const {
    // Graded nodes s = u (3 - u^2) / 2 cluster quadratically toward +-1 where
    // the unclamped integrand is singular; the mobility clamp kinks at
    // +-(1 - eps) are inserted as explicit nodes so every panel is smooth.
    const int nu = 2048;
    std::vector<double> nodes;
    nodes.reserve(nu + 5);
    for (int k = 0; k <= nu; ++k) {
        double u = -1.0 + 2.0 * k / nu;
        nodes.push_back(0.5 * u * (3.0 - u * u));
    }
    if (clamped && p_.eps > 0.0) {
        nodes.push_back(1.0 - p_.eps);
        nodes.push_back(-(1.0 - p_.eps));
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](double a, double b) {
                                return std::fabs(a - b) < 1e-14;
                            }),
                nodes.end());
    nodes.front() = -1.0;
    nodes.back() = 1.0;

    auto g2 = [this, clamped](double t) {
        double m = clamped ? mobility_eps(t) : mobility(t);
        return sqrt_a(t) / m;
    };

    const size_t n = nodes.size();
    size_t i0 = 0;  // index of s = 0
    for (size_t k = 0; k < n; ++k)
        if (std::fabs(nodes[k]) < 1e-13) i0 = k;

    std::vector<double> y(n, 0.0), d(n, 0.0);
    // Per-panel tolerance relative to a midpoint scale estimate; the graded
    // panels are smooth inside, so GK15 normally finishes without splitting.
    auto panel_quad = [](const std::function<double(double)>& f, double a,
                         double b) {
        double rough = std::fabs(f(0.5 * (a + b)) * (b - a));
        return adaptive_gauss(f, a, b, 1e-12 * std::max(1.0, rough));
    };

    // March outward from 0 in both directions; G(0) = G'(0) = 0.
    auto march = [&](bool up) {
        double yk = 0.0, dk = 0.0;
        size_t k = i0;
        while (up ? (k + 1 < n) : (k > 0)) {
            size_t kn = up ? k + 1 : k - 1;
            double s0 = nodes[k], s1 = nodes[kn];
            bool singular_end =
                !clamped && (std::fabs(std::fabs(s1) - 1.0) < 1e-14);
            // dG' over the panel; for the singular outermost panel of the
            // unclamped table G' diverges, so store a truncated proxy for the
            // Hermite slope (the value column below stays exact).
            double d_target = singular_end ? s0 + (s1 - s0) * (1.0 - 1e-3) : s1;
            double dd = panel_quad(g2, s0, d_target);
            // dG over the panel: Fubini turns the nested integral
            //   int_{s0}^{s1} [ G'(s0) + int_{s0}^{r} g2 ] dr
            // into a single-level one. The (s1 - t) factor also cancels the
            // endpoint singularity of the outermost unclamped panel.
            double dy = dk * (s1 - s0) +
                        panel_quad([&](double t) { return (s1 - t) * g2(t); },
                                   s0, s1);
            yk += dy;
            dk += dd;
            y[kn] = yk;
            d[kn] = dk;
            k = kn;
        }
    };
    march(true);
    march(false);
    return HermiteTable(nodes, y, d);
}

double MaterialModel::entropy_G(double s) const {
    if (std::fabs(s) > 1.0 + 1e-9)
        throw SingularArgument("entropy_G is defined on [-1,1]");
    return table_G_.eval(clamp(s, -1.0, 1.0));
}

double MaterialModel::entropy_G_eps(double s) const {
    return table_G_eps_.eval(clamp(s, -1.0, 1.0));
}

double MaterialModel::stabilization_S(double phi0_max_abs) const {
    double env = clamp(phi0_max_abs, 0.0, 1.0);
    double pad = p_.eps > 0.0
                     ? std::max(delta_clip_,
                                std::min(0.5 * p_.eps, 0.5 * (1.0 - env)))
                     : 0.0;
    double sstar = 1.0 - pad;
    double smax = 2.0;  // quartic curvature bound, the eps = 0 answer
    const int ns = 2000;
    for (int k = 0; k <= ns; ++k) {
        double s = sstar * k / ns;
        smax = std::max(smax, std::fabs(psi_eps_second(s)));
    }
    return smax;
}

std::pair<double, double> MaterialModel::mean_separation_constants(
    double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("alpha must lie in (0,1)");
    const double max_psi_prime = 2.0 / (3.0 * std::sqrt(3.0));
    double C = 0.5 * alpha;
    double c = 2.0 * max_psi_prime;
    if (p_.eps > 0.0) {
        double s_alpha = 1.0 - 0.5 * alpha;
        c += p_.eps * (2.0 + 0.5 * alpha) * psi_ln_prime(s_alpha);
    }
    return {C, c};
}

}  // namespace nsch
