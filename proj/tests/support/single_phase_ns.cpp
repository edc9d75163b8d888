#include "single_phase_ns.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace refns {

namespace {

double ldot(const std::vector<double>& a, const std::vector<double>& b) {
    long double s = 0.0L;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += static_cast<long double>(a[k]) * b[k];
    return static_cast<double>(s);
}

double lmean(const std::vector<double>& a) {
    long double s = 0.0L;
    for (double x : a) s += x;
    return static_cast<double>(s / static_cast<long double>(a.size()));
}

}  // namespace

SinglePhaseSolver::SinglePhaseSolver(const Params& p)
    : p_(p),
      hx_(p.lx / p.nx),
      hy_(p.ly / p.ny),
      u_(static_cast<std::size_t>(p.nx + 1) * p.ny, 0.0),
      v_(static_cast<std::size_t>(p.nx) * (p.ny + 1), 0.0),
      g_(static_cast<std::size_t>(p.nx) * p.ny, 0.0) {}

std::size_t SinglePhaseSolver::ui(int i, int j) const {
    return static_cast<std::size_t>(j) * (p_.nx + 1) + i;
}
std::size_t SinglePhaseSolver::vi(int i, int j) const {
    return static_cast<std::size_t>(j) * p_.nx + i;
}
std::size_t SinglePhaseSolver::ci(int i, int j) const {
    return static_cast<std::size_t>(j) * p_.nx + i;
}
std::size_t SinglePhaseSolver::ni(int i, int j) const {
    return static_cast<std::size_t>(j) * (p_.nx + 1) + i;
}

// Negative divergence of the viscous stress 2 eta D(v), the gradient of
// int eta |D v|^2 in the face metric. Tangential wall ghosts reflect, which
// shows up as doubled one-sided shear differences and doubled wall-corner
// weights in the scatter.
void SinglePhaseSolver::viscous_apply(const std::vector<double>& xu,
                                      const std::vector<double>& xv,
                                      std::vector<double>& yu,
                                      std::vector<double>& yv) const {
    const int nx = p_.nx, ny = p_.ny;
    std::vector<double> exx(static_cast<std::size_t>(nx) * ny);
    std::vector<double> eyy(static_cast<std::size_t>(nx) * ny);
    std::vector<double> exy(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            exx[ci(i, j)] = (xu[ui(i + 1, j)] - xu[ui(i, j)]) / hx_;
            eyy[ci(i, j)] = (xv[vi(i, j + 1)] - xv[vi(i, j)]) / hy_;
        }
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            double dudy;
            if (j == 0)
                dudy = 2.0 * xu[ui(i, 0)] / hy_;
            else if (j == ny)
                dudy = -2.0 * xu[ui(i, ny - 1)] / hy_;
            else
                dudy = (xu[ui(i, j)] - xu[ui(i, j - 1)]) / hy_;
            double dvdx;
            if (i == 0)
                dvdx = 2.0 * xv[vi(0, j)] / hx_;
            else if (i == nx)
                dvdx = -2.0 * xv[vi(nx - 1, j)] / hx_;
            else
                dvdx = (xv[vi(i, j)] - xv[vi(i - 1, j)]) / hx_;
            exy[ni(i, j)] = 0.5 * (dudy + dvdx);
        }

    const double e2 = 2.0 * p_.eta;
    std::fill(yu.begin(), yu.end(), 0.0);
    std::fill(yv.begin(), yv.end(), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double cs = (j == 0) ? 2.0 : 1.0;
            const double cn = (j == ny - 1) ? 2.0 : 1.0;
            yu[ui(i, j)] = e2 * (exx[ci(i - 1, j)] - exx[ci(i, j)]) / hx_ +
                           e2 * (cs * exy[ni(i, j)] - cn * exy[ni(i, j + 1)]) /
                               hy_;
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double cw = (i == 0) ? 2.0 : 1.0;
            const double ce = (i == nx - 1) ? 2.0 : 1.0;
            yv[vi(i, j)] = e2 * (eyy[ci(i, j - 1)] - eyy[ci(i, j)]) / hy_ +
                           e2 * (cw * exy[ni(i, j)] - ce * exy[ni(i + 1, j)]) /
                               hx_;
        }
}

// Conservative first-order upwind divergence of (rho v) v on the staggered
// control volumes; wall transverse fluxes vanish with the wall mass flux.
void SinglePhaseSolver::advect(std::vector<double>& au,
                               std::vector<double>& av) const {
    const int nx = p_.nx, ny = p_.ny;
    const double rho = p_.rho;
    au.assign(u_.size(), 0.0);
    av.assign(v_.size(), 0.0);
    auto up = [](double flux, double lo, double hi) {
        if (flux > 0.0) return flux * lo;
        if (flux < 0.0) return flux * hi;
        return 0.0;
    };
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const double ge = rho * 0.5 * (u_[ui(i, j)] + u_[ui(i + 1, j)]);
            const double gw = rho * 0.5 * (u_[ui(i - 1, j)] + u_[ui(i, j)]);
            const double gn =
                rho * 0.5 * (v_[vi(i - 1, j + 1)] + v_[vi(i, j + 1)]);
            const double gs = rho * 0.5 * (v_[vi(i - 1, j)] + v_[vi(i, j)]);
            const double fe = up(ge, u_[ui(i, j)],
                                 u_[ui(i + 1, j)]);
            const double fw = up(gw, u_[ui(i - 1, j)], u_[ui(i, j)]);
            const double fn =
                up(gn, u_[ui(i, j)], gn < 0.0 ? u_[ui(i, j + 1)] : 0.0);
            const double fs =
                up(gs, gs > 0.0 ? u_[ui(i, j - 1)] : 0.0, u_[ui(i, j)]);
            au[ui(i, j)] = (fe - fw) / hx_ + (fn - fs) / hy_;
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double ge =
                rho * 0.5 * (u_[ui(i + 1, j - 1)] + u_[ui(i + 1, j)]);
            const double gw = rho * 0.5 * (u_[ui(i, j - 1)] + u_[ui(i, j)]);
            const double gn = rho * 0.5 * (v_[vi(i, j)] + v_[vi(i, j + 1)]);
            const double gs = rho * 0.5 * (v_[vi(i, j - 1)] + v_[vi(i, j)]);
            const double fe =
                up(ge, v_[vi(i, j)], ge < 0.0 ? v_[vi(i + 1, j)] : 0.0);
            const double fw =
                up(gw, gw > 0.0 ? v_[vi(i - 1, j)] : 0.0, v_[vi(i, j)]);
            const double fn = up(gn, v_[vi(i, j)], v_[vi(i, j + 1)]);
            const double fs = up(gs, v_[vi(i, j - 1)], v_[vi(i, j)]);
            av[vi(i, j)] = (fe - fw) / hx_ + (fn - fs) / hy_;
        }
}

// (rho/dt + L) v* = rho/dt v - adv - grad g, solved by plain CG on the
// interior faces (boundary faces stay pinned at zero).
void SinglePhaseSolver::predictor(std::vector<double>& su,
                                  std::vector<double>& sv) const {
    const int nx = p_.nx, ny = p_.ny;
    const double idt = 1.0 / p_.dt;
    std::vector<double> au, av;
    advect(au, av);
    std::vector<double> bu(u_.size(), 0.0), bv(v_.size(), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            bu[ui(i, j)] = p_.rho * idt * u_[ui(i, j)] - au[ui(i, j)] -
                           (g_[ci(i, j)] - g_[ci(i - 1, j)]) / hx_;
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            bv[vi(i, j)] = p_.rho * idt * v_[vi(i, j)] - av[vi(i, j)] -
                           (g_[ci(i, j)] - g_[ci(i, j - 1)]) / hy_;

    auto apply = [&](const std::vector<double>& xu,
                     const std::vector<double>& xv, std::vector<double>& yu,
                     std::vector<double>& yv) {
        viscous_apply(xu, xv, yu, yv);
        for (int j = 0; j < ny; ++j)
            for (int i = 1; i < nx; ++i)
                yu[ui(i, j)] += p_.rho * idt * xu[ui(i, j)];
        for (int j = 1; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                yv[vi(i, j)] += p_.rho * idt * xv[vi(i, j)];
    };

    su = u_;
    sv = v_;
    std::vector<double> ru(u_.size()), rv(v_.size());
    std::vector<double> pu(u_.size()), pv(v_.size());
    std::vector<double> qu(u_.size()), qv(v_.size());
    apply(su, sv, qu, qv);
    for (std::size_t k = 0; k < ru.size(); ++k) ru[k] = bu[k] - qu[k];
    for (std::size_t k = 0; k < rv.size(); ++k) rv[k] = bv[k] - qv[k];
    const double nb = std::sqrt(ldot(bu, bu) + ldot(bv, bv));
    if (nb == 0.0) {
        su.assign(u_.size(), 0.0);
        sv.assign(v_.size(), 0.0);
        return;
    }
    double rr = ldot(ru, ru) + ldot(rv, rv);
    pu = ru;
    pv = rv;
    const int cap = 20 * static_cast<int>(ru.size() + rv.size());
    for (int it = 0; it < cap; ++it) {
        if (std::sqrt(rr) <= p_.tol * nb) return;
        apply(pu, pv, qu, qv);
        const double pap = ldot(pu, qu) + ldot(pv, qv);
        if (!(pap > 0.0)) throw std::runtime_error("reference CG breakdown");
        const double alpha = rr / pap;
        for (std::size_t k = 0; k < su.size(); ++k) su[k] += alpha * pu[k];
        for (std::size_t k = 0; k < sv.size(); ++k) sv[k] += alpha * pv[k];
        for (std::size_t k = 0; k < ru.size(); ++k) ru[k] -= alpha * qu[k];
        for (std::size_t k = 0; k < rv.size(); ++k) rv[k] -= alpha * qv[k];
        const double rr2 = ldot(ru, ru) + ldot(rv, rv);
        const double beta = rr2 / rr;
        rr = rr2;
        for (std::size_t k = 0; k < pu.size(); ++k)
            pu[k] = ru[k] + beta * pu[k];
        for (std::size_t k = 0; k < pv.size(); ++k)
            pv[k] = rv[k] + beta * pv[k];
    }
    throw std::runtime_error("reference viscous CG did not converge");
}

// div((1/rho) grad dg) = div(v*)/dt by CG on the mean-zero cell space.
void SinglePhaseSolver::project(std::vector<double>& su,
                                std::vector<double>& sv) {
    const int nx = p_.nx, ny = p_.ny;
    std::vector<double> rhs(g_.size(), 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            rhs[ci(i, j)] = ((su[ui(i + 1, j)] - su[ui(i, j)]) / hx_ +
                             (sv[vi(i, j + 1)] - sv[vi(i, j)]) / hy_) /
                            p_.dt;
    const double rm = lmean(rhs);
    for (double& x : rhs) x -= rm;

    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        const double bx = 1.0 / (p_.rho * hx_ * hx_);
        const double by = 1.0 / (p_.rho * hy_ * hy_);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                double acc = 0.0;
                if (i > 0) acc += bx * (x[ci(i - 1, j)] - x[ci(i, j)]);
                if (i < nx - 1) acc += bx * (x[ci(i + 1, j)] - x[ci(i, j)]);
                if (j > 0) acc += by * (x[ci(i, j - 1)] - x[ci(i, j)]);
                if (j < ny - 1) acc += by * (x[ci(i, j + 1)] - x[ci(i, j)]);
                y[ci(i, j)] = acc;
            }
    };

    std::vector<double> dg(g_.size(), 0.0), r = rhs, p = rhs, q(g_.size());
    const double nb = std::sqrt(ldot(rhs, rhs));
    if (nb > 0.0) {
        double rr = ldot(r, r);
        const int cap = 20 * static_cast<int>(g_.size());
        int it = 0;
        while (std::sqrt(rr) > p_.tol * nb) {
            if (++it > cap)
                throw std::runtime_error(
                    "reference projection CG did not converge");
            apply(p, q);
            const double pap = ldot(p, q);
            if (!(pap < 0.0))
                throw std::runtime_error("reference projection CG breakdown");
            const double alpha = rr / pap;
            for (std::size_t k = 0; k < dg.size(); ++k) dg[k] += alpha * p[k];
            for (std::size_t k = 0; k < r.size(); ++k) r[k] -= alpha * q[k];
            const double rr2 = ldot(r, r);
            const double beta = rr2 / rr;
            rr = rr2;
            for (std::size_t k = 0; k < p.size(); ++k)
                p[k] = r[k] + beta * p[k];
        }
        const double dm = lmean(dg);
        for (double& x : dg) x -= dm;
    }

    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            su[ui(i, j)] -= p_.dt / p_.rho *
                            (dg[ci(i, j)] - dg[ci(i - 1, j)]) / hx_;
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            sv[vi(i, j)] -= p_.dt / p_.rho *
                            (dg[ci(i, j)] - dg[ci(i, j - 1)]) / hy_;
    for (std::size_t k = 0; k < g_.size(); ++k) g_[k] += dg[k];
    const double gm = lmean(g_);
    for (double& x : g_) x -= gm;
}

void SinglePhaseSolver::step() {
    std::vector<double> su, sv;
    predictor(su, sv);
    project(su, sv);
    u_ = std::move(su);
    v_ = std::move(sv);
}

}  // namespace refns
