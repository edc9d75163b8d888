#include "nsch/poisson.hpp"

#include <cmath>

#include "nsch/dct.hpp"
#include "nsch/errors.hpp"
#include "nsch/ops.hpp"
#include "nsch/parallel.hpp"

namespace nsch {

ScalarField apply_varcoef_laplacian(const Grid& g, const FaceField& beta,
                                    const ScalarField& f) {
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    ScalarField out(g);
    parallel_for(ny, [&](int jb, int je) {
        for (int j = jb; j < je; ++j)
            for (int i = 0; i < nx; ++i) {
                double ge = (i + 1 < nx)
                                ? beta.fx(i + 1, j) * (f(i + 1, j) - f(i, j)) * ihx
                                : 0.0;
                double gw = (i > 0)
                                ? beta.fx(i, j) * (f(i, j) - f(i - 1, j)) * ihx
                                : 0.0;
                double gn = (j + 1 < ny)
                                ? beta.fy(i, j + 1) * (f(i, j + 1) - f(i, j)) * ihy
                                : 0.0;
                double gs = (j > 0)
                                ? beta.fy(i, j) * (f(i, j) - f(i, j - 1)) * ihy
                                : 0.0;
                out(i, j) = (ge - gw) * ihx + (gn - gs) * ihy;
            }
    });
    return out;
}

namespace {

double rms(const std::vector<double>& a) {
    return norm2(a) / std::sqrt(static_cast<double>(a.size()));
}

double max_face_value(const Grid& g, const FaceField& beta) {
    double m = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) m = std::max(m, beta.fx(i, j));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) m = std::max(m, beta.fy(i, j));
    return m;
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    for (size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

void recenter(std::vector<double>& a) {
    double m = sum(a) / static_cast<double>(a.size());
    for (double& x : a) x -= m;
}

}  // namespace

ScalarField solve_poisson_varcoef(const Grid& g, const FaceField& beta,
                                  const ScalarField& rhs, double tol,
                                  int max_iter_factor) {
    assert(compatible(g, beta) && compatible(g, rhs));
    const size_t n = rhs.v.size();

    double rhs_rms = rms(rhs.v);
    double rhs_mean = mean(rhs);
    if (rhs_rms == 0.0) return ScalarField(g);  // trivially solved by f = 0
    if (std::fabs(rhs_mean) > 1e-10 * rhs_rms)
        throw IncompatibleRHS("Neumann Poisson right-hand side has nonzero mean");

    // Work with the SPD operator A = -div(beta grad .) on the mean-zero
    // subspace; project the residual-level mean wobble away once up front.
    ScalarField b(g);
    for (size_t k = 0; k < n; ++k) b.v[k] = -(rhs.v[k] - rhs_mean);

    double beta_hat = max_face_value(g, beta);
    if (beta_hat <= 0.0)
        // Zero operator; only the zero RHS is compatible and that returned
        // earlier, so anything else cannot converge.
        throw NonConvergence("coefficient field is identically zero", 0,
                             rhs_rms);

    ScalarField f(g);
    std::vector<double> r = b.v;
    std::vector<double> z(n), p(n), Ap(n);

    const double bnorm = norm2(b.v);
    const long max_iter =
        static_cast<long>(max_iter_factor) * g.nx * g.ny;

    dct_modal_solve(g, 0.0, beta_hat, 0.0, r, z);
    p = z;
    double rz = dot(r, z);
    double rnorm = norm2(r);
    long it = 0;
    while (rnorm > tol * bnorm) {
        if (it >= max_iter)
            throw NonConvergence("variable-coefficient Poisson solve", (int)it,
                                 rnorm / bnorm);
        ScalarField pf(g);
        pf.v = p;
        ScalarField Apf = apply_varcoef_laplacian(g, beta, pf);
        for (size_t k = 0; k < n; ++k) Ap[k] = -Apf.v[k];
        double pAp = dot(p, Ap);
        if (pAp <= 0.0)
            throw NonConvergence("Poisson operator lost positivity", (int)it,
                                 rnorm / bnorm);
        double alpha = rz / pAp;
        axpy(f.v, alpha, p);
        axpy(r, -alpha, Ap);
        rnorm = norm2(r);
        if (rnorm <= tol * bnorm) break;
        dct_modal_solve(g, 0.0, beta_hat, 0.0, r, z);
        double rz_new = dot(r, z);
        double betak = rz_new / rz;
        rz = rz_new;
        for (size_t k = 0; k < n; ++k) p[k] = z[k] + betak * p[k];
        ++it;
    }
    recenter(f.v);
    return f;
}

}  // namespace nsch
