#include "nsch/ops.hpp"

#include "nsch/parallel.hpp"

namespace nsch {

FaceField grad_cc_to_face(const Grid& g, const ScalarField& f) {
    assert(compatible(g, f));
    FaceField out(g);
    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    parallel_for(ny, [&](int jb, int je) {
        for (int j = jb; j < je; ++j)
            for (int i = 1; i < nx; ++i)
                out.fx(i, j) = (f(i, j) - f(i - 1, j)) * ihx;
    });
    parallel_for(ny - 1, [&](int jb, int je) {
        for (int j = jb + 1; j < je + 1; ++j)
            for (int i = 0; i < nx; ++i)
                out.fy(i, j) = (f(i, j) - f(i, j - 1)) * ihy;
    });
    return out;
}

ScalarField div_face_to_cc(const Grid& g, const FaceField& F) {
    assert(compatible(g, F));
    ScalarField out(g);
    const int nx = g.nx;
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    parallel_for(g.ny, [&](int jb, int je) {
        for (int j = jb; j < je; ++j)
            for (int i = 0; i < nx; ++i)
                out(i, j) = (F.fx(i + 1, j) - F.fx(i, j)) * ihx +
                            (F.fy(i, j + 1) - F.fy(i, j)) * ihy;
    });
    return out;
}

ScalarField laplace_neumann(const Grid& g, const ScalarField& f) {
    // Literal composition keeps the operator identity laplace = div(grad)
    // bitwise; mirrored ghosts are realized by the zeroed boundary gradients.
    return div_face_to_cc(g, grad_cc_to_face(g, f));
}

ScalarField advect_upwind(const Grid& g, const ScalarField& phi,
                          const FaceField& F) {
    assert(compatible(g, phi) && compatible(g, F));
    const int nx = g.nx, ny = g.ny;
    FaceField q(g);
    parallel_for(ny, [&](int jb, int je) {
        for (int j = jb; j < je; ++j)
            for (int i = 1; i < nx; ++i) {
                double Fv = F.fx(i, j);
                q.fx(i, j) = Fv * (Fv >= 0.0 ? phi(i - 1, j) : phi(i, j));
            }
    });
    parallel_for(ny - 1, [&](int jb, int je) {
        for (int j = jb + 1; j < je + 1; ++j)
            for (int i = 0; i < nx; ++i) {
                double Fv = F.fy(i, j);
                q.fy(i, j) = Fv * (Fv >= 0.0 ? phi(i, j - 1) : phi(i, j));
            }
    });
    return div_face_to_cc(g, q);
}

double inner_cc(const Grid& g, const ScalarField& a, const ScalarField& b) {
    long double s = 0.0L;
    for (size_t k = 0; k < a.v.size(); ++k)
        s += static_cast<long double>(a.v[k]) * b.v[k];
    return static_cast<double>(s) * g.cell_measure();
}

double inner_face(const Grid& g, const FaceField& a, const FaceField& b) {
    long double s = 0.0L;
    for (size_t k = 0; k < a.x.size(); ++k)
        s += static_cast<long double>(a.x[k]) * b.x[k];
    for (size_t k = 0; k < a.y.size(); ++k)
        s += static_cast<long double>(a.y[k]) * b.y[k];
    return static_cast<double>(s) * g.cell_measure();
}

}  // namespace nsch
