#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nsch/errors.hpp"

namespace nsch {

// Uniform rectangular cell-centered grid. Scalars live at cell centers,
// vector components at the centers of the faces normal to them (MAC layout).
struct Grid {
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    double hx = 0.0, hy = 0.0;

    Grid() = default;
    Grid(int nx_, int ny_, double lx_, double ly_)
        : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
        if (nx < 4 || ny < 4)
            throw ConfigError("grid dimensions must be at least 4x4");
        if (!(lx > 0.0) || !(ly > 0.0))
            throw ConfigError("grid extents must be positive");
        hx = lx / nx;
        hy = ly / ny;
    }

    double cell_measure() const { return hx * hy; }
    int cells() const { return nx * ny; }
    // Cell center coordinates.
    double xc(int i) const { return (i + 0.5) * hx; }
    double yc(int j) const { return (j + 0.5) * hy; }

    bool same_as(const Grid& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
};

// Cell-centered scalar field, row-major: index (i,j) -> j*nx + i.
struct ScalarField {
    int nx = 0, ny = 0;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : nx(g.nx), ny(g.ny), v(static_cast<size_t>(g.nx) * g.ny, fill) {}

    double& operator()(int i, int j) {
        assert(i >= 0 && i < nx && j >= 0 && j < ny);
        return v[static_cast<size_t>(j) * nx + i];
    }
    double operator()(int i, int j) const {
        assert(i >= 0 && i < nx && j >= 0 && j < ny);
        return v[static_cast<size_t>(j) * nx + i];
    }
    size_t size() const { return v.size(); }
};

// Face-normal vector field on the MAC grid.
// x-component on x-faces: (nx+1) x ny, index (i,j) -> j*(nx+1) + i, i in [0,nx].
// y-component on y-faces: nx x (ny+1), index (i,j) -> j*nx + i, j in [0,ny].
// Faces with i in {0,nx} (resp. j in {0,ny}) are boundary faces.
struct FaceField {
    int nx = 0, ny = 0;
    std::vector<double> x;
    std::vector<double> y;

    FaceField() = default;
    explicit FaceField(const Grid& g, double fill = 0.0)
        : nx(g.nx),
          ny(g.ny),
          x(static_cast<size_t>(g.nx + 1) * g.ny, fill),
          y(static_cast<size_t>(g.nx) * (g.ny + 1), fill) {}

    double& fx(int i, int j) {
        assert(i >= 0 && i <= nx && j >= 0 && j < ny);
        return x[static_cast<size_t>(j) * (nx + 1) + i];
    }
    double fx(int i, int j) const {
        assert(i >= 0 && i <= nx && j >= 0 && j < ny);
        return x[static_cast<size_t>(j) * (nx + 1) + i];
    }
    double& fy(int i, int j) {
        assert(i >= 0 && i < nx && j >= 0 && j <= ny);
        return y[static_cast<size_t>(j) * nx + i];
    }
    double fy(int i, int j) const {
        assert(i >= 0 && i < nx && j >= 0 && j <= ny);
        return y[static_cast<size_t>(j) * nx + i];
    }
};

inline bool compatible(const Grid& g, const ScalarField& f) {
    return f.nx == g.nx && f.ny == g.ny;
}
inline bool compatible(const Grid& g, const FaceField& f) {
    return f.nx == g.nx && f.ny == g.ny;
}

// Long-double accumulation keeps reductions reproducible and accurate enough
// for the 1e-11 mass-drift budget without compensated summation.
inline double sum(const std::vector<double>& a) {
    long double s = 0.0L;
    for (double x : a) s += x;
    return static_cast<double>(s);
}

inline double mean(const ScalarField& f) {
    return sum(f.v) / static_cast<double>(f.v.size());
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    assert(a.size() == b.size());
    long double s = 0.0L;
    for (size_t k = 0; k < a.size(); ++k)
        s += static_cast<long double>(a[k]) * b[k];
    return static_cast<double>(s);
}

inline double norm2(const std::vector<double>& a) {
    return std::sqrt(dot(a, a));
}

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::fabs(x));
    return m;
}

inline double max_abs(const FaceField& f) {
    return std::max(max_abs(f.x), max_abs(f.y));
}

inline bool all_finite(const std::vector<double>& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace nsch
