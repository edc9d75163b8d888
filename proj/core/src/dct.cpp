#include "nsch/dct.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace nsch {

namespace {

struct DctWorkspace {
    int nx = 0, ny = 0;
    double* buf = nullptr;
    fftw_plan fwd = nullptr;  // REDFT10 x REDFT10
    fftw_plan inv = nullptr;  // REDFT01 x REDFT01
    std::vector<double> lam_x, lam_y;  // eigenvalues of -Lap per mode

    DctWorkspace(const Grid& g) : nx(g.nx), ny(g.ny) {
        buf = fftw_alloc_real(static_cast<size_t>(nx) * ny);
        // Row-major with j slowest matches FFTW's (n0, n1) = (ny, nx).
        fwd = fftw_plan_r2r_2d(ny, nx, buf, buf, FFTW_REDFT10, FFTW_REDFT10,
                               FFTW_ESTIMATE);
        inv = fftw_plan_r2r_2d(ny, nx, buf, buf, FFTW_REDFT01, FFTW_REDFT01,
                               FFTW_ESTIMATE);
        lam_x.resize(nx);
        lam_y.resize(ny);
        for (int i = 0; i < nx; ++i)
            lam_x[i] = (2.0 - 2.0 * std::cos(M_PI * i / nx)) / (g.hx * g.hx);
        for (int j = 0; j < ny; ++j)
            lam_y[j] = (2.0 - 2.0 * std::cos(M_PI * j / ny)) / (g.hy * g.hy);
    }
    ~DctWorkspace() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
        fftw_free(buf);
    }
    DctWorkspace(const DctWorkspace&) = delete;
    DctWorkspace& operator=(const DctWorkspace&) = delete;
};

DctWorkspace& workspace_for(const Grid& g) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<DctWorkspace>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(g.nx, g.ny);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<DctWorkspace>(g)).first;
    return *it->second;
}

}  // namespace

void dct_modal_solve(const Grid& g, double c0, double c2, double c4,
                     const std::vector<double>& r, std::vector<double>& z) {
    DctWorkspace& ws = workspace_for(g);
    const size_t n = static_cast<size_t>(g.nx) * g.ny;
    assert(r.size() == n);
    std::memcpy(ws.buf, r.data(), n * sizeof(double));
    fftw_execute(ws.fwd);
    const double scale = 1.0 / (4.0 * g.nx * g.ny);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double lam = ws.lam_x[i] + ws.lam_y[j];
            double sig = c0 + c2 * lam + c4 * lam * lam;
            size_t k = static_cast<size_t>(j) * g.nx + i;
            ws.buf[k] = (sig == 0.0) ? 0.0 : ws.buf[k] * scale / sig;
        }
    }
    fftw_execute(ws.inv);
    z.resize(n);
    std::memcpy(z.data(), ws.buf, n * sizeof(double));
}

}  // namespace nsch
