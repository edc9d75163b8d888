#include "nsch/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "nsch/errors.hpp"

namespace nsch {

namespace {

// Gauss-Kronrod (7,15) nodes and weights on [-1,1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct PanelResult {
    double kronrod;
    double err;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double f1 = f(c - x);
        double f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    double kron = resk * h;
    double gauss = resg * h;
    return {kron, std::fabs(kron - gauss)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth, double err_floor) {
    PanelResult r = gk15(f, a, b);
    // The floor stops refinement once a panel error reaches round-off scale;
    // without it an integrable singularity at 0 never terminates, because
    // the halved tolerance and the panel error shrink at the same rate.
    if (r.err <= std::max(tol, err_floor) ||
        b - a <= std::fabs(a) * 1e-15)
        return r.kronrod;
    if (depth <= 0)
        throw SingularArgument("adaptive quadrature failed to converge");
    double c = 0.5 * (a + b);
    return adapt(f, a, c, 0.5 * tol, depth - 1, err_floor) +
           adapt(f, c, b, 0.5 * tol, depth - 1, err_floor);
}

}  // namespace

double adaptive_gauss(const std::function<double(double)>& f, double a,
                      double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    if (a > b) return -adaptive_gauss(f, b, a, tol, max_depth);
    const double scale = std::fabs(gk15(f, a, b).kronrod);
    return adapt(f, a, b, tol, max_depth, 1e-16 * scale);
}

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> y,
                           std::vector<double> d)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
    if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != d_.size())
        throw Error("HermiteTable: inconsistent node data");
}

double HermiteTable::eval(double s) const {
    if (s <= x_.front()) s = x_.front();
    if (s >= x_.back()) s = x_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), s);
    size_t k = (it == x_.begin()) ? 0 : (it - x_.begin() - 1);
    if (k >= x_.size() - 1) k = x_.size() - 2;
    double h = x_[k + 1] - x_[k];
    double u = (s - x_[k]) / h;
    double u2 = u * u;
    double u3 = u2 * u;
    double h00 = 2 * u3 - 3 * u2 + 1;
    double h10 = u3 - 2 * u2 + u;
    double h01 = -2 * u3 + 3 * u2;
    double h11 = u3 - u2;
    return h00 * y_[k] + h * h10 * d_[k] + h01 * y_[k + 1] +
           h * h11 * d_[k + 1];
}

}  // namespace nsch
