#pragma once

#include <functional>
#include <vector>

namespace nsch {

// Adaptive Gauss-Kronrod (7,15) quadrature with interval bisection.
// tol is an absolute tolerance for the whole interval; integrands must be
// finite at the Kronrod nodes (all interior, so integrable endpoint
// singularities are fine). Throws SingularArgument if the refinement depth
// is exhausted before the error estimate drops below tol.
double adaptive_gauss(const std::function<double(double)>& f, double a,
                      double b, double tol, int max_depth = 52);

// Piecewise cubic Hermite interpolant on a sorted node set. Used for the
// tabulated entropy functionals where values and first derivatives are both
// produced by cumulative quadrature.
class HermiteTable {
  public:
    HermiteTable() = default;
    HermiteTable(std::vector<double> x, std::vector<double> y,
                 std::vector<double> d);

    // Clamps s to the node range.
    double eval(double s) const;
    double front_x() const { return x_.front(); }
    double back_x() const { return x_.back(); }

  private:
    std::vector<double> x_, y_, d_;
};

}  // namespace nsch
