#pragma once

#include <vector>

#include "nsch/types.hpp"

namespace nsch {

// Direct solver for constant-coefficient operators of the form
//   (c0 + c2*(-Lap) + c4*Lap^2) z = r
// under the mirrored-ghost Neumann Laplacian, diagonalized by DCT-II.
// When c0 == 0 the operator is singular on constants and the zero mode of
// z is set to 0 (pseudo-inverse on the mean-zero subspace).
// Used as a preconditioner inside the iterative solvers; plans are cached
// per grid size with FFTW_ESTIMATE so results stay deterministic.
void dct_modal_solve(const Grid& g, double c0, double c2, double c4,
                     const std::vector<double>& r, std::vector<double>& z);

}  // namespace nsch
