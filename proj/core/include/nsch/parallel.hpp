#pragma once

#include <functional>

namespace nsch {

// Thread cap from NSCH_THREADS (positive integer); 1 when the variable is
// absent or malformed. Read once per process.
int max_threads();

// Runs fn(begin, end) over a partition of [0, n) into contiguous blocks,
// one per worker. Only used for independent per-index map loops; reductions
// stay serial so results are bitwise independent of the thread count.
void parallel_for(int n, const std::function<void(int, int)>& fn);

}  // namespace nsch
