#include "nsch/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace nsch {

int max_threads() {
    static const int cached = [] {
        const char* env = std::getenv("NSCH_THREADS");
        if (!env) return 1;
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1) return 1;
        unsigned hw = std::thread::hardware_concurrency();
        if (hw > 0 && n > static_cast<long>(hw)) n = hw;
        return static_cast<int>(n);
    }();
    return cached;
}

void parallel_for(int n, const std::function<void(int, int)>& fn) {
    int nt = max_threads();
    if (nt <= 1 || n < 2 * nt) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(nt);
    int chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        int b = t * chunk;
        int e = std::min(n, b + chunk);
        if (b >= e) break;
        workers.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& w : workers) w.join();
}

}  // namespace nsch
