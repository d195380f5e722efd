#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace gkps {

// Assembly parallelism cap from GK_THREADS; default is the single-threaded
// reference path.  Outputs are bitwise identical for any thread count because
// every index writes only its own slots.
inline int max_threads() {
    const char* env = std::getenv("GK_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    if (v < 1) return 1;
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    return hw > 0 ? std::min(v, hw) : v;
}

template <class F>
void parallel_for(int n, F&& body) {
    const int nt = std::min(max_threads(), n > 0 ? n : 1);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (int i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace gkps
