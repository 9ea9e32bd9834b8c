#ifndef NMM_UTIL_HPP
#define NMM_UTIL_HPP

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace nmm {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// FNV-1a 64-bit hash, stable across platforms. Used for config hashes.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Worker cap for embarrassingly parallel loops. NMM_THREADS overrides;
/// unset means sequential.
inline int worker_count() {
    if (const char* env = std::getenv("NMM_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

/// Chunked parallel map over [0, n). Each index is processed exactly once,
/// with a fixed per-index evaluation order, so results are bitwise
/// reproducible for any thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    int workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}

#endif
