#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dsf {

/// Worker count resolution: explicit request > DSF_WORKERS > hardware.
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("DSF_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs f(i) for i in [0, n) across `workers` threads with static interleaved
/// scheduling. Callers index results by i, so output never depends on the
/// worker count.
template <class F>
void parallel_for(std::int64_t n, int workers, F&& f) {
    workers = resolve_workers(workers);
    if (workers <= 1 || n <= 1) {
        for (std::int64_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::mutex mu;
    std::exception_ptr first_error;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::int64_t i = w; i < n; i += workers) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dsf
