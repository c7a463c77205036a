#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace bnls {

/// Run fn(i) for i in [0, count) on up to `workers` threads. Results must be
/// written to caller-preallocated slots so output order stays deterministic.
inline void parallel_for(int count, int workers, const std::function<void(int)>& fn)
{
    if (count <= 0) return;
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline int default_workers()
{
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 2;
}

} // namespace bnls
