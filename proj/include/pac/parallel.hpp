#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pac {

/// Smallest index in [0, count) for which `test` holds, or count when none
/// does. With jobs > 1 indices are claimed by worker threads, but the answer
/// is the same as the sequential scan.
inline std::size_t first_match(std::size_t count, int jobs, const std::function<bool(std::size_t)>& test)
{
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i)
            if (test(i))
                return i;
        return count;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> found{count};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        try {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count || i >= found.load())
                    return;
                if (test(i)) {
                    std::size_t cur = found.load();
                    while (i < cur && !found.compare_exchange_weak(cur, i)) {
                    }
                }
            }
        } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error)
                error = std::current_exception();
            found.store(0);
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(jobs, static_cast<int>(count));
    for (int t = 0; t < n; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return found.load();
}

/// Runs body(i) for every i in [0, count) on up to `jobs` threads.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body)
{
    first_match(count, jobs, [&](std::size_t i) {
        body(i);
        return false;
    });
}

} // namespace pac
