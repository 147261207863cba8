#pragma once

// Deterministic work splitting: tasks are indexed, every index gets its
// result slot, and worker count only changes scheduling, never output.

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ecl {

// Runs body(i) for i in [0, count) on `workers` threads.  body must write
// only to its own index's state.  The first exception is rethrown after
// all workers join.
inline void parallel_indexed(std::size_t count, unsigned workers,
                             const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> threads;
    std::mutex error_mu;
    std::exception_ptr error;
    std::size_t next = 0;
    std::mutex next_mu;
    const unsigned n = std::min<std::size_t>(workers, count);
    for (unsigned w = 0; w < n; ++w) {
        threads.emplace_back([&] {
            while (true) {
                std::size_t i;
                {
                    std::lock_guard lock(next_mu);
                    if (next >= count) return;
                    i = next++;
                }
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace ecl
