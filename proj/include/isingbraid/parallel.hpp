#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace isingbraid {

/// Runs body(i) for i in [0, n) on up to `jobs` threads (0 = hardware
/// concurrency). Each index runs exactly once; the first exception thrown by
/// any worker is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t n, std::size_t jobs, Body &&body) {
    if (jobs == 0) {
        jobs = std::max(1U, std::thread::hardware_concurrency());
    }
    jobs = std::min(jobs, n);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed = true;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace isingbraid
