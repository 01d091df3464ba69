#ifndef FTB_CORE_PARALLEL_HPP
#define FTB_CORE_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ftb {

// Runs f(i) for i in [0,n) on up to `jobs` threads. Completion order is
// unspecified; callers must write results into per-index slots. The first
// exception wins and is rethrown on the calling thread after all workers stop.
template <typename F>
void parallel_for_indexed(std::size_t n, std::size_t jobs, F&& f) {
    if (n == 0) {
        return;
    }
    if (jobs <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }
    const std::size_t worker_count = jobs < n ? jobs : n;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) {
                return;
            }
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(worker_count);
    for (std::size_t t = 0; t < worker_count; ++t) {
        threads.emplace_back(worker);
    }
    for (std::thread& t : threads) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

}  // namespace ftb

#endif
