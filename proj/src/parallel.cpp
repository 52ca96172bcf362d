#include "meanper/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace meanper {

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_thread_count(unsigned count) {
    if (count == 0) count = std::max(1u, std::thread::hardware_concurrency());
    g_threads.store(count, std::memory_order_relaxed);
}

unsigned thread_count() { return g_threads.load(std::memory_order_relaxed); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    std::vector<std::exception_ptr> failures(n);
    auto run = [&](std::size_t first) {
        for (std::size_t i = first; i < n; i += std::max<std::size_t>(workers, 1)) {
            try {
                body(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
        run(0);
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
}

}  // namespace meanper
