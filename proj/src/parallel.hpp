#ifndef QLATTICE_SRC_PARALLEL_HPP
#define QLATTICE_SRC_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace qlattice::detail {

/// Worker count bounded by the QLATTICE_THREADS environment variable.
inline std::size_t worker_count(std::size_t jobs) {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("QLATTICE_THREADS")) {
        const long bound = std::strtol(env, nullptr, 10);
        if (bound >= 1 && static_cast<std::size_t>(bound) < n) n = static_cast<std::size_t>(bound);
    }
    return jobs < n ? (jobs == 0 ? 1 : jobs) : n;
}

/// Runs fn(i) for i in [0, jobs); results are written by index inside fn,
/// so the outcome is deterministic for any worker count. The first
/// exception thrown by a job is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t jobs, Fn&& fn) {
    const std::size_t workers = worker_count(jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < jobs; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

} // namespace qlattice::detail

#endif
