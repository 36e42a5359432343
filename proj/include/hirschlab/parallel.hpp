#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hirschlab/error.hpp"

namespace hirschlab {

/// Wall-clock limit shared by a deep computation. A default Deadline never expires.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    Deadline() = default;
    explicit Deadline(std::chrono::duration<double> budget)
        : until_(Clock::now() + std::chrono::duration_cast<Clock::duration>(budget))
    {
    }

    bool expired() const { return until_ && Clock::now() >= *until_; }

    void check(const char* stage, std::size_t progress) const
    {
        if (expired())
            throw BudgetExhausted(std::string("budget exhausted during ") + stage, progress);
    }

private:
    std::optional<Clock::time_point> until_;
};

/**
 * Runs fn(i) for i in [0, n) on up to `jobs` threads. Work is claimed in index
 * order; the first exception thrown is rethrown after all threads join.
 */
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn)
{
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t)
        threads.emplace_back(worker);
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace hirschlab
