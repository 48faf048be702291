#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace polyrad {

/// Worker count: POLYRAD_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
inline unsigned thread_count() {
    if (const char* env = std::getenv("POLYRAD_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = f(i) for i in [0, n), spread over thread_count() workers.
/// Results keep their index order; the first exception is rethrown.
template <class F>
auto parallel_map(std::size_t n, F f) -> std::vector<decltype(f(std::size_t{}))> {
    using T = decltype(f(std::size_t{}));
    std::vector<T> out(n);
    const unsigned workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) out[i] = f(i);
            } catch (...) {
                errors[w] = std::current_exception();
                next = n;
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace polyrad
