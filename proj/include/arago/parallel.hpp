#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace arago {

// Applies f to 0..n-1 on up to `threads` workers; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int threads, F f) {
    std::vector<T> out(n);
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    for (std::size_t t = 0; t < k; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return out;
}

} // namespace arago
