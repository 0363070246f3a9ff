#pragma once
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lim {

std::size_t default_threads();

// Calls job(i) for i in [0, n) on `threads` workers. Jobs write into their own
// slot, so results come back in index order whatever the completion order.
// The first exception (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& job);

template <class T>
std::vector<T> parallel_map(std::size_t n, std::size_t threads, const std::function<T(std::size_t)>& job) {
    std::vector<T> out(n);
    parallel_for(n, threads, [&](std::size_t i) { out[i] = job(i); });
    return out;
}

} // namespace lim
