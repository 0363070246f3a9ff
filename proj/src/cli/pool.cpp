#include "lim/cli/pool.hpp"

#include <algorithm>

namespace lim {

std::size_t default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& job) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex m;
    std::size_t err_index = n;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            if (failed.load()) return;
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                job(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(m);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
                failed = true;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
}

} // namespace lim
