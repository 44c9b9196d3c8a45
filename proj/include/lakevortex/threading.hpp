#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace lakevortex {

/// Run independent tasks on up to `threads` workers. Each task writes to its
/// own slot, so results do not depend on the schedule.
inline void parallel_run(std::vector<std::function<void()>>& tasks, int threads) {
    if (threads <= 1 || tasks.size() <= 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            tasks[i]();
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(threads, static_cast<int>(tasks.size()));
    pool.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace lakevortex
