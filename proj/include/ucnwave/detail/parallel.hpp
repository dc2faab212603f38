#pragma once

#include <atomic>
#include <future>
#include <thread>
#include <vector>

namespace ucn::detail {

inline int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const auto hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 2;
}

/// Runs fn(0..count-1) over a small worker pool. Work items must be
/// independent; results should land at their own index so output order stays
/// deterministic regardless of scheduling.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const int n_workers = std::min<int>(resolve_threads(threads), static_cast<int>(count));
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> futs;
    futs.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        }));
    }
    for (auto& f : futs) f.get();
}

}  // namespace ucn::detail
