#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace qart::detail {

// Runs f(i) for i in [0, n). Work items must be independent; results should be
// written to per-index slots so the outcome does not depend on scheduling.
template <typename F>
void for_each_index(std::size_t n, std::size_t threads, F&& f) {
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(threads == 0 ? hw : threads, n);
    if (workers < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) f(i);
        }));
    }
    for (auto& fu : futures) fu.get();
}

}  // namespace qart::detail
