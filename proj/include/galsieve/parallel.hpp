#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace galsieve {

/// Worker count: GALOIS_SIEVE_THREADS if set and positive, else the hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("GALOIS_SIEVE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Half-open range of shard `i` when [0, n) is cut into `shards` contiguous pieces.
inline std::pair<std::size_t, std::size_t> shard_range(std::size_t n, std::size_t shards,
                                                       std::size_t i) {
    return {n * i / shards, n * (i + 1) / shards};
}

/// Runs body(shard) for shard in [0, shards) on a pool of workers. Each shard
/// must write only its own output slot; the first exception is rethrown.
template <class Body>
void parallel_shards(std::size_t shards, Body&& body, unsigned workers = worker_count()) {
    if (shards == 0) return;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, shards));
    if (workers <= 1) {
        for (std::size_t i = 0; i < shards; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < shards; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    pool.clear();
    if (error) std::rethrow_exception(error);
}

}  // namespace galsieve
