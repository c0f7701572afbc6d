#pragma once

#include <cstdint>
#include <future>
#include <random>
#include <thread>
#include <vector>

namespace cvf {

/// SplitMix64 mixing step; used to derive independent per-sample seeds.
inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for sample `index` of a run seeded with `seed`. Scheduling-independent:
/// the value depends only on (seed, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Evaluates fn(0..count-1) into a vector, chunked across threads. Results are
/// positional, so the output is independent of the thread schedule.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn) {
    std::vector<T> out(count);
    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
    if (workers <= 1 || count < 512) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::future<void>> tasks;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        tasks.push_back(std::async(std::launch::async, [&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
        }));
    }
    for (auto& t : tasks) t.get();
    return out;
}

} // namespace cvf
