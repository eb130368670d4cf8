#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace tradeoff {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream keyed by (seed, stream id). Uniform and normal variates are
/// produced by explicit formulas so output does not depend on the standard
/// library's distribution implementations.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : gen_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

    /// Uniform on (0, 1).
    double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log(uniform()));
        double t = 6.283185307179586476925 * uniform();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    bool coin() { return (gen_() >> 63) != 0; }

    std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * n) % n; }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline constexpr std::uint64_t kBlockDraws = 4096;

/// Splits `draws` into fixed-size blocks, each with its own stream, and runs them on
/// up to `threads` workers. Returns per-block results in block order, so any
/// in-order reduction is independent of the worker count.
template <class Result, class Fn>
std::vector<Result> run_blocks(std::uint64_t draws, int threads, Fn fn) {
    std::uint64_t n_blocks = (draws + kBlockDraws - 1) / kBlockDraws;
    std::vector<Result> out(n_blocks);
    auto work = [&](std::uint64_t first, std::uint64_t stride) {
        for (std::uint64_t b = first; b < n_blocks; b += stride) {
            std::uint64_t begin = b * kBlockDraws;
            std::uint64_t end = std::min(draws, begin + kBlockDraws);
            out[b] = fn(b, end - begin);
        }
    };
    std::uint64_t workers = std::clamp<std::uint64_t>(threads < 1 ? 1 : threads, 1, std::max<std::uint64_t>(n_blocks, 1));
    if (workers == 1) {
        work(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace tradeoff
