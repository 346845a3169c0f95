#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace cmab {

/// SplitMix64 finalizer. Used to derive independent per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Mixes a master seed with a stream index. Distinct indices give
/// statistically unrelated engines.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Random source owned by a single consumer (one trial, one thread).
///
/// The uniform helpers are written out rather than using the standard
/// distribution adaptors so that streams are identical across standard
/// library implementations.
class RandomSource {
public:
    using result_type = std::uint64_t;

    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    static RandomSource for_stream(std::uint64_t master_seed, std::uint64_t stream) {
        return RandomSource(derive_seed(master_seed, stream));
    }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// True with probability p (for p in [0, 1]).
    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return static_cast<std::size_t>(r % bound);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace cmab
