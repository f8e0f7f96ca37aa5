#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace tsra {

// splitmix64 finalizer; used to derive independent substream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random stream. All draws are defined directly on the raw
// 64-bit output of std::mt19937_64 so that results are identical across
// standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // True with probability clamp(p, 0, 1). Consumes exactly one draw.
    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
        const std::uint64_t all = ~std::uint64_t{0};
        const std::uint64_t rem = (all % n + 1) % n;
        std::uint64_t x = next_u64();
        while (x > all - rem) x = next_u64();
        return x % n;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace tsra
