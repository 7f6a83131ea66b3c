#pragma once

#include <cstdint>

namespace lgt {

// Deterministic, platform-stable RNG (splitmix64). std::mt19937_64 would be
// portable too, but the distributions on top of it are not; every stochastic
// result in this project must be bit-reproducible from its seed, so the
// uniform-double and bounded-int derivations are spelled out here.
class RandomSource {
  public:
    explicit RandomSource(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 significant bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // Uniform integer in [0, n) via 128-bit multiply-shift.
    uint64_t next_below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

  private:
    uint64_t state_;
};

// Stable seed derivation for independent streams (trajectory index, stage id).
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0) {
    RandomSource r(master ^ (0x9e3779b97f4a7c15ULL * (a + 1)) ^ (0xc2b2ae3d27d4eb4fULL * (b + 1)));
    return r.next_u64();
}

} // namespace lgt
