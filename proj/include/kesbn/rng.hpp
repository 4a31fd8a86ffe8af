#pragma once

#include <cstdint>

namespace kesbn {

// Deterministic pseudorandom source used everywhere randomness is needed.
//
// The generator is xoshiro256++ seeded through the splitmix64 finalizer, so a
// given (seed, call sequence) produces the same outputs on every platform and
// build. Nothing in the library uses <random> distributions: bounded integers
// and unit doubles are derived below with fixed arithmetic, which keeps data
// files and search runs byte-reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        for (auto& word : state_) word = mix64(seed += kGamma);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, bound). Rejection sampling, exact for any bound >= 1.
    std::uint64_t uniform_int(std::uint64_t bound) {
        const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % bound;
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Seed of sub-stream `index` of a base seed: the splitmix64 finalizer of
    // base + (index + 1) * golden gamma. Run i of an experiment draws from
    // substream(base_seed, i).
    static std::uint64_t substream(std::uint64_t base, std::uint64_t index) {
        return mix64(base + (index + 1) * kGamma);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
};

}  // namespace kesbn
