#pragma once

#include <cmath>
#include <cstdint>

namespace rgg {

// xoshiro256** seeded through splitmix64. All randomness in the project flows
// from one base seed; replica streams are derived by counter so results do not
// depend on execution order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : state_) w = splitmix64(x);
    }

    static Rng for_replica(std::uint64_t base_seed, std::uint64_t replica,
                           std::uint64_t stream = 0) {
        std::uint64_t x = base_seed;
        std::uint64_t a = splitmix64(x);
        x = a ^ (replica * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
        std::uint64_t b = splitmix64(x);
        x = b ^ (stream * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL);
        return Rng(splitmix64(x));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exponential waiting time; rate must be positive. Uses log1p so u == 0 is safe.
    double exponential(double rate) { return -std::log1p(-next_unit()) / rate; }

    // Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // multiply-shift; bias is negligible for bound << 2^64 and this is not
        // a cryptographic context
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    bool bernoulli(double p) { return next_unit() < p; }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
};

}  // namespace rgg
