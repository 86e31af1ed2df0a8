#pragma once

#include <cmath>
#include <cstdint>

namespace hawkes {

// splitmix64, used to expand seeds into generator state
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ with the sampling primitives the simulators need. Small, fast and
// seedable per path, so parallel and serial runs draw identical streams.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    // Knuth's product method; exact, fine for the small means used here
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean > 30.0) return poisson(0.5 * mean) + poisson(mean - 0.5 * mean);
        double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Counter-based per-path stream: identical draws regardless of thread scheduling.
inline Xoshiro256pp path_rng(std::uint64_t seed, std::uint64_t path_index) {
    return Xoshiro256pp(seed ^ (0x9E3779B97F4A7C15ULL * (path_index + 0x632BE59BD9B4E019ULL)));
}

}  // namespace hawkes
