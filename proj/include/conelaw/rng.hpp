#pragma once

#include <cmath>
#include <cstdint>

namespace conelaw {

// SplitMix64. All sampling goes through it; the <random> distributions are
// implementation-defined and reports must be bit-identical across runs and
// worker counts.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53 usable bits
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // magnitudes spread evenly across decades; lo, hi must be positive
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

private:
    std::uint64_t state_;
};

// Independent substream for a given index. Sample i never depends on
// samples < i, so any batch partition reproduces the sequential run.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(seed + index * 0x9e3779b97f4a7c15ull).next_u64();
}

}  // namespace conelaw
