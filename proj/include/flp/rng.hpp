#pragma once

#include <cstdint>

namespace flp {

// SplitMix64 (Steele, Lea, Flood 2014). Used for all sampling so that
// results are bit-identical across platforms and standard library
// implementations, unlike std::uniform_real_distribution.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in the open interval (0,1): 53 mantissa bits offset by
    // half an ulp so 0 and 1 are never produced (safe to feed a quantile).
    double next_unit() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Derives an independent stream seed from a master seed and a stream index.
// Trials seeded this way agree between serial and parallel execution.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    SplitMix64 mix(master ^ (0xA0761D6478BD642FULL * (index + 1)));
    return mix.next();
}

}  // namespace flp
