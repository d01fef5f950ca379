// Deterministic random number utilities.
//
// All randomness in this library flows through SplitMix64 streams keyed by
// (seed, stream index). The generator and the value transforms below are
// fixed algorithms, so results are bit-identical across platforms, compilers
// and thread counts.
#pragma once

#include <cstdint>

namespace mabt {

// Vigna's splitmix64. Full 2^64 period, passes BigCrush.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform double in (0, 1); never returns an exact endpoint.
    double uniform_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Fixed-point multiply; the O(n/2^64) bias is
    // far below anything observable at the sample sizes in scope.
    std::uint64_t uniform_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

private:
    std::uint64_t state_;
};

// Derives an independent stream key from a master seed and a stream index.
// Used to key per-resample, per-run and per-dataset generators so that work
// can be scheduled in any order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
    g.next();
    return g.next();
}

} // namespace mabt
