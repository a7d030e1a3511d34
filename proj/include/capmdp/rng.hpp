#pragma once

// Portable random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the standard.
// Stream splitting: sub-stream k of seed s is seeded through std::seed_seq
// with the words {lo32(s), hi32(s), lo32(k), hi32(k)}; seed_seq's mixing is
// also standardized, so every platform sees the same numbers. Uniform doubles
// take the top 53 bits of one engine output (std::uniform_real_distribution
// is implementation-defined and is not used).

#include <cstdint>
#include <random>

namespace capmdp {

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

} // namespace capmdp
