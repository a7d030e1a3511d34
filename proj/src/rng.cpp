#include "capmdp/rng.hpp"

namespace capmdp {

namespace {
std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }
} // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{lo32(seed), hi32(seed), lo32(stream), hi32(stream)};
    engine_.seed(seq);
}

} // namespace capmdp
