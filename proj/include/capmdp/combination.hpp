#pragma once

// Policy combinations: one binary action per state packed into an integer
// code, bit i holding the action of state i.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace capmdp::combo {

/// Widest state space whose combinations we are willing to enumerate.
inline constexpr std::size_t kMaxBits = 20;

std::uint32_t encode(std::span<const std::uint8_t> row);
void decode(std::uint32_t code, std::span<std::uint8_t> out);
std::vector<std::uint8_t> decode(std::uint32_t code, std::size_t n);

inline std::uint32_t count(std::size_t n) { return std::uint32_t{1} << n; }

/// All codes for n states, ordered so that the decoded rows are ascending in
/// lexicographic order (state 0 most significant).
std::vector<std::uint32_t> lex_order(std::size_t n);

/// Throws ParameterError when n exceeds kMaxBits or is zero.
void require_enumerable(std::size_t n);

} // namespace capmdp::combo
