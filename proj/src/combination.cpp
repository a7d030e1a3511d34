#include "capmdp/combination.hpp"

#include "capmdp/errors.hpp"

#include <string>

namespace capmdp::combo {

std::uint32_t encode(std::span<const std::uint8_t> row) {
    std::uint32_t code = 0;
    for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i]) code |= std::uint32_t{1} << i;
    return code;
}

void decode(std::uint32_t code, std::span<std::uint8_t> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (code >> i) & 1u;
}

std::vector<std::uint8_t> decode(std::uint32_t code, std::size_t n) {
    std::vector<std::uint8_t> row(n);
    decode(code, row);
    return row;
}

std::vector<std::uint32_t> lex_order(std::size_t n) {
    std::vector<std::uint32_t> codes(count(n));
    for (std::uint32_t k = 0; k < codes.size(); ++k) {
        // k read with state 0 as its most significant bit
        std::uint32_t code = 0;
        for (std::size_t i = 0; i < n; ++i)
            if ((k >> (n - 1 - i)) & 1u) code |= std::uint32_t{1} << i;
        codes[k] = code;
    }
    return codes;
}

void require_enumerable(std::size_t n) {
    if (n == 0 || n > kMaxBits)
        throw ParameterError("policy combinations need 1.." + std::to_string(kMaxBits) +
                             " states, got " + std::to_string(n));
}

} // namespace capmdp::combo
