#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace algsat {

using BitVec = std::vector<uint8_t>; // each element 0 or 1

// MSB-first hex: bit 0 of the vector is the most significant bit of the
// first hex digit. For byte-oriented data this matches the usual byte-hex
// string when bits are declared most-significant-first within each byte.
std::string bits_to_hex(const BitVec& bits);

// Inverse of bits_to_hex; `nbits` trims padding introduced by rounding up
// to a whole digit. Throws Error on non-hex characters or length mismatch.
BitVec hex_to_bits(const std::string& hex, size_t nbits);

// Seeded generator for reproducible random bit vectors (splitmix64 core).
class BitRng {
public:
    explicit BitRng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64();
    // uniform in [0, bound)
    uint64_t next_below(uint64_t bound);
    BitVec   next_bits(size_t n);

private:
    uint64_t state_;
};

} // namespace algsat
