#include "algsat/bits.hpp"

#include "algsat/diag.hpp"

namespace algsat {

std::string bits_to_hex(const BitVec& bits) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (size_t i = 0; i < bits.size(); i += 4) {
        int v = 0;
        for (size_t j = 0; j < 4; ++j) {
            v <<= 1;
            if (i + j < bits.size() && bits[i + j]) v |= 1;
        }
        out.push_back(digits[v]);
    }
    return out;
}

static int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

BitVec hex_to_bits(const std::string& hex, size_t nbits) {
    if (hex.size() * 4 < nbits)
        throw Error("hex string '" + hex + "' too short for " + std::to_string(nbits) + " bits");
    if (hex.size() != (nbits + 3) / 4)
        throw Error("hex string '" + hex + "' has wrong length for " + std::to_string(nbits) + " bits");
    BitVec bits(nbits, 0);
    for (size_t i = 0; i < nbits; ++i) {
        int v = hex_val(hex[i / 4]);
        if (v < 0) throw Error(std::string("invalid hex character '") + hex[i / 4] + "'");
        bits[i] = (v >> (3 - (i % 4))) & 1;
    }
    // padding bits beyond nbits must be zero
    for (size_t i = nbits; i < hex.size() * 4; ++i) {
        int v = hex_val(hex[i / 4]);
        if (v < 0) throw Error(std::string("invalid hex character '") + hex[i / 4] + "'");
        if ((v >> (3 - (i % 4))) & 1)
            throw Error("nonzero padding in hex string '" + hex + "'");
    }
    return bits;
}

uint64_t BitRng::next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t BitRng::next_below(uint64_t bound) {
    // rejection sampling keeps the distribution exact
    uint64_t mask = bound - 1;
    mask |= mask >> 1; mask |= mask >> 2; mask |= mask >> 4;
    mask |= mask >> 8; mask |= mask >> 16; mask |= mask >> 32;
    uint64_t v;
    do { v = next_u64() & mask; } while (v >= bound);
    return v;
}

BitVec BitRng::next_bits(size_t n) {
    BitVec out(n);
    uint64_t buf = 0;
    int have = 0;
    for (size_t i = 0; i < n; ++i) {
        if (have == 0) { buf = next_u64(); have = 64; }
        out[i] = buf & 1;
        buf >>= 1;
        --have;
    }
    return out;
}

} // namespace algsat
