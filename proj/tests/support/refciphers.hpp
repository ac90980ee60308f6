#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "algsat/bits.hpp"

// Standalone implementations of the corpus functions, written directly from
// the public cipher specifications. They never touch the translator and act
// as the independent side of every round-trip check.
namespace refciphers {

using algsat::BitVec;

// bit <-> byte packing: most significant bit of each byte first
BitVec bytes_to_bits(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> bits_to_bytes(const BitVec& bits);
BitVec words_to_bits(const uint32_t* words, size_t count); // little-endian byte order
std::vector<uint32_t> bits_to_words(const BitVec& bits);

BitVec and2(const BitVec& in);   // 2 -> 1
BitVec maj3(const BitVec& in);   // 3 -> 1
BitVec lfsr16(const BitVec& seed, int len = 32);
BitVec geffe96(const BitVec& key, int len = 200);
BitVec bivium(const BitVec& state, int len = 200);
BitVec trivium(const BitVec& state, int len = 300);
BitVec grain(const BitVec& state, int len = 160);
BitVec a5_1(const BitVec& state, int len = 114);

// Single-block compression with explicit chaining input, feed-forward
// included (the corpus signature: IV[128] ++ M[512] -> H[128]).
std::array<uint32_t, 4> md4_compress(std::array<uint32_t, 4> iv, const uint32_t m[16]);
std::array<uint32_t, 4> md5_compress(std::array<uint32_t, 4> iv, const uint32_t m[16]);
BitVec md4(const BitVec& iv_and_block);
BitVec md5(const BitVec& iv_and_block);

std::array<uint32_t, 4> standard_md_iv();
// packs (IV, M) into the corpus 640-bit input layout
BitVec md_input(const std::array<uint32_t, 4>& iv, const uint32_t m[16]);
// pads a byte message into 512-bit blocks (MD4/MD5 share the padding rule)
std::vector<std::vector<uint32_t>> md_pad(const std::vector<uint8_t>& msg);
// full hashes for digest cross-checks
std::vector<uint8_t> md4_digest(const std::vector<uint8_t>& msg);
std::vector<uint8_t> md5_digest(const std::vector<uint8_t>& msg);

// dispatch by corpus entry name
BitVec run_named(const std::string& name, const BitVec& input);

} // namespace refciphers
