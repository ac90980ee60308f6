#include "support/refciphers.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace refciphers {

BitVec bytes_to_bits(const std::vector<uint8_t>& bytes) {
    BitVec out(bytes.size() * 8);
    for (size_t k = 0; k < bytes.size(); ++k)
        for (int j = 0; j < 8; ++j) out[8 * k + size_t(j)] = (bytes[k] >> (7 - j)) & 1;
    return out;
}

std::vector<uint8_t> bits_to_bytes(const BitVec& bits) {
    if (bits.size() % 8) throw std::runtime_error("bits_to_bytes: length not a byte multiple");
    std::vector<uint8_t> out(bits.size() / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i)
        out[i / 8] = uint8_t(out[i / 8] | (bits[i] << (7 - (i % 8))));
    return out;
}

BitVec words_to_bits(const uint32_t* words, size_t count) {
    std::vector<uint8_t> bytes;
    bytes.reserve(count * 4);
    for (size_t w = 0; w < count; ++w)
        for (int b = 0; b < 4; ++b) bytes.push_back(uint8_t(words[w] >> (8 * b)));
    return bytes_to_bits(bytes);
}

std::vector<uint32_t> bits_to_words(const BitVec& bits) {
    std::vector<uint8_t> bytes = bits_to_bytes(bits);
    if (bytes.size() % 4) throw std::runtime_error("bits_to_words: length not a word multiple");
    std::vector<uint32_t> out(bytes.size() / 4, 0);
    for (size_t i = 0; i < bytes.size(); ++i)
        out[i / 4] |= uint32_t(bytes[i]) << (8 * (i % 4));
    return out;
}

BitVec and2(const BitVec& in) { return {uint8_t(in[0] & in[1])}; }

BitVec maj3(const BitVec& in) {
    return {uint8_t((in[0] & in[1]) ^ (in[1] & in[2]) ^ (in[0] & in[2]))};
}

namespace {

// Fibonacci LFSR: s[0..L-1], output s[L-1], feedback xor of tap cells,
// shift towards higher indices, feedback enters at s[0].
struct Lfsr {
    std::vector<uint8_t> s;
    std::vector<int> taps; // cell indices

    uint8_t out() const { return s.back(); }
    void clock() {
        uint8_t fb = 0;
        for (int t : taps) fb ^= s[size_t(t)];
        for (size_t j = s.size() - 1; j > 0; --j) s[j] = s[j - 1];
        s[0] = fb;
    }
};

} // namespace

BitVec lfsr16(const BitVec& seed, int len) {
    Lfsr r{{seed.begin(), seed.end()}, {15, 13, 12, 10}};
    BitVec out;
    for (int t = 0; t < len; ++t) {
        out.push_back(r.out());
        r.clock();
    }
    return out;
}

BitVec geffe96(const BitVec& key, int len) {
    Lfsr r1{{key.begin(), key.begin() + 31}, {30, 6}};
    Lfsr r2{{key.begin() + 31, key.begin() + 63}, {31, 6, 4, 2, 1, 0}};
    Lfsr r3{{key.begin() + 63, key.begin() + 96}, {32, 15, 3, 0}};
    BitVec out;
    for (int t = 0; t < len; ++t) {
        uint8_t x1 = r1.out(), x2 = r2.out(), x3 = r3.out();
        out.push_back(uint8_t((x1 & x2) ^ (x2 & x3) ^ (x1 & x3)));
        r1.clock();
        r2.clock();
        r3.clock();
    }
    return out;
}

BitVec bivium(const BitVec& state, int len) {
    std::vector<uint8_t> a(state.begin(), state.begin() + 93);
    std::vector<uint8_t> b(state.begin() + 93, state.begin() + 177);
    BitVec out;
    for (int t = 0; t < len; ++t) {
        uint8_t t1 = a[65] ^ a[92];
        uint8_t t2 = b[68] ^ b[83];
        out.push_back(uint8_t(t1 ^ t2));
        uint8_t na = uint8_t(t2 ^ (b[81] & b[82]) ^ a[68]);
        uint8_t nb = uint8_t(t1 ^ (a[90] & a[91]) ^ b[77]);
        for (size_t j = 92; j > 0; --j) a[j] = a[j - 1];
        for (size_t j = 83; j > 0; --j) b[j] = b[j - 1];
        a[0] = na;
        b[0] = nb;
    }
    return out;
}

BitVec trivium(const BitVec& state, int len) {
    std::vector<uint8_t> a(state.begin(), state.begin() + 93);
    std::vector<uint8_t> b(state.begin() + 93, state.begin() + 177);
    std::vector<uint8_t> c(state.begin() + 177, state.begin() + 288);
    BitVec out;
    for (int t = 0; t < len; ++t) {
        uint8_t t1 = a[65] ^ a[92];
        uint8_t t2 = b[68] ^ b[83];
        uint8_t t3 = c[65] ^ c[110];
        out.push_back(uint8_t(t1 ^ t2 ^ t3));
        uint8_t na = uint8_t(t3 ^ (c[108] & c[109]) ^ a[68]);
        uint8_t nb = uint8_t(t1 ^ (a[90] & a[91]) ^ b[77]);
        uint8_t nc = uint8_t(t2 ^ (b[81] & b[82]) ^ c[86]);
        for (size_t j = 92; j > 0; --j) a[j] = a[j - 1];
        for (size_t j = 83; j > 0; --j) b[j] = b[j - 1];
        for (size_t j = 110; j > 0; --j) c[j] = c[j - 1];
        a[0] = na;
        b[0] = nb;
        c[0] = nc;
    }
    return out;
}

BitVec grain(const BitVec& state, int len) {
    // state = NFSR b[0..79] then LFSR s[0..79]; cell i holds b_{t+i}/s_{t+i}
    std::vector<uint8_t> b(state.begin(), state.begin() + 80);
    std::vector<uint8_t> s(state.begin() + 80, state.begin() + 160);
    BitVec out;
    for (int t = 0; t < len; ++t) {
        uint8_t x0 = s[3], x1 = s[25], x2 = s[46], x3 = s[64], x4 = b[63];
        uint8_t h = uint8_t(x1 ^ x4 ^ (x0 & x3) ^ (x2 & x3) ^ (x3 & x4) ^ (x0 & x1 & x2) ^
                            (x0 & x2 & x3) ^ (x0 & x2 & x4) ^ (x1 & x2 & x4) ^ (x2 & x3 & x4));
        uint8_t z = uint8_t(h ^ b[1] ^ b[2] ^ b[4] ^ b[10] ^ b[31] ^ b[43] ^ b[56]);
        out.push_back(z);
        uint8_t fl = uint8_t(s[62] ^ s[51] ^ s[38] ^ s[23] ^ s[13] ^ s[0]);
        uint8_t fn = uint8_t(
            s[0] ^ b[62] ^ b[60] ^ b[52] ^ b[45] ^ b[37] ^ b[33] ^ b[28] ^ b[21] ^ b[14] ^
            b[9] ^ b[0] ^ (b[63] & b[60]) ^ (b[37] & b[33]) ^ (b[15] & b[9]) ^
            (b[60] & b[52] & b[45]) ^ (b[33] & b[28] & b[21]) ^ (b[63] & b[45] & b[28] & b[9]) ^
            (b[60] & b[52] & b[37] & b[33]) ^ (b[63] & b[60] & b[21] & b[15]) ^
            (b[63] & b[60] & b[52] & b[45] & b[37]) ^ (b[33] & b[28] & b[21] & b[15] & b[9]) ^
            (b[52] & b[45] & b[37] & b[33] & b[28] & b[21]));
        for (size_t j = 0; j + 1 < 80; ++j) {
            b[j] = b[j + 1];
            s[j] = s[j + 1];
        }
        b[79] = fn;
        s[79] = fl;
    }
    return out;
}

BitVec a5_1(const BitVec& state, int len) {
    std::vector<uint8_t> r1(state.begin(), state.begin() + 19);
    std::vector<uint8_t> r2(state.begin() + 19, state.begin() + 41);
    std::vector<uint8_t> r3(state.begin() + 41, state.begin() + 64);
    auto shift = [](std::vector<uint8_t>& r, std::initializer_list<int> taps) {
        uint8_t fb = 0;
        for (int t : taps) fb ^= r[size_t(t)];
        for (size_t j = r.size() - 1; j > 0; --j) r[j] = r[j - 1];
        r[0] = fb;
    };
    BitVec out;
    for (int t = 0; t < len; ++t) {
        uint8_t m = uint8_t((r1[8] & r2[10]) ^ (r2[10] & r3[10]) ^ (r1[8] & r3[10]));
        if (r1[8] == m) shift(r1, {18, 17, 16, 13});
        if (r2[10] == m) shift(r2, {21, 20});
        if (r3[10] == m) shift(r3, {22, 21, 20, 7});
        out.push_back(uint8_t(r1[18] ^ r2[21] ^ r3[22]));
    }
    return out;
}

// --- MD4 / MD5 -----------------------------------------------------------

namespace {

inline uint32_t rotl(uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }

} // namespace

std::array<uint32_t, 4> md4_compress(std::array<uint32_t, 4> iv, const uint32_t m[16]) {
    auto F = [](uint32_t x, uint32_t y, uint32_t z) { return (x & y) | (~x & z); };
    auto G = [](uint32_t x, uint32_t y, uint32_t z) { return (x & y) | (x & z) | (y & z); };
    auto H = [](uint32_t x, uint32_t y, uint32_t z) { return x ^ y ^ z; };
    uint32_t a = iv[0], b = iv[1], c = iv[2], d = iv[3];

    static const int s1[4] = {3, 7, 11, 19};
    static const int s2[4] = {3, 5, 9, 13};
    static const int s3[4] = {3, 9, 11, 15};
    static const int k2[16] = {0, 4, 8, 12, 1, 5, 9, 13, 2, 6, 10, 14, 3, 7, 11, 15};
    static const int k3[16] = {0, 8, 4, 12, 2, 10, 6, 14, 1, 9, 5, 13, 3, 11, 7, 15};

    for (int i = 0; i < 16; i += 4) {
        a = rotl(a + F(b, c, d) + m[i + 0], s1[0]);
        d = rotl(d + F(a, b, c) + m[i + 1], s1[1]);
        c = rotl(c + F(d, a, b) + m[i + 2], s1[2]);
        b = rotl(b + F(c, d, a) + m[i + 3], s1[3]);
    }
    for (int i = 0; i < 4; ++i) {
        a = rotl(a + G(b, c, d) + m[k2[4 * i + 0]] + 0x5a827999u, s2[0]);
        d = rotl(d + G(a, b, c) + m[k2[4 * i + 1]] + 0x5a827999u, s2[1]);
        c = rotl(c + G(d, a, b) + m[k2[4 * i + 2]] + 0x5a827999u, s2[2]);
        b = rotl(b + G(c, d, a) + m[k2[4 * i + 3]] + 0x5a827999u, s2[3]);
    }
    for (int i = 0; i < 4; ++i) {
        a = rotl(a + H(b, c, d) + m[k3[4 * i + 0]] + 0x6ed9eba1u, s3[0]);
        d = rotl(d + H(a, b, c) + m[k3[4 * i + 1]] + 0x6ed9eba1u, s3[1]);
        c = rotl(c + H(d, a, b) + m[k3[4 * i + 2]] + 0x6ed9eba1u, s3[2]);
        b = rotl(b + H(c, d, a) + m[k3[4 * i + 3]] + 0x6ed9eba1u, s3[3]);
    }
    return {iv[0] + a, iv[1] + b, iv[2] + c, iv[3] + d};
}

std::array<uint32_t, 4> md5_compress(std::array<uint32_t, 4> iv, const uint32_t m[16]) {
    auto F = [](uint32_t x, uint32_t y, uint32_t z) { return (x & y) | (~x & z); };
    auto G = [](uint32_t x, uint32_t y, uint32_t z) { return (x & z) | (y & ~z); };
    auto H = [](uint32_t x, uint32_t y, uint32_t z) { return x ^ y ^ z; };
    auto I = [](uint32_t x, uint32_t y, uint32_t z) { return y ^ (x | ~z); };

    static const int S[4][4] = {{7, 12, 17, 22}, {5, 9, 14, 20}, {4, 11, 16, 23}, {6, 10, 15, 21}};
    uint32_t a = iv[0], b = iv[1], c = iv[2], d = iv[3];
    for (int i = 0; i < 64; ++i) {
        uint32_t f;
        int k;
        int round = i / 16;
        switch (round) {
            case 0: f = F(b, c, d); k = i; break;
            case 1: f = G(b, c, d); k = (1 + 5 * i) % 16; break;
            case 2: f = H(b, c, d); k = (5 + 3 * i) % 16; break;
            default: f = I(b, c, d); k = (7 * i) % 16; break;
        }
        uint32_t ti = uint32_t(4294967296.0 * std::fabs(std::sin(double(i + 1))));
        uint32_t tmp = d;
        d = c;
        c = b;
        b = b + rotl(a + f + m[k] + ti, S[round][i % 4]);
        a = tmp;
    }
    return {iv[0] + a, iv[1] + b, iv[2] + c, iv[3] + d};
}

std::array<uint32_t, 4> standard_md_iv() {
    return {0x67452301u, 0xefcdab89u, 0x98badcfeu, 0x10325476u};
}

BitVec md_input(const std::array<uint32_t, 4>& iv, const uint32_t m[16]) {
    BitVec bits = words_to_bits(iv.data(), 4);
    BitVec mb = words_to_bits(m, 16);
    bits.insert(bits.end(), mb.begin(), mb.end());
    return bits;
}

static BitVec md_common(const BitVec& in, bool is_md5) {
    if (in.size() != 640) throw std::runtime_error("md input must be 640 bits (IV ++ block)");
    BitVec ivbits(in.begin(), in.begin() + 128);
    BitVec mbits(in.begin() + 128, in.end());
    std::vector<uint32_t> ivw = bits_to_words(ivbits);
    std::vector<uint32_t> mw = bits_to_words(mbits);
    std::array<uint32_t, 4> iv{ivw[0], ivw[1], ivw[2], ivw[3]};
    std::array<uint32_t, 4> h = is_md5 ? md5_compress(iv, mw.data()) : md4_compress(iv, mw.data());
    return words_to_bits(h.data(), 4);
}

BitVec md4(const BitVec& in) { return md_common(in, false); }
BitVec md5(const BitVec& in) { return md_common(in, true); }

std::vector<std::vector<uint32_t>> md_pad(const std::vector<uint8_t>& msg) {
    std::vector<uint8_t> padded = msg;
    uint64_t bitlen = uint64_t(msg.size()) * 8;
    padded.push_back(0x80);
    while (padded.size() % 64 != 56) padded.push_back(0);
    for (int i = 0; i < 8; ++i) padded.push_back(uint8_t(bitlen >> (8 * i)));
    std::vector<std::vector<uint32_t>> blocks;
    for (size_t off = 0; off < padded.size(); off += 64) {
        std::vector<uint32_t> w(16, 0);
        for (int i = 0; i < 64; ++i) w[size_t(i / 4)] |= uint32_t(padded[off + size_t(i)]) << (8 * (i % 4));
        blocks.push_back(std::move(w));
    }
    return blocks;
}

static std::vector<uint8_t> digest_bytes(const std::array<uint32_t, 4>& h) {
    std::vector<uint8_t> out;
    for (uint32_t w : h)
        for (int b = 0; b < 4; ++b) out.push_back(uint8_t(w >> (8 * b)));
    return out;
}

std::vector<uint8_t> md4_digest(const std::vector<uint8_t>& msg) {
    std::array<uint32_t, 4> h = standard_md_iv();
    for (auto& blk : md_pad(msg)) h = md4_compress(h, blk.data());
    return digest_bytes(h);
}

std::vector<uint8_t> md5_digest(const std::vector<uint8_t>& msg) {
    std::array<uint32_t, 4> h = standard_md_iv();
    for (auto& blk : md_pad(msg)) h = md5_compress(h, blk.data());
    return digest_bytes(h);
}

BitVec run_named(const std::string& name, const BitVec& input) {
    if (name == "and2") return and2(input);
    if (name == "maj3") return maj3(input);
    if (name == "lfsr16") return lfsr16(input);
    if (name == "geffe96") return geffe96(input);
    if (name == "bivium") return bivium(input);
    if (name == "trivium") return trivium(input);
    if (name == "grain") return grain(input);
    if (name == "a5_1") return a5_1(input);
    if (name == "md4") return md4(input);
    if (name == "md5") return md5(input);
    throw std::runtime_error("no reference implementation for '" + name + "'");
}

} // namespace refciphers
