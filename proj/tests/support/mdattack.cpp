#include "support/mdattack.hpp"

#include <stdexcept>

#include "algsat/bits.hpp"
#include "support/refciphers.hpp"

namespace mdattack {

namespace {

inline uint32_t rotl(uint32_t x, int s) { return (x << s) | (x >> (32 - s)); }
inline uint32_t rotr(uint32_t x, int s) { return (x >> s) | (x << (32 - s)); }

const int kShift1[4] = {3, 7, 11, 19};
const int kShift2[4] = {3, 5, 9, 13};
const int kShift3[4] = {3, 9, 11, 15};
const int kOrder2[16] = {0, 4, 8, 12, 1, 5, 9, 13, 2, 6, 10, 14, 3, 7, 11, 15};
const int kOrder3[16] = {0, 8, 4, 12, 2, 10, 6, 14, 1, 9, 5, 13, 3, 11, 7, 15};

struct StepSpec {
    int k;       // message index
    int s;       // rotation
    int round;   // 1..3
    uint32_t add;
};

StepSpec step_spec(int t) { // t in 1..48
    int i = t - 1;
    if (t <= 16) return {i, kShift1[i % 4], 1, 0};
    if (t <= 32) return {kOrder2[i - 16], kShift2[i % 4], 2, 0x5a827999u};
    return {kOrder3[i - 32], kShift3[i % 4], 3, 0x6ed9eba1u};
}

uint32_t round_fn(int round, uint32_t x, uint32_t y, uint32_t z) {
    switch (round) {
        case 1: return (x & y) | (~x & z);
        case 2: return (x & y) | (x & z) | (y & z);
        default: return x ^ y ^ z;
    }
}

// Q_{-3}..Q_0 = a0, d0, c0, b0; Q_t for t >= 1 via the uniform recurrence.
struct Trace {
    std::vector<uint32_t> q; // q[t + 3] = Q_t, t from -3

    uint32_t& at(int t) { return q[size_t(t + 3)]; }
    uint32_t at(int t) const { return q[size_t(t + 3)]; }
};

Trace init_trace(const std::array<uint32_t, 4>& iv) {
    Trace tr;
    tr.q.resize(4 + 48, 0);
    tr.at(-3) = iv[0]; // a0
    tr.at(-2) = iv[3]; // d0
    tr.at(-1) = iv[2]; // c0
    tr.at(0) = iv[1];  // b0
    return tr;
}

uint32_t step_forward(const Trace& tr, int t, uint32_t mk) {
    StepSpec sp = step_spec(t);
    uint32_t f = round_fn(sp.round, tr.at(t - 1), tr.at(t - 2), tr.at(t - 3));
    return rotl(tr.at(t - 4) + f + mk + sp.add, sp.s);
}

uint32_t invert_step(const Trace& tr, int t) {
    StepSpec sp = step_spec(t);
    uint32_t f = round_fn(sp.round, tr.at(t - 1), tr.at(t - 2), tr.at(t - 3));
    return rotr(tr.at(t), sp.s) - tr.at(t - 4) - f - sp.add;
}

// (word, occurrence) -> Q index; occurrence 0 refers to the IV entries
int q_index(int word, int occ) {
    if (occ == 0) {
        switch (word) {
            case 0: return -3;
            case 1: return -2;
            case 2: return -1;
            default: return 0;
        }
    }
    static const int slot[4] = {1, 4, 3, 2}; // A,B,C,D update order within a pass: a,d,c,b
    (void)slot;
    // pass j (1-based) updates a (Q_{4j-3}), d (Q_{4j-2}), c (Q_{4j-1}), b (Q_{4j})
    switch (word) {
        case 0: return 4 * occ - 3; // A
        case 1: return 4 * occ - 2; // D
        case 2: return 4 * occ - 1; // C
        default: return 4 * occ;    // B
    }
}

int word_from_name(const std::string& name) {
    if (name == "main.A") return 0;
    if (name == "main.D") return 1;
    if (name == "main.C") return 2;
    if (name == "main.B") return 3;
    return -1;
}

// "main.A[6]@1" -> word 0, bit 6, occ 1 (occ -1 when absent)
bool parse_state_ref(const std::string& ref, int& word, int& bit, int& occ) {
    std::string base;
    if (!algsat::parse_trace_ref(ref, base, occ)) return false;
    auto lb = base.rfind('[');
    if (lb == std::string::npos || base.back() != ']') return false;
    word = word_from_name(base.substr(0, lb));
    if (word < 0) return false;
    bit = std::stoi(base.substr(lb + 1, base.size() - lb - 2));
    return bit >= 0 && bit < 32;
}

} // namespace

MdConditions conditions_from_file(const std::string& path) {
    MdConditions out;
    for (const algsat::BitCondition& c : algsat::parse_condition_file(path)) {
        using K = algsat::BitCondition::Kind;
        if (c.kind == K::Diff32) {
            // message-word difference: main.X[<w*32>]@0 both copies
            std::string base;
            int occ;
            if (!algsat::parse_trace_ref(c.target_a, base, occ))
                throw std::runtime_error("bad diff32 target: " + c.target_a);
            auto lb = base.rfind('[');
            if (lb == std::string::npos || base.substr(0, lb) != "main.X") continue;
            int64_t linear = std::stoll(base.substr(lb + 1, base.size() - lb - 2));
            if (linear % 32) throw std::runtime_error("diff32 target not word-aligned");
            out.delta[size_t(linear / 32)] = c.constant;
            continue;
        }
        if (c.kind == K::Fix && c.copy != algsat::CopySel::Second) {
            int w, b, occ;
            if (parse_state_ref(c.target_a, w, b, occ) && occ >= 0)
                out.conditions.push_back({w, occ, b, 0, c.value, 0, 0, 0});
            continue;
        }
        if (c.kind == K::Eq && c.copy != algsat::CopySel::Second) {
            int wa, ba, oa, wb, bb, ob;
            if (parse_state_ref(c.target_a, wa, ba, oa) &&
                parse_state_ref(c.target_b, wb, bb, ob) && oa >= 0 && ob >= 0)
                out.conditions.push_back({wa, oa, ba, 1, 0, wb, ob, bb});
            continue;
        }
    }
    return out;
}

std::vector<uint32_t> md4_state_trace(const std::array<uint32_t, 4>& iv, const uint32_t m[16]) {
    Trace tr = init_trace(iv);
    for (int t = 1; t <= 48; ++t) tr.at(t) = step_forward(tr, t, m[size_t(step_spec(t).k)]);
    std::vector<uint32_t> out(tr.q.begin() + 4, tr.q.end());
    out.push_back(iv[0] + tr.at(45));
    out.push_back(iv[3] + tr.at(46));
    out.push_back(iv[2] + tr.at(47));
    out.push_back(iv[1] + tr.at(48));
    return out;
}

std::optional<CollisionPair> find_md4_collision(const MdConditions& conds, uint64_t seed,
                                                uint64_t max_trials) {
    std::array<uint32_t, 4> iv = refciphers::standard_md_iv();
    algsat::BitRng rng(seed);

    // conditions bucketed per Q index of round 1; later-round conditions are
    // ignored here (the trial loop checks real collisions directly)
    std::vector<std::vector<const StateCondition*>> per_q(17);
    for (const StateCondition& sc : conds.conditions) {
        int qi = q_index(sc.word, sc.step);
        if (qi >= 1 && qi <= 16) per_q[size_t(qi)].push_back(&sc);
    }

    Trace tr = init_trace(iv);
    for (uint64_t trial = 0; trial < max_trials; ++trial) {
        // free round-1 state satisfying the conditions by construction
        for (int t = 1; t <= 16; ++t) {
            uint32_t v = uint32_t(rng.next_u64());
            for (const StateCondition* sc : per_q[size_t(t)]) {
                uint32_t mask = 1u << sc->bit;
                if (sc->kind == 0) {
                    v = sc->value ? (v | mask) : (v & ~mask);
                } else {
                    uint32_t ref = tr.at(q_index(sc->o_word, sc->o_step));
                    uint32_t bit = (ref >> sc->o_bit) & 1u;
                    if (sc->kind == 2) bit ^= 1u;
                    v = bit ? (v | mask) : (v & ~mask);
                }
            }
            tr.at(t) = v;
        }
        std::array<uint32_t, 16> m{};
        for (int t = 1; t <= 16; ++t) m[size_t(t - 1)] = invert_step(tr, t);

        std::array<uint32_t, 16> m2 = m;
        for (int i = 0; i < 16; ++i) m2[size_t(i)] += conds.delta[size_t(i)];
        if (m2 == m) continue; // zero differential cannot collide usefully

        std::array<uint32_t, 4> h1 = refciphers::md4_compress(iv, m.data());
        std::array<uint32_t, 4> h2 = refciphers::md4_compress(iv, m2.data());
        if (h1 == h2) {
            CollisionPair cp;
            cp.m1 = m;
            cp.m2 = m2;
            cp.digest = h1;
            return cp;
        }
    }
    return std::nullopt;
}

} // namespace mdattack
