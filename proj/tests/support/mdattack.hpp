#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algsat/instance.hpp"

// Native differential collision search for MD4, driven by the same condition
// files the SAT route consumes. Used to validate shipped condition data and
// to produce verified collision fixtures.
namespace mdattack {

struct StateCondition {
    int word = 0;        // 0=A 1=D 2=C 3=B
    int step = 0;        // occurrence (1-based update count)
    int bit = 0;         // 0..31, LSB = 0
    int kind = 0;        // 0: fixed value, 1: equal to other, 2: complement of other
    int value = 0;       // kind 0
    int o_word = 0, o_step = 0, o_bit = 0; // kind 1/2 reference
};

struct MdConditions {
    std::array<uint32_t, 16> delta{}; // m'[k] - m[k] mod 2^32
    std::vector<StateCondition> conditions;
};

// Extracts message-word differences and copy-1 state conditions from the
// condition-file grammar (fix/eq/diff32 lines against main.A/B/C/D/X).
MdConditions conditions_from_file(const std::string& path);

struct CollisionPair {
    std::array<uint32_t, 16> m1{}, m2{};
    std::array<uint32_t, 4> digest{};
};

// Randomized first-round satisfaction + trial search. Returns a verified
// collision (md4(m1) == md4(m2), m1 != m2) or nullopt after `max_trials`.
std::optional<CollisionPair> find_md4_collision(const MdConditions& conds, uint64_t seed,
                                                uint64_t max_trials);

// Sequence of the 48+4 MD4 state words (a1,d1,c1,b1,...,b12, then the four
// feed-forward sums) for condition bookkeeping.
std::vector<uint32_t> md4_state_trace(const std::array<uint32_t, 4>& iv, const uint32_t m[16]);

} // namespace mdattack
