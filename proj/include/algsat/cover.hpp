#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace algsat {

// One product term over k variables: bit j of `care` set means variable j is
// tested, and then bit j of `value` gives the required polarity.
struct CovCube {
    uint32_t value = 0;
    uint32_t care  = 0;

    bool covers(uint32_t minterm) const { return (minterm & care) == (value & care); }
    bool contains(const CovCube& o) const {
        // this covers everything o covers
        return (care & ~o.care) == 0 && ((value ^ o.value) & care) == 0;
    }
    int literal_count() const { return __builtin_popcount(care); }
    std::string to_string(int k) const; // e.g. "1-0" (variable 0 leftmost)
};

struct Cover {
    int k = 0;
    std::vector<CovCube> cubes;

    bool covers(uint32_t minterm) const {
        for (const auto& c : cubes)
            if (c.covers(minterm)) return true;
        return false;
    }
    size_t literal_total() const {
        size_t n = 0;
        for (const auto& c : cubes) n += size_t(c.literal_count());
        return n;
    }
};

// Minimum two-level cover of the ON-set of `table` (2^k entries). Exact via
// Quine-McCluskey with optimal cube selection for k <= 8; greedy
// prime-implicant cover for 8 < k <= 16. The result is always equivalent to
// the input table.
Cover minimize_cover(const std::vector<uint8_t>& table, int k);

} // namespace algsat
