#include "algsat/cover.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "algsat/diag.hpp"

namespace algsat {

std::string CovCube::to_string(int k) const {
    std::string s;
    for (int j = 0; j < k; ++j) {
        if (!((care >> j) & 1)) s.push_back('-');
        else s.push_back(((value >> j) & 1) ? '1' : '0');
    }
    return s;
}

namespace {

// Combine pass of Quine-McCluskey: merge cubes differing in one cared bit.
std::vector<CovCube> prime_implicants(const std::vector<uint32_t>& minterms, int k) {
    std::set<std::pair<uint32_t, uint32_t>> current; // (value, dontcare mask)
    for (uint32_t m : minterms) current.insert({m, 0});
    std::vector<CovCube> primes;
    uint32_t full = (k == 32) ? 0xffffffffu : ((1u << k) - 1);

    while (!current.empty()) {
        std::set<std::pair<uint32_t, uint32_t>> next;
        std::map<std::pair<uint32_t, uint32_t>, bool> combined;
        std::vector<std::pair<uint32_t, uint32_t>> items(current.begin(), current.end());
        // group by popcount of value for the classic pairing
        std::map<std::pair<uint32_t, int>, std::vector<std::pair<uint32_t, uint32_t>>> groups;
        for (auto& it : items) {
            groups[{it.second, __builtin_popcount(it.first)}].push_back(it);
            combined[it] = false;
        }
        for (auto& [key, vec] : groups) {
            auto neighbor = groups.find({key.first, key.second + 1});
            if (neighbor == groups.end()) continue;
            for (auto& a : vec)
                for (auto& b : neighbor->second) {
                    uint32_t diff = a.first ^ b.first;
                    if (__builtin_popcount(diff) != 1) continue;
                    next.insert({a.first & ~diff, a.second | diff});
                    combined[a] = true;
                    combined[b] = true;
                }
        }
        for (auto& it : items)
            if (!combined[it])
                primes.push_back(CovCube{it.first, full & ~it.second});
        current = std::move(next);
    }
    std::sort(primes.begin(), primes.end(), [](const CovCube& a, const CovCube& b) {
        return std::tie(a.care, a.value) < std::tie(b.care, b.value);
    });
    return primes;
}

// Exact minimum-cardinality cover (ties broken by fewer literals, then by
// cube order) via branch and bound over the prime-implicant chart.
struct ExactCoverSolver {
    const std::vector<CovCube>& primes;
    const std::vector<uint32_t>& minterms;
    std::vector<std::vector<int>> coverers; // minterm -> prime indices
    std::vector<int> best;
    size_t best_lits = SIZE_MAX;

    ExactCoverSolver(const std::vector<CovCube>& p, const std::vector<uint32_t>& m)
        : primes(p), minterms(m) {
        coverers.resize(minterms.size());
        for (size_t i = 0; i < minterms.size(); ++i)
            for (size_t j = 0; j < primes.size(); ++j)
                if (primes[j].covers(minterms[i])) coverers[i].push_back(int(j));
    }

    size_t lits(const std::vector<int>& sel) const {
        size_t n = 0;
        for (int j : sel) n += size_t(primes[j].literal_count());
        return n;
    }

    void search(std::vector<int>& sel, std::vector<uint8_t>& covered, size_t uncovered) {
        if (!best.empty() &&
            (sel.size() > best.size() ||
             (sel.size() == best.size() && lits(sel) >= best_lits)))
            return;
        if (uncovered == 0) {
            if (best.empty() || sel.size() < best.size() ||
                (sel.size() == best.size() && lits(sel) < best_lits)) {
                best = sel;
                best_lits = lits(sel);
            }
            return;
        }
        if (!best.empty() && sel.size() + 1 > best.size()) return;
        // pick the uncovered minterm with fewest coverers
        int pick = -1;
        size_t fewest = SIZE_MAX;
        for (size_t i = 0; i < minterms.size(); ++i) {
            if (covered[i]) continue;
            if (coverers[i].size() < fewest) { fewest = coverers[i].size(); pick = int(i); }
        }
        for (int j : coverers[pick]) {
            std::vector<uint8_t> saved = covered;
            size_t newly = 0;
            for (size_t i = 0; i < minterms.size(); ++i)
                if (!covered[i] && primes[j].covers(minterms[i])) { covered[i] = 1; ++newly; }
            sel.push_back(j);
            search(sel, covered, uncovered - newly);
            sel.pop_back();
            covered = std::move(saved);
        }
    }

    std::vector<int> solve() {
        std::vector<int> sel;
        std::vector<uint8_t> covered(minterms.size(), 0);
        search(sel, covered, minterms.size());
        return best;
    }
};

Cover greedy_cover(const std::vector<CovCube>& primes, const std::vector<uint32_t>& minterms, int k) {
    Cover cover;
    cover.k = k;
    std::vector<uint8_t> covered(minterms.size(), 0);
    size_t left = minterms.size();
    while (left > 0) {
        size_t best_gain = 0;
        int best_j = -1;
        for (size_t j = 0; j < primes.size(); ++j) {
            size_t gain = 0;
            for (size_t i = 0; i < minterms.size(); ++i)
                if (!covered[i] && primes[j].covers(minterms[i])) ++gain;
            if (gain > best_gain ||
                (gain == best_gain && gain > 0 && best_j >= 0 &&
                 primes[j].literal_count() < primes[best_j].literal_count())) {
                best_gain = gain;
                best_j = int(j);
            }
        }
        if (best_j < 0) throw Error("greedy_cover: uncoverable minterm");
        cover.cubes.push_back(primes[best_j]);
        for (size_t i = 0; i < minterms.size(); ++i)
            if (!covered[i] && primes[best_j].covers(minterms[i])) { covered[i] = 1; --left; }
    }
    return cover;
}

} // namespace

Cover minimize_cover(const std::vector<uint8_t>& table, int k) {
    if (k < 0 || k > 16) throw Error("minimize_cover: k out of range");
    if (table.size() != (size_t(1) << k)) throw Error("minimize_cover: table size mismatch");

    std::vector<uint32_t> minterms;
    for (uint32_t m = 0; m < table.size(); ++m)
        if (table[m]) minterms.push_back(m);

    Cover cover;
    cover.k = k;
    if (minterms.empty()) return cover; // constant 0: empty cover
    if (minterms.size() == table.size()) {
        cover.cubes.push_back(CovCube{0, 0}); // constant 1: one universal cube
        return cover;
    }

    std::vector<CovCube> primes = prime_implicants(minterms, k);

    if (k <= 8) {
        ExactCoverSolver solver(primes, minterms);
        std::vector<int> sel = solver.solve();
        std::sort(sel.begin(), sel.end());
        for (int j : sel) cover.cubes.push_back(primes[j]);
        return cover;
    }
    return greedy_cover(primes, minterms, k);
}

} // namespace algsat
