#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "algsat/bits.hpp"
#include "algsat/cnf.hpp"

namespace algsat {

// A solver-ready SAT problem: an immutable template plus unit assumptions
// and (for collision / difference machinery) extra clauses over fresh
// variables. The base template is shared, never mutated.
struct Instance {
    std::shared_ptr<const TemplateCnf> base;
    std::vector<Lit>    assumptions;   // deduplicated, insertion-ordered
    std::vector<Clause> extra_clauses;
    Var                 extra_vars = 0;
    std::string         label;

    Var var_count() const { return base->var_count + extra_vars; }
    Var fresh_var() { return base->var_count + (++extra_vars); }
    void assume(Lit l);              // idempotent; contradicting an earlier
                                     // assumption raises Error
    bool assumes(Lit l) const;

    // Writes DIMACS with assumptions folded in as unit clauses.
    void emit_dimacs(std::ostream& os) const;
    void write_dimacs_file(const std::string& path) const;
};

// --- inversion / guessing bits ---------------------------------------------

// C(f) with every output bit pinned to y.
Instance inversion_instance(std::shared_ptr<const TemplateCnf> tpl, const BitVec& y);

// Pins a subset of input variables (by input NAME or 0-based input ordinal
// given as decimal text) to known values. Appends K to the label.
Instance fix_guessing_bits(Instance inst, const std::vector<std::string>& names_or_indices,
                           const BitVec& values);
// Convenience: first K inputs pinned to the matching bits of a full input x.
Instance fix_guessing_bits_prefix(Instance inst, size_t k, const BitVec& x);

// --- cube partitioning -------------------------------------------------------

struct Cube {
    std::vector<Lit> literals; // one per decomposition-set variable, in set order
};

enum class CubeMode { Enumerate, Sample };

// Lazy stream over the 2^|set| cubes of a decomposition set (or a seeded
// sample of distinct cubes). Cubes are assumption sets; combined with the
// shared instance each is an independent sub-problem.
class CubeStream {
public:
    // vars: decomposition-set variables in order (must be input variables of
    // the instance's template; checked by make_partition).
    CubeStream(std::vector<Var> vars, CubeMode mode, uint64_t sample_count, uint64_t seed);

    uint64_t count() const { return total_; } // reported without materialization
    std::optional<Cube> next();
    void reset();

private:
    std::vector<Var> vars_;
    CubeMode mode_;
    uint64_t total_ = 0;
    uint64_t index_ = 0;
    uint64_t seed_ = 0;
    std::vector<uint64_t> samples_;
};

// Resolves a decomposition set given by input names (or ordinals) and builds
// the stream. Enumerate mode rejects sets larger than 40 variables.
CubeStream make_partition(const Instance& inst, const std::vector<std::string>& set_refs,
                          CubeMode mode, uint64_t sample_count = 0, uint64_t seed = 0);

void write_icnf(std::ostream& os, CubeStream& cubes);
std::vector<Cube> read_icnf(const std::string& path);

// --- collisions and bit conditions -----------------------------------------

enum class CopySel { First, Second, Both };

struct BitCondition {
    enum class Kind { Fix, FixRange, Eq, Diff32, FreeTie, SetWord };
    Kind        kind;
    CopySel     copy = CopySel::Both;
    std::string target_a;  // trace ref (Fix/FixRange/Eq/Diff32) or input array name
    std::string target_b;  // Eq/Diff32 second ref
    CopySel     copy_b = CopySel::Both;
    int64_t     lo = 0, hi = 0; // FixRange index window
    int         value = 0;      // Fix/FixRange
    uint32_t    constant = 0;   // Diff32
    std::string hex;            // SetWord payload
    int         line = 0;       // source line for messages
};

// Parses the condition-file grammar:
//   fix <trace> <0|1>
//   fixrange <trace>[lo..hi] <0|1>
//   eq <traceA> <traceB>
//   diff32 <traceA> <traceB> 0x<const>
//   free <name> | set <name> 0x<hex>
// Trace refs may carry a copy prefix `1:`/`2:`; bare refs target both copies
// of a collision instance (or the single copy otherwise).
std::vector<BitCondition> parse_conditions(const std::string& text);
std::vector<BitCondition> parse_condition_file(const std::string& path);

// Twin-copy template: the template's clauses twice over disjoint variables.
// Trace keys and input/output names gain `1:`/`2:` prefixes.
std::shared_ptr<const TemplateCnf> twin_template(const TemplateCnf& tpl);

struct CollisionOptions {
    bool tie_outputs = true;            // add output-equality clauses
    std::vector<BitCondition> conditions;
    std::string label = "collision";
};

// Builds the collision instance: two copies of the template, output
// equalities (y1_i <-> y2_i), and the given conditions.
Instance collision_instance(const TemplateCnf& tpl, const CollisionOptions& opts);

// Applies conditions to an existing instance (idempotent per condition).
// `twin` tells the resolver whether copy prefixes are available.
void apply_conditions(Instance& inst, const std::vector<BitCondition>& conds, bool twin);

// Appends clauses forcing wordB - wordA = constant (mod 2^32) where the words
// are given LSB-first as variable lists of equal length up to 32.
void add_mod_difference(Instance& inst, const std::vector<Var>& word_a,
                        const std::vector<Var>& word_b, uint32_t constant);

// Model decoding helpers.
BitVec decode_inputs(const TemplateCnf& tpl, const std::vector<uint8_t>& model,
                     const std::string& name_prefix = "");

} // namespace algsat
