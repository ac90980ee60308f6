#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "algsat/cover.hpp"
#include "algsat/symexec.hpp"

namespace algsat {

using Var = uint32_t;       // 1-based
using Lit = int32_t;        // DIMACS-signed: +v / -v
using Clause = std::vector<Lit>;

inline Var lit_var(Lit l) { return Var(l < 0 ? -l : l); }
inline bool lit_sign(Lit l) { return l > 0; } // true = positive
inline Lit make_lit(Var v, bool positive) { return positive ? Lit(v) : -Lit(v); }

struct CnfConfig {
    bool prune = true;      // skip gates not reachable from the outputs
    bool ite_extra = false; // add the two redundant select implication clauses
};

// Template CNF: the circuit clauses with free input and output variables.
// Instances are formed downstream by adding unit constraints.
struct TemplateCnf {
    Var var_count = 0;
    std::vector<Clause> clauses;
    std::vector<std::pair<std::string, Var>> input_vars;  // X^in, declaration order
    std::vector<std::pair<std::string, Var>> output_vars; // Y, declaration order
    std::map<std::string, Var> trace_vars;                // trace key -> variable
    std::map<std::string, int> last_occurrence;           // base key -> max occurrence
    std::vector<NodeId> gate_provenance;                  // var-1 -> node id (kNoNode: buffer)

    size_t literal_count() const {
        size_t n = 0;
        for (const auto& c : clauses) n += c.size();
        return n;
    }
    Var input_var(size_t i) const { return input_vars[i].second; }
    // trace reference (with optional @occurrence) -> variable
    Var resolve_trace(const std::string& ref) const;
};

// Tseitin transformation of an encoding, with truth-table + minimized-cover
// clauses for table gates.
TemplateCnf tseitinize(const Encoding& enc, const CnfConfig& cfg = {});

// Clause group for v <-> table(operands); exposed for gate-local tests.
std::vector<Clause> table_clauses(Var v, const std::vector<Var>& operands,
                                  const std::vector<uint8_t>& table);

void emit_dimacs(const TemplateCnf& t, std::ostream& os);
void write_dimacs_file(const TemplateCnf& t, const std::string& path);

// Sidecar variable map (JSON): inputs, outputs, trace, var_count.
std::string map_to_json(const TemplateCnf& t);
void write_map_file(const TemplateCnf& t, const std::string& path);
// Restores the parts of a TemplateCnf needed to build instances from a
// DIMACS file plus its map sidecar.
TemplateCnf read_template(const std::string& cnf_path, const std::string& map_path);

} // namespace algsat
