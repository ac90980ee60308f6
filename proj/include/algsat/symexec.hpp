#pragma once

#include <map>
#include <optional>

#include "algsat/ast.hpp"
#include "algsat/formula.hpp"
#include "algsat/interp.hpp"

namespace algsat {

// Addressable point in an execution: the j-th binding of one program-variable
// cell inside one function. Rendered as `func.var[index]@occurrence`
// (`func.var@occurrence` for scalars). Occurrence 0 of an __in cell is its
// input node.
struct TracePoint {
    std::string function;
    std::string var;
    int64_t     index = -1; // linearized, -1 for scalars
    int         occurrence = 0;

    std::string key() const;
    std::string base_key() const; // without the @occurrence part
};

// Result of symbolically executing a program: the formula DAG plus the
// ordered input/output variable lists and the named step trace.
struct Encoding {
    FormulaDag dag;
    std::vector<std::pair<std::string, NodeId>> inputs;  // declaration order
    std::vector<std::pair<std::string, NodeId>> outputs; // declaration order
    std::map<std::string, NodeId> trace;                 // trace key -> node
    std::map<std::string, int> last_occurrence;          // base key -> max occurrence

    size_t input_width() const { return inputs.size(); }
    size_t output_width() const { return outputs.size(); }
    std::vector<NodeId> output_nodes() const {
        std::vector<NodeId> v;
        v.reserve(outputs.size());
        for (auto& [n, id] : outputs) v.push_back(id);
        return v;
    }
};

// Translates a checked program into an Encoding: loops unrolled via concrete
// int state, calls inlined, one formula node per elementary bit assignment.
Encoding execute(const Program& program, const ExecOptions& opts = {});

// Merge rule for an assignment under a symbolic guard: the new cell value is
// guard ? then-value : else-value, with an absent branch defaulting to the
// old value.
NodeId encode_conditional(FormulaDag& dag, NodeId guard, std::optional<NodeId> then_value,
                          std::optional<NodeId> else_value, NodeId old_value);

// Looks up `ref` (trace-point syntax; the @occurrence suffix defaults to the
// last occurrence) and returns its node. Unknown points raise Error with
// nearby suggestions.
NodeId trace_lookup(const Encoding& enc, const std::string& ref);

// Parses `func.var[index]@occ` into parts; occurrence -1 when absent.
bool parse_trace_ref(const std::string& ref, std::string& base, int& occurrence);

} // namespace algsat
