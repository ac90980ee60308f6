#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "algsat/bits.hpp"

namespace algsat {

using NodeId = uint32_t;
inline constexpr NodeId kNoNode = 0xffffffffu;

enum class Op : uint8_t {
    Const,  // value in aux (0 or 1), no operands
    Input,  // input index in aux
    Not,    // arity 1
    And,    // arity >= 2
    Or,     // arity >= 2
    Xor,    // arity 2 (wider xors are built as chains)
    Ite,    // arity 3: (cond, then, else)
    Table,  // arity k (2..16), truth table attached
};

const char* op_name(Op op);

struct BoolNode {
    Op       op;
    uint32_t aux = 0;           // Const: value; Input: input index; Table: table index
    std::vector<NodeId> operands;
};

struct DagStats {
    std::map<std::string, size_t> by_op;
    size_t total  = 0;
    size_t depth  = 0;
    size_t inputs = 0;
};

// Hash-consed Boolean expression DAG. Nodes are append-only and
// topologically numbered: operands always have smaller ids. Structurally
// identical gates share one id; local rewrites (constant folding, double
// negation, repeated operands, degenerate selects) return existing nodes so
// that pure copies never allocate a fresh node.
class FormulaDag {
public:
    FormulaDag();

    NodeId mk_const(int value);
    NodeId mk_input();
    NodeId mk_not(NodeId a);
    NodeId mk_gate(Op op, std::vector<NodeId> ops);
    // k-input gate defined by a truth table of 2^k bits; table[i] is the
    // value on the assignment whose bit j (LSB) gives operand j.
    NodeId mk_table(std::vector<NodeId> ops, const std::vector<uint8_t>& table);

    const BoolNode& node(NodeId id) const { return nodes_[id]; }
    size_t size() const { return nodes_.size(); }
    uint32_t input_count() const { return input_count_; }
    const std::vector<uint8_t>& table(const BoolNode& n) const { return tables_[n.aux]; }

    NodeId const_node(int value) const { return value ? const1_ : const0_; }
    bool is_const(NodeId id) const { return nodes_[id].op == Op::Const; }
    int  const_value(NodeId id) const { return int(nodes_[id].aux); }

    // Evaluates every node once in id order and reads off the roots.
    BitVec eval(const std::vector<NodeId>& roots, const BitVec& inputs) const;
    // Full node-value vector for one input assignment (used by trace tools).
    std::vector<uint8_t> eval_all(const BitVec& inputs) const;

    DagStats stats() const;

    // One line per node: `id op operands...` (debugging / golden tests).
    void dump(std::ostream& os) const;

private:
    struct ConsKey {
        Op op;
        uint32_t aux;
        std::vector<NodeId> operands;
        bool operator==(const ConsKey&) const = default;
    };
    struct ConsKeyHash {
        size_t operator()(const ConsKey& k) const;
    };

    NodeId intern(Op op, uint32_t aux, std::vector<NodeId> ops);
    NodeId mk_and_or(Op op, std::vector<NodeId>& ops);
    NodeId mk_xor2(NodeId a, NodeId b);
    NodeId mk_ite(NodeId c, NodeId t, NodeId e);

    std::vector<BoolNode> nodes_;
    std::vector<std::vector<uint8_t>> tables_;
    std::unordered_map<ConsKey, NodeId, ConsKeyHash> cons_;
    std::unordered_map<std::string, uint32_t> table_ids_;
    uint32_t input_count_ = 0;
    NodeId const0_, const1_;
};

} // namespace algsat
