#include "algsat/formula.hpp"

#include <algorithm>
#include <cassert>

#include "algsat/diag.hpp"

namespace algsat {

const char* op_name(Op op) {
    switch (op) {
        case Op::Const: return "const";
        case Op::Input: return "input";
        case Op::Not:   return "not";
        case Op::And:   return "and";
        case Op::Or:    return "or";
        case Op::Xor:   return "xor";
        case Op::Ite:   return "ite";
        case Op::Table: return "table";
    }
    return "?";
}

size_t FormulaDag::ConsKeyHash::operator()(const ConsKey& k) const {
    uint64_t h = 0x9e3779b97f4a7c15ULL ^ (uint64_t(k.op) << 56) ^ (uint64_t(k.aux) << 24);
    for (NodeId id : k.operands) {
        h ^= id + 0x9e3779b9u + (h << 6) + (h >> 2);
        h *= 0x100000001b3ULL;
    }
    return size_t(h);
}

FormulaDag::FormulaDag() {
    const0_ = intern(Op::Const, 0, {});
    const1_ = intern(Op::Const, 1, {});
}

NodeId FormulaDag::intern(Op op, uint32_t aux, std::vector<NodeId> ops) {
    ConsKey key{op, aux, ops};
    if (op != Op::Input) {
        auto it = cons_.find(key);
        if (it != cons_.end()) return it->second;
    }
    NodeId id = NodeId(nodes_.size());
    nodes_.push_back(BoolNode{op, aux, std::move(ops)});
    if (op != Op::Input) cons_.emplace(std::move(key), id);
    return id;
}

NodeId FormulaDag::mk_const(int value) { return value ? const1_ : const0_; }

NodeId FormulaDag::mk_input() {
    return intern(Op::Input, input_count_++, {});
}

NodeId FormulaDag::mk_not(NodeId a) {
    if (a >= nodes_.size()) throw Error("mk_not: unknown operand id");
    if (is_const(a)) return mk_const(!const_value(a));
    if (nodes_[a].op == Op::Not) return nodes_[a].operands[0];
    return intern(Op::Not, 0, {a});
}

NodeId FormulaDag::mk_and_or(Op op, std::vector<NodeId>& ops) {
    const int neutral = (op == Op::And) ? 1 : 0;
    const int killer  = 1 - neutral;
    std::vector<NodeId> kept;
    for (NodeId a : ops) {
        if (is_const(a)) {
            if (const_value(a) == killer) return mk_const(killer);
            continue; // neutral element drops out
        }
        kept.push_back(a);
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    // complementary pair: a and not(a)
    for (NodeId a : kept) {
        if (nodes_[a].op == Op::Not &&
            std::binary_search(kept.begin(), kept.end(), nodes_[a].operands[0]))
            return mk_const(killer);
    }
    if (kept.empty()) return mk_const(neutral);
    if (kept.size() == 1) return kept[0];
    return intern(op, 0, std::move(kept));
}

NodeId FormulaDag::mk_xor2(NodeId a, NodeId b) {
    if (a == b) return mk_const(0);
    if (is_const(a)) return const_value(a) ? mk_not(b) : b;
    if (is_const(b)) return const_value(b) ? mk_not(a) : a;
    if (nodes_[a].op == Op::Not && nodes_[a].operands[0] == b) return mk_const(1);
    if (nodes_[b].op == Op::Not && nodes_[b].operands[0] == a) return mk_const(1);
    if (a > b) std::swap(a, b);
    return intern(Op::Xor, 0, {a, b});
}

NodeId FormulaDag::mk_ite(NodeId c, NodeId t, NodeId e) {
    if (t == e) return t;
    if (is_const(c)) return const_value(c) ? t : e;
    if (is_const(t) && is_const(e)) return const_value(t) ? c : mk_not(c);
    if (is_const(t)) return const_value(t) ? mk_gate(Op::Or, {c, e}) : mk_gate(Op::And, {mk_not(c), e});
    if (is_const(e)) return const_value(e) ? mk_gate(Op::Or, {mk_not(c), t}) : mk_gate(Op::And, {c, t});
    if (c == t) return mk_gate(Op::Or, {c, e});
    if (c == e) return mk_gate(Op::And, {c, t});
    return intern(Op::Ite, 0, {c, t, e});
}

NodeId FormulaDag::mk_gate(Op op, std::vector<NodeId> ops) {
    for (NodeId a : ops)
        if (a >= nodes_.size()) throw Error("mk_gate: unknown operand id");
    switch (op) {
        case Op::Not:
            if (ops.size() != 1) throw Error("mk_gate: NOT expects 1 operand");
            return mk_not(ops[0]);
        case Op::And:
        case Op::Or:
            if (ops.size() < 2) throw Error("mk_gate: AND/OR expect >= 2 operands");
            return mk_and_or(op, ops);
        case Op::Xor: {
            if (ops.size() < 2) throw Error("mk_gate: XOR expects >= 2 operands");
            NodeId acc = ops[0];
            for (size_t i = 1; i < ops.size(); ++i) acc = mk_xor2(acc, ops[i]);
            return acc;
        }
        case Op::Ite:
            if (ops.size() != 3) throw Error("mk_gate: ITE expects 3 operands");
            return mk_ite(ops[0], ops[1], ops[2]);
        default:
            throw Error("mk_gate: bad op");
    }
}

NodeId FormulaDag::mk_table(std::vector<NodeId> ops, const std::vector<uint8_t>& table) {
    size_t k = ops.size();
    if (k < 1 || k > 16) throw Error("mk_table: arity out of range");
    if (table.size() != (size_t(1) << k)) throw Error("mk_table: table size mismatch");
    for (NodeId a : ops)
        if (a >= nodes_.size()) throw Error("mk_table: unknown operand id");

    std::vector<uint8_t> tab = table;
    std::vector<NodeId> vars = ops;

    // substitute constant operands
    for (size_t j = 0; j < vars.size();) {
        if (is_const(vars[j])) {
            int v = const_value(vars[j]);
            std::vector<uint8_t> next(tab.size() / 2);
            for (size_t m = 0; m < next.size(); ++m) {
                size_t lo = m & ((size_t(1) << j) - 1);
                size_t hi = (m >> j) << (j + 1);
                next[m] = tab[hi | (size_t(v) << j) | lo];
            }
            tab = std::move(next);
            vars.erase(vars.begin() + j);
        } else {
            ++j;
        }
    }
    // merge duplicate operands
    for (size_t j = 0; j < vars.size(); ++j) {
        for (size_t i = j + 1; i < vars.size();) {
            if (vars[i] == vars[j]) {
                std::vector<uint8_t> next(tab.size() / 2);
                for (size_t m = 0; m < next.size(); ++m) {
                    size_t lo = m & ((size_t(1) << i) - 1);
                    size_t hi = (m >> i) << (i + 1);
                    int bj = int((m >> (j < i ? j : j - 1)) & 1); // j < i always here
                    next[m] = tab[hi | (size_t(bj) << i) | lo];
                }
                tab = std::move(next);
                vars.erase(vars.begin() + i);
            } else {
                ++i;
            }
        }
    }
    // drop vacuous variables (support reduction)
    for (size_t j = 0; j < vars.size();) {
        size_t n = tab.size();
        bool depends = false;
        for (size_t m = 0; m < n && !depends; ++m)
            if (!((m >> j) & 1) && tab[m] != tab[m | (size_t(1) << j)]) depends = true;
        if (!depends) {
            std::vector<uint8_t> next(n / 2);
            for (size_t m = 0; m < next.size(); ++m) {
                size_t lo = m & ((size_t(1) << j) - 1);
                size_t hi = (m >> j) << (j + 1);
                next[m] = tab[hi | lo];
            }
            tab = std::move(next);
            vars.erase(vars.begin() + j);
        } else {
            ++j;
        }
    }

    if (vars.empty()) return mk_const(tab[0]);
    if (vars.size() == 1) return tab[1] ? vars[0] : mk_not(vars[0]);
    if (vars.size() == 2) {
        // small tables map onto plain gates
        uint8_t t0 = tab[0], t1 = tab[1], t2 = tab[2], t3 = tab[3];
        auto sig = (t3 << 3) | (t2 << 2) | (t1 << 1) | t0;
        switch (sig) {
            case 0b1000: return mk_gate(Op::And, {vars[0], vars[1]});
            case 0b1110: return mk_gate(Op::Or, {vars[0], vars[1]});
            case 0b0110: return mk_gate(Op::Xor, {vars[0], vars[1]});
            case 0b1001: return mk_not(mk_gate(Op::Xor, {vars[0], vars[1]}));
            case 0b0001: return mk_not(mk_gate(Op::Or, {vars[0], vars[1]}));
            case 0b0111: return mk_not(mk_gate(Op::And, {vars[0], vars[1]}));
            default: break; // 2-input tables with one-sided negation stay tables
        }
    }

    // canonical operand order: sort by id, permute table accordingly
    std::vector<size_t> perm(vars.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](size_t a, size_t b) { return vars[a] < vars[b]; });
    std::vector<NodeId> sorted_vars(vars.size());
    for (size_t i = 0; i < perm.size(); ++i) sorted_vars[i] = vars[perm[i]];
    std::vector<uint8_t> sorted_tab(tab.size());
    for (size_t m = 0; m < tab.size(); ++m) {
        size_t src = 0;
        for (size_t i = 0; i < perm.size(); ++i)
            if ((m >> i) & 1) src |= size_t(1) << perm[i];
        sorted_tab[m] = tab[src];
    }

    std::string key(sorted_tab.begin(), sorted_tab.end());
    auto [it, fresh] = table_ids_.emplace(std::move(key), uint32_t(tables_.size()));
    if (fresh) tables_.push_back(sorted_tab);
    return intern(Op::Table, it->second, std::move(sorted_vars));
}

std::vector<uint8_t> FormulaDag::eval_all(const BitVec& inputs) const {
    if (inputs.size() != input_count_)
        throw Error("eval: expected " + std::to_string(input_count_) + " input bits, got " +
                    std::to_string(inputs.size()));
    std::vector<uint8_t> val(nodes_.size(), 0);
    for (NodeId id = 0; id < nodes_.size(); ++id) {
        const BoolNode& n = nodes_[id];
        switch (n.op) {
            case Op::Const: val[id] = uint8_t(n.aux); break;
            case Op::Input: val[id] = inputs[n.aux]; break;
            case Op::Not:   val[id] = !val[n.operands[0]]; break;
            case Op::And: {
                uint8_t v = 1;
                for (NodeId a : n.operands) v &= val[a];
                val[id] = v;
                break;
            }
            case Op::Or: {
                uint8_t v = 0;
                for (NodeId a : n.operands) v |= val[a];
                val[id] = v;
                break;
            }
            case Op::Xor: {
                uint8_t v = 0;
                for (NodeId a : n.operands) v ^= val[a];
                val[id] = v;
                break;
            }
            case Op::Ite:
                val[id] = val[n.operands[0]] ? val[n.operands[1]] : val[n.operands[2]];
                break;
            case Op::Table: {
                size_t idx = 0;
                for (size_t j = 0; j < n.operands.size(); ++j)
                    idx |= size_t(val[n.operands[j]]) << j;
                val[id] = tables_[n.aux][idx];
                break;
            }
        }
    }
    return val;
}

BitVec FormulaDag::eval(const std::vector<NodeId>& roots, const BitVec& inputs) const {
    for (NodeId r : roots)
        if (r >= nodes_.size()) throw Error("eval: unknown root id");
    std::vector<uint8_t> val = eval_all(inputs);
    BitVec out(roots.size());
    for (size_t i = 0; i < roots.size(); ++i) out[i] = val[roots[i]];
    return out;
}

DagStats FormulaDag::stats() const {
    DagStats s;
    std::vector<uint32_t> depth(nodes_.size(), 0);
    for (NodeId id = 0; id < nodes_.size(); ++id) {
        const BoolNode& n = nodes_[id];
        s.by_op[op_name(n.op)]++;
        uint32_t d = 0;
        for (NodeId a : n.operands) d = std::max(d, depth[a] + 1);
        depth[id] = d;
        s.depth = std::max<size_t>(s.depth, d);
    }
    s.total = nodes_.size();
    s.inputs = input_count_;
    return s;
}

void FormulaDag::dump(std::ostream& os) const {
    for (NodeId id = 0; id < nodes_.size(); ++id) {
        const BoolNode& n = nodes_[id];
        os << id << ' ' << op_name(n.op);
        if (n.op == Op::Const || n.op == Op::Input) os << ' ' << n.aux;
        if (n.op == Op::Table) {
            os << ' ';
            for (uint8_t b : tables_[n.aux]) os << char('0' + b);
        }
        for (NodeId a : n.operands) os << ' ' << a;
        os << '\n';
    }
}

} // namespace algsat
