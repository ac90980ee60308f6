#include "algsat/symexec.hpp"

#include <algorithm>
#include <cassert>

#include "algsat/diag.hpp"

namespace algsat {

std::string TracePoint::base_key() const {
    std::string s = function + "." + var;
    if (index >= 0) s += "[" + std::to_string(index) + "]";
    return s;
}

std::string TracePoint::key() const {
    return base_key() + "@" + std::to_string(occurrence);
}

NodeId encode_conditional(FormulaDag& dag, NodeId guard, std::optional<NodeId> then_value,
                          std::optional<NodeId> else_value, NodeId old_value) {
    NodeId t = then_value.value_or(old_value);
    NodeId e = else_value.value_or(old_value);
    return dag.mk_gate(Op::Ite, {guard, t, e});
}

bool parse_trace_ref(const std::string& ref, std::string& base, int& occurrence) {
    auto at = ref.rfind('@');
    if (at == std::string::npos) {
        base = ref;
        occurrence = -1;
        return true;
    }
    base = ref.substr(0, at);
    try {
        occurrence = std::stoi(ref.substr(at + 1));
    } catch (...) {
        return false;
    }
    return occurrence >= 0;
}

NodeId trace_lookup(const Encoding& enc, const std::string& ref) {
    std::string base;
    int occ;
    if (!parse_trace_ref(ref, base, occ))
        throw Error("malformed trace reference '" + ref + "'");
    if (occ < 0) {
        auto it = enc.last_occurrence.find(base);
        if (it != enc.last_occurrence.end()) occ = it->second;
    }
    std::string key = base + "@" + std::to_string(std::max(occ, 0));
    auto it = enc.trace.find(key);
    if (it != enc.trace.end()) return it->second;

    // suggestions: same base first, then lexicographic neighbors
    std::string msg = "unknown trace point '" + ref + "'";
    std::vector<std::string> near;
    for (auto& [k, id] : enc.trace) {
        (void)id;
        if (k.compare(0, base.size(), base) == 0) near.push_back(k);
        if (near.size() >= 5) break;
    }
    if (near.empty()) {
        auto lo = enc.trace.lower_bound(key);
        for (int i = 0; i < 3 && lo != enc.trace.end(); ++i, ++lo) near.push_back(lo->first);
    }
    if (!near.empty()) {
        msg += "; nearest:";
        for (auto& k : near) msg += " " + k;
    }
    throw Error(msg);
}

namespace {

struct Cell {
    NodeId  node = kNoNode; // kNoNode = never written
};

struct Root {
    const VarDecl* decl;
    std::string    owner;      // function-part of trace keys
    std::vector<Cell> bits;
    std::vector<int64_t> ints;
};

struct Binding {
    Root*  root = nullptr;
    size_t offset = 0;
    std::vector<int64_t> shape;
};

struct Frame {
    const FuncDecl* fn = nullptr;
    std::map<const VarDecl*, Binding> vars;
    bool    returned = false;
    int     guard_depth = 0;
    NodeId  ret_bit = kNoNode;
    int64_t ret_int = 0;
};

class SymExec {
public:
    SymExec(const Program& p, const ExecOptions& o) : prog_(p), opts_(o) {}

    Encoding run() {
        frames_.emplace_back();
        for (const auto& g : prog_.globals) {
            Binding b = allocate(*g, frames_.front(), "main");
            if (g->attr == Attr::In) {
                for (int64_t i = 0; i < g->cell_count(); ++i) {
                    NodeId n = enc_.dag.mk_input();
                    enc_.inputs.push_back({cell_name(*g, i), n});
                    bind_cell(*b.root, size_t(i), n);
                }
            } else if (g->init) {
                store_bit_or_int(b, *g, eval_value(*g->init));
            }
        }
        exec_call(*prog_.main, nullptr);
        for (const auto& g : prog_.globals) {
            if (g->attr != Attr::Out) continue;
            Binding& b = frames_.front().vars.at(g.get());
            for (int64_t i = 0; i < g->cell_count(); ++i)
                enc_.outputs.push_back({cell_name(*g, i), read_bit(b, size_t(i), *g, g->loc)});
        }
        frames_.clear();
        return std::move(enc_);
    }

private:
    const Program& prog_;
    const ExecOptions& opts_;
    Encoding enc_;
    std::vector<Frame> frames_;
    std::vector<std::unique_ptr<Root>> roots_;
    uint64_t steps_ = 0;

    static std::string cell_name(const VarDecl& d, int64_t i) {
        if (d.dims.empty()) return d.name;
        return d.name + "[" + std::to_string(i) + "]";
    }

    void tick() {
        if (++steps_ > opts_.max_steps)
            throw Error("translation exceeded step limit (non-terminating loop?)");
    }

    Frame& global_frame() { return frames_.front(); }
    Frame& frame() { return frames_.back(); }

    Binding allocate(const VarDecl& d, Frame& f, const std::string& owner) {
        auto root = std::make_unique<Root>();
        root->decl = &d;
        root->owner = owner;
        if (d.base == BaseType::Bit) root->bits.resize(size_t(d.cell_count()));
        else root->ints.resize(size_t(d.cell_count()), 0);
        Binding b{root.get(), 0, d.dims};
        roots_.push_back(std::move(root));
        f.vars[&d] = b;
        return b;
    }

    Binding& lookup(const VarDecl* d, SourceLoc loc) {
        if (!frames_.back().vars.count(d)) {
            auto found = global_frame().vars.find(d);
            if (found != global_frame().vars.end()) return found->second;
            throw Error("internal: unbound variable '" + d->name + "' at line " +
                        std::to_string(loc.line));
        }
        return frames_.back().vars.find(d)->second;
    }

    // Records the elementary step: cell gets a (possibly shared) node and the
    // trace point for this dynamic occurrence.
    void bind_cell(Root& root, size_t idx, NodeId n) {
        root.bits[idx].node = n;
        TracePoint tp;
        tp.function = root.owner;
        tp.var = root.decl->name;
        tp.index = root.decl->dims.empty() ? -1 : int64_t(idx);
        std::string base = tp.base_key();
        auto it = enc_.last_occurrence.find(base);
        tp.occurrence = it == enc_.last_occurrence.end() ? 0 : it->second + 1;
        enc_.last_occurrence[base] = tp.occurrence;
        enc_.trace[tp.key()] = n;
    }

    NodeId read_bit(const Binding& b, size_t idx, const VarDecl& d, SourceLoc loc) {
        Cell& c = b.root->bits[b.offset + idx];
        if (c.node == kNoNode) {
            if (opts_.zero_init) return enc_.dag.mk_const(0);
            throw Error("read of unwritten bit '" + d.name + "' (cell " +
                        std::to_string(b.offset + idx) + ") at line " + std::to_string(loc.line));
        }
        return c.node;
    }

    struct Value {
        BaseType base;
        NodeId   bit = kNoNode;
        int64_t  i   = 0;
    };

    NodeId coerce_bit(const Value& v) {
        if (v.base == BaseType::Bit) return v.bit;
        return enc_.dag.mk_const(int(v.i & 1));
    }

    void store_bit_or_int(const Binding& b, const VarDecl& d, Value v) {
        if (d.base == BaseType::Bit) bind_cell(*b.root, b.offset, coerce_bit(v));
        else b.root->ints[b.offset] = v.i;
    }

    Binding resolve_ref(const Expr& e) {
        const Binding& base = lookup(e.decl, e.loc);
        const std::vector<int64_t>& shape = base.shape;
        std::vector<size_t> stride(shape.size());
        size_t acc = 1;
        for (size_t k = shape.size(); k-- > 0;) {
            stride[k] = acc;
            acc *= size_t(shape[k]);
        }
        size_t off = base.offset;
        for (size_t k = 0; k < e.args.size(); ++k) {
            int64_t idx = eval_int(*e.args[k]);
            if (idx < 0 || idx >= shape[k])
                throw Error("index " + std::to_string(idx) + " out of range for '" + e.name +
                            "' at line " + std::to_string(e.loc.line));
            off += size_t(idx) * stride[k];
        }
        return Binding{base.root, off,
                       std::vector<int64_t>(shape.begin() + long(e.args.size()), shape.end())};
    }

    int64_t eval_int(const Expr& e) {
        Value v = eval_value(e);
        if (v.base != BaseType::Int)
            throw Error("expected concrete int at line " + std::to_string(e.loc.line));
        return v.i;
    }

    Value eval_value(const Expr& e) {
        if (e.type == BaseType::Bit) return {BaseType::Bit, eval_bit(e), 0};
        switch (e.kind) {
            case Expr::Kind::IntLit:
                return {BaseType::Int, kNoNode, e.int_val};
            case Expr::Kind::Ref: {
                Binding b = resolve_ref(e);
                return {BaseType::Int, kNoNode, b.root->ints[b.offset]};
            }
            case Expr::Kind::Unary: {
                int64_t a = eval_int(*e.args[0]);
                if (e.op == "!") return {BaseType::Int, kNoNode, a == 0 ? 1 : 0};
                if (e.op == "~") return {BaseType::Int, kNoNode, ~a};
                return {BaseType::Int, kNoNode, -a};
            }
            case Expr::Kind::Binary: {
                int64_t x = eval_int(*e.args[0]);
                int64_t y = eval_int(*e.args[1]);
                return {BaseType::Int, kNoNode, int_op(e.op, x, y, e.loc)};
            }
            case Expr::Kind::Ternary: {
                int64_t c = eval_int(*e.args[0]);
                return c != 0 ? eval_value(*e.args[1]) : eval_value(*e.args[2]);
            }
            case Expr::Kind::Call:
                return exec_call(*e.callee, &e.args);
        }
        throw Error("internal: bad expression");
    }

    static int64_t int_op(const std::string& op, int64_t x, int64_t y, SourceLoc loc) {
        if (op == "&") return x & y;
        if (op == "|") return x | y;
        if (op == "^") return x ^ y;
        if (op == "+") return x + y;
        if (op == "-") return x - y;
        if (op == "*") return x * y;
        if (op == "<<" || op == ">>") {
            if (y < 0 || y > 63)
                throw Error("shift amount " + std::to_string(y) + " out of range at line " +
                            std::to_string(loc.line));
            return op == "<<" ? x << y : x >> y;
        }
        if (op == "==") return x == y;
        if (op == "!=") return x != y;
        if (op == "<") return x < y;
        if (op == ">") return x > y;
        if (op == "<=") return x <= y;
        if (op == ">=") return x >= y;
        throw Error("internal: bad int operator " + op);
    }

    // --- bit expression translation -------------------------------------

    // Builds the node for a bit-typed expression without fusion.
    NodeId eval_bit_gates(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::IntLit:
                return enc_.dag.mk_const(int(e.int_val & 1));
            case Expr::Kind::Ref: {
                Binding b = resolve_ref(e);
                return read_bit(b, 0, *e.decl, e.loc);
            }
            case Expr::Kind::Unary:
                return enc_.dag.mk_not(eval_bit_gates(*e.args[0]));
            case Expr::Kind::Binary: {
                NodeId a = eval_bit_gates(*e.args[0]);
                NodeId b = eval_bit_gates(*e.args[1]);
                if (e.op == "&") return enc_.dag.mk_gate(Op::And, {a, b});
                if (e.op == "|") return enc_.dag.mk_gate(Op::Or, {a, b});
                if (e.op == "^" || e.op == "!=") return enc_.dag.mk_gate(Op::Xor, {a, b});
                if (e.op == "==") return enc_.dag.mk_not(enc_.dag.mk_gate(Op::Xor, {a, b}));
                throw Error("internal: bad bit operator " + e.op);
            }
            case Expr::Kind::Ternary: {
                if (e.args[0]->type == BaseType::Int)
                    return eval_int(*e.args[0]) != 0 ? eval_bit_gates(*e.args[1])
                                                     : eval_bit_gates(*e.args[2]);
                NodeId c = eval_bit_gates(*e.args[0]);
                NodeId t = eval_bit_gates(*e.args[1]);
                NodeId f = eval_bit_gates(*e.args[2]);
                return enc_.dag.mk_gate(Op::Ite, {c, t, f});
            }
            case Expr::Kind::Call: {
                Value v = exec_call(*e.callee, &e.args);
                return coerce_bit(v);
            }
        }
        throw Error("internal: bad bit expression");
    }

    // Fusion pre-pass: collect distinct leaf nodes of a pure-gate expression.
    // Calls and ?: abort fusion (calls have side effects and run once; merges
    // keep their dedicated select nodes). Returns false on abort.
    bool collect_leaves(const Expr& e, std::vector<NodeId>& leaves, int& ops, int max_leaves) {
        switch (e.kind) {
            case Expr::Kind::IntLit:
                return true; // constants fold inside the table
            case Expr::Kind::Ref: {
                if (e.type != BaseType::Bit) return true; // int index handled during eval
                Binding b = resolve_ref(e);
                NodeId n = read_bit(b, 0, *e.decl, e.loc);
                if (!enc_.dag.is_const(n) &&
                    std::find(leaves.begin(), leaves.end(), n) == leaves.end()) {
                    if (int(leaves.size()) >= max_leaves) return false;
                    leaves.push_back(n);
                }
                return true;
            }
            case Expr::Kind::Unary:
                ++ops;
                return collect_leaves(*e.args[0], leaves, ops, max_leaves);
            case Expr::Kind::Binary:
                ++ops;
                return collect_leaves(*e.args[0], leaves, ops, max_leaves) &&
                       collect_leaves(*e.args[1], leaves, ops, max_leaves);
            case Expr::Kind::Ternary:
            case Expr::Kind::Call:
                return false;
        }
        return false;
    }

    uint8_t eval_const_bit(const Expr& e, const std::map<NodeId, uint8_t>& env) {
        switch (e.kind) {
            case Expr::Kind::IntLit:
                return uint8_t(e.int_val & 1);
            case Expr::Kind::Ref: {
                Binding b = resolve_ref(e);
                NodeId n = read_bit(b, 0, *e.decl, e.loc);
                if (enc_.dag.is_const(n)) return uint8_t(enc_.dag.const_value(n));
                return env.at(n);
            }
            case Expr::Kind::Unary:
                return uint8_t(1 ^ eval_const_bit(*e.args[0], env));
            case Expr::Kind::Binary: {
                uint8_t a = eval_const_bit(*e.args[0], env);
                uint8_t b = eval_const_bit(*e.args[1], env);
                if (e.op == "&") return a & b;
                if (e.op == "|") return a | b;
                if (e.op == "^" || e.op == "!=") return a ^ b;
                if (e.op == "==") return uint8_t(1 ^ (a ^ b));
                throw Error("internal: bad bit operator " + e.op);
            }
            default:
                throw Error("internal: non-fusable expression in table build");
        }
    }

    static bool expr_has_call(const Expr& e) {
        if (e.kind == Expr::Kind::Call) return true;
        for (const auto& a : e.args)
            if (expr_has_call(*a)) return true;
        return false;
    }

    // Elementary-step builder: one statement's right-hand side becomes one
    // node. Multi-operand expressions over few distinct cells fuse into a
    // single table gate; everything else lowers op by op. Expressions with
    // calls never fuse (a call body must run exactly once).
    NodeId eval_bit(const Expr& e) {
        if (opts_.fuse && !expr_has_call(e)) {
            std::vector<NodeId> leaves;
            int ops = 0;
            if (collect_leaves(e, leaves, ops, opts_.fuse_max) && ops >= 2 &&
                leaves.size() >= 2) {
                size_t k = leaves.size();
                std::vector<uint8_t> table(size_t(1) << k);
                std::map<NodeId, uint8_t> env;
                for (size_t m = 0; m < table.size(); ++m) {
                    for (size_t j = 0; j < k; ++j) env[leaves[j]] = uint8_t((m >> j) & 1);
                    table[m] = eval_const_bit(e, env);
                }
                return enc_.dag.mk_table(leaves, table);
            }
        }
        return eval_bit_gates(e);
    }

    // --- statements -------------------------------------------------------

    Value exec_call(const FuncDecl& fn, const std::vector<ExprPtr>* args) {
        Frame f;
        f.fn = &fn;
        std::vector<std::pair<const VarDecl*, Binding>> argbinds;
        std::vector<std::pair<const VarDecl*, Value>> argvals;
        if (args) {
            for (size_t i = 0; i < fn.params.size(); ++i) {
                const VarDecl* p = fn.params[i].get();
                const Expr& a = *(*args)[i];
                if (p->is_array()) argbinds.push_back({p, resolve_ref(a)});
                else argvals.push_back({p, eval_value(a)});
            }
        }
        frames_.push_back(std::move(f));
        for (auto& [p, b] : argbinds) frame().vars[p] = b;
        for (auto& [p, v] : argvals) {
            Binding b = allocate(*p, frame(), fn.name);
            store_bit_or_int(b, *p, v);
        }
        exec_stmt(*fn.body);
        Value ret{fn.ret, frame().ret_bit, frame().ret_int};
        frames_.pop_back();
        return ret;
    }

    void exec_stmt(const Stmt& st) {
        if (frame().returned) return;
        tick();
        switch (st.kind) {
            case Stmt::Kind::DeclStmt:
                for (const auto& d : st.decls) {
                    Binding b = allocate(*d, frame(), frame().fn ? frame().fn->name : "main");
                    if (d->init) store_bit_or_int(b, *d, eval_value(*d->init));
                }
                break;
            case Stmt::Kind::Assign: {
                if (st.target->type == BaseType::Bit) {
                    NodeId n = eval_bit(*st.value);
                    Binding b = resolve_ref(*st.target);
                    bind_cell(*b.root, b.offset, n);
                } else {
                    int64_t v = eval_int(*st.value);
                    Binding b = resolve_ref(*st.target);
                    b.root->ints[b.offset] = v;
                }
                break;
            }
            case Stmt::Kind::CallStmt:
                eval_value(*st.value);
                break;
            case Stmt::Kind::Return:
                if (frame().guard_depth > 0)
                    throw Error("return inside a bit-guarded conditional at line " +
                                std::to_string(st.loc.line));
                if (st.value) {
                    Value v = eval_value(*st.value);
                    if (frame().fn && frame().fn->ret == BaseType::Bit)
                        frame().ret_bit = coerce_bit(v);
                    else
                        frame().ret_int = v.i;
                }
                frame().returned = true;
                break;
            case Stmt::Kind::If:
                exec_if(st);
                break;
            case Stmt::Kind::For: {
                exec_stmt(*st.init);
                while (!frame().returned) {
                    tick();
                    if (eval_int(*st.cond) == 0) break;
                    exec_stmt(*st.body);
                    if (frame().returned) break;
                    exec_stmt(*st.step);
                }
                break;
            }
            case Stmt::Kind::Block:
                for (const auto& sub : st.stmts) {
                    exec_stmt(*sub);
                    if (frame().returned) break;
                }
                break;
        }
    }

    void exec_if(const Stmt& st) {
        if (st.cond->type == BaseType::Int) {
            if (eval_int(*st.cond) != 0) exec_stmt(*st.then_branch);
            else if (st.else_branch) exec_stmt(*st.else_branch);
            return;
        }
        NodeId g = eval_bit(*st.cond);
        if (enc_.dag.is_const(g)) {
            if (enc_.dag.const_value(g)) exec_stmt(*st.then_branch);
            else if (st.else_branch) exec_stmt(*st.else_branch);
            return;
        }

        // Symbolic guard: run each branch on a copy of the visible bit state,
        // then merge cell-wise with select nodes. Int state and trace
        // counters advance through both branch executions; branch-local
        // declarations die with their scope, so only cells that existed
        // before the branch need merging.
        ++frame().guard_depth;
        Snapshot before = snapshot();
        exec_stmt(*st.then_branch);
        Snapshot after_then = snapshot();
        restore(before);
        if (st.else_branch) exec_stmt(*st.else_branch);
        Snapshot after_else = snapshot();

        for (size_t r = 0; r < before.cells.size(); ++r) {
            Root* root = before.roots[r];
            for (size_t i = 0; i < before.cells[r].size(); ++i) {
                NodeId t = after_then.cells[r][i];
                NodeId e = after_else.cells[r][i];
                if (t == e) continue; // untouched or identical in both branches
                NodeId old = before.cells[r][i];
                std::optional<NodeId> tv = t == old ? std::nullopt : std::optional<NodeId>(t);
                std::optional<NodeId> ev = e == old ? std::nullopt : std::optional<NodeId>(e);
                if ((!tv || !ev) && old == kNoNode) {
                    // one branch keeps the previous value, which never existed
                    if (!opts_.zero_init)
                        throw Error("conditional assignment to '" + root->decl->name +
                                    "' merges with an unwritten cell at line " +
                                    std::to_string(st.loc.line));
                    old = enc_.dag.mk_const(0);
                }
                NodeId merged = encode_conditional(enc_.dag, g, tv, ev, old);
                bind_cell(*root, i, merged);
            }
        }
        --frame().guard_depth;
    }

    struct Snapshot {
        std::vector<Root*> roots;
        std::vector<std::vector<NodeId>> cells;
    };

    Snapshot snapshot() {
        Snapshot s;
        for (auto& r : roots_) {
            if (r->bits.empty()) continue;
            s.roots.push_back(r.get());
            std::vector<NodeId> v(r->bits.size());
            for (size_t i = 0; i < v.size(); ++i) v[i] = r->bits[i].node;
            s.cells.push_back(std::move(v));
        }
        return s;
    }

    void restore(const Snapshot& s) {
        for (size_t r = 0; r < s.roots.size(); ++r)
            for (size_t i = 0; i < s.cells[r].size(); ++i)
                s.roots[r]->bits[i].node = s.cells[r][i];
    }
};

} // namespace

Encoding execute(const Program& program, const ExecOptions& opts) {
    if (!program.main) throw Error("execute: program has no main");
    SymExec sx(program, opts);
    return sx.run();
}

} // namespace algsat
