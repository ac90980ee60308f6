#include "algsat/interp.hpp"

#include <cassert>
#include <map>

#include "algsat/diag.hpp"

namespace algsat {

size_t program_input_width(const Program& program) {
    size_t n = 0;
    for (const auto& g : program.globals)
        if (g->attr == Attr::In) n += size_t(g->cell_count());
    return n;
}

size_t program_output_width(const Program& program) {
    size_t n = 0;
    for (const auto& g : program.globals)
        if (g->attr == Attr::Out) n += size_t(g->cell_count());
    return n;
}

namespace {

struct Cell {
    uint8_t val = 0;
    bool    written = false;
};

// Storage root for one declared variable (or one scalar parameter copy).
struct Root {
    const VarDecl* decl;
    std::vector<Cell>    bits; // BaseType::Bit
    std::vector<int64_t> ints; // BaseType::Int
};

// What a name means inside a frame: either an owned root, or a view into
// another root (array parameters, possibly a sub-array slice). `shape`
// holds the concrete extents seen through this binding.
struct Binding {
    Root*  root = nullptr;
    size_t offset = 0;
    std::vector<int64_t> shape;
};

struct Frame {
    const FuncDecl* fn = nullptr;
    std::map<const VarDecl*, Binding> vars;
    bool    returned = false;
    uint8_t ret_bit = 0;
    int64_t ret_int = 0;
};

class Interp {
public:
    Interp(const Program& p, const ExecOptions& o) : prog_(p), opts_(o) {}

    BitVec run(const BitVec& input) {
        size_t want = program_input_width(prog_);
        if (input.size() != want)
            throw Error("run_concrete: expected " + std::to_string(want) + " input bits, got " +
                        std::to_string(input.size()));
        frames_.emplace_back(); // global frame
        size_t in_pos = 0;
        for (const auto& g : prog_.globals) {
            Binding b = allocate(*g, frames_.front());
            if (g->attr == Attr::In) {
                for (int64_t i = 0; i < g->cell_count(); ++i) {
                    b.root->bits[size_t(i)] = {input[in_pos++], true};
                }
            } else if (g->init) {
                store_scalar(b, 0, *g, eval_expr(*g->init));
            }
        }
        exec_call(*prog_.main, {});
        BitVec out;
        for (const auto& g : prog_.globals) {
            if (g->attr != Attr::Out) continue;
            Binding& b = frames_.front().vars.at(g.get());
            for (int64_t i = 0; i < g->cell_count(); ++i)
                out.push_back(read_bit(b, size_t(i), *g, g->loc));
        }
        frames_.clear();
        return out;
    }

private:
    const Program& prog_;
    const ExecOptions& opts_;
    std::vector<Frame> frames_;
    std::vector<std::unique_ptr<Root>> roots_;
    uint64_t steps_ = 0;

    Frame& global_frame() { return frames_.front(); }
    Frame& frame() { return frames_.back(); }

    void tick() {
        if (++steps_ > opts_.max_steps)
            throw Error("execution exceeded step limit (non-terminating loop?)");
    }

    Binding allocate(const VarDecl& d, Frame& f) {
        auto root = std::make_unique<Root>();
        root->decl = &d;
        if (d.base == BaseType::Bit) root->bits.resize(size_t(d.cell_count()));
        else root->ints.resize(size_t(d.cell_count()), 0);
        Binding b{root.get(), 0, d.dims};
        roots_.push_back(std::move(root));
        f.vars[&d] = b;
        return b;
    }

    Binding& lookup(const VarDecl* d, SourceLoc loc) {
        for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
            auto found = it->vars.find(d);
            if (found != it->vars.end()) return found->second;
            if (it->fn) break; // only innermost function frame + globals are visible
        }
        auto found = global_frame().vars.find(d);
        if (found != global_frame().vars.end()) return found->second;
        throw Error("internal: unbound variable '" + d->name + "' at line " + std::to_string(loc.line));
    }

    struct Value {
        BaseType base;
        uint8_t  bit = 0;
        int64_t  i   = 0;
    };

    uint8_t read_bit(const Binding& b, size_t idx, const VarDecl& d, SourceLoc loc) {
        Cell& c = b.root->bits[b.offset + idx];
        if (!c.written) {
            if (opts_.zero_init) return 0;
            throw Error("read of unwritten bit '" + d.name + "' (cell " + std::to_string(idx) +
                        ") at line " + std::to_string(loc.line));
        }
        return c.val;
    }

    void store_scalar(const Binding& b, size_t idx, const VarDecl& d, Value v) {
        if (d.base == BaseType::Bit) {
            b.root->bits[b.offset + idx] = {coerce_bit(v), true};
        } else {
            b.root->ints[b.offset + idx] = v.i;
        }
    }

    static uint8_t coerce_bit(const Value& v) {
        if (v.base == BaseType::Bit) return v.bit;
        return uint8_t(v.i & 1); // checker guarantees 0/1 literals only
    }

    // resolves a (possibly partial) reference to a storage location plus the
    // shape of the part not consumed by indices
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

    Value eval_expr(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::IntLit:
                return {BaseType::Int, 0, e.int_val};
            case Expr::Kind::Ref: {
                Binding b = resolve_ref(e);
                if (e.decl->base == BaseType::Bit)
                    return {BaseType::Bit, read_bit(b, 0, *e.decl, e.loc), 0};
                return {BaseType::Int, 0, b.root->ints[b.offset]};
            }
            case Expr::Kind::Unary: {
                Value a = eval_expr(*e.args[0]);
                if (a.base == BaseType::Bit) {
                    return {BaseType::Bit, uint8_t(!a.bit), 0};
                }
                if (e.op == "!") return {BaseType::Int, 0, a.i == 0 ? 1 : 0};
                if (e.op == "~") return {BaseType::Int, 0, ~a.i};
                return {BaseType::Int, 0, -a.i};
            }
            case Expr::Kind::Binary:
                return eval_binary(e);
            case Expr::Kind::Ternary: {
                Value c = eval_expr(*e.args[0]);
                bool taken = c.base == BaseType::Bit ? c.bit != 0 : c.i != 0;
                Value v = taken ? eval_expr(*e.args[1]) : eval_expr(*e.args[2]);
                if (e.type == BaseType::Bit) return {BaseType::Bit, coerce_bit(v), 0};
                return v;
            }
            case Expr::Kind::Call:
                return exec_call(*e.callee, &e.args);
        }
        throw Error("internal: bad expression");
    }

    Value eval_binary(const Expr& e) {
        Value a = eval_expr(*e.args[0]);
        Value b = eval_expr(*e.args[1]);
        const std::string& op = e.op;
        if (e.type == BaseType::Bit) {
            uint8_t x = coerce_bit(a), y = coerce_bit(b);
            uint8_t r = 0;
            if (op == "&") r = x & y;
            else if (op == "|") r = x | y;
            else if (op == "^") r = x ^ y;
            else if (op == "==") r = uint8_t(x == y);
            else if (op == "!=") r = x ^ y;
            else throw Error("internal: bad bit operator " + op);
            return {BaseType::Bit, r, 0};
        }
        int64_t x = a.i, y = b.i, r = 0;
        if (op == "&") r = x & y;
        else if (op == "|") r = x | y;
        else if (op == "^") r = x ^ y;
        else if (op == "+") r = x + y;
        else if (op == "-") r = x - y;
        else if (op == "*") r = x * y;
        else if (op == "<<" || op == ">>") {
            if (y < 0 || y > 63)
                throw Error("shift amount " + std::to_string(y) + " out of range at line " +
                            std::to_string(e.loc.line));
            r = op == "<<" ? x << y : x >> y;
        } else if (op == "==") r = x == y;
        else if (op == "!=") r = x != y;
        else if (op == "<") r = x < y;
        else if (op == ">") r = x > y;
        else if (op == "<=") r = x <= y;
        else if (op == ">=") r = x >= y;
        else throw Error("internal: bad int operator " + op);
        return {BaseType::Int, 0, r};
    }

    int64_t eval_int(const Expr& e) {
        Value v = eval_expr(e);
        if (v.base != BaseType::Int)
            throw Error("expected concrete int at line " + std::to_string(e.loc.line));
        return v.i;
    }

    Value exec_call(const FuncDecl& fn, const std::vector<ExprPtr>* args) {
        Frame f;
        f.fn = &fn;
        // bind parameters before pushing the frame (args evaluate in caller scope)
        std::vector<std::pair<const VarDecl*, Binding>> argbinds;
        std::vector<std::pair<const VarDecl*, Value>> argvals;
        if (args) {
            for (size_t i = 0; i < fn.params.size(); ++i) {
                const VarDecl* p = fn.params[i].get();
                const Expr& a = *(*args)[i];
                if (p->is_array()) {
                    argbinds.push_back({p, resolve_ref(a)});
                } else {
                    argvals.push_back({p, eval_expr(a)});
                }
            }
        }
        frames_.push_back(std::move(f));
        for (auto& [p, b] : argbinds) frame().vars[p] = b;
        for (auto& [p, v] : argvals) {
            Binding b = allocate(*p, frame());
            store_scalar(b, 0, *p, v);
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
                    Binding b = allocate(*d, frame());
                    if (d->init) store_scalar(b, 0, *d, eval_expr(*d->init));
                }
                break;
            case Stmt::Kind::Assign: {
                Value v = eval_expr(*st.value);
                store_scalar(resolve_ref(*st.target), 0, *st.target->decl, v);
                break;
            }
            case Stmt::Kind::CallStmt:
                eval_expr(*st.value);
                break;
            case Stmt::Kind::Return:
                if (st.value) {
                    Value v = eval_expr(*st.value);
                    frame().ret_bit = coerce_bit(v);
                    frame().ret_int = v.i;
                }
                frame().returned = true;
                break;
            case Stmt::Kind::If: {
                Value c = eval_expr(*st.cond);
                bool taken = c.base == BaseType::Bit ? c.bit != 0 : c.i != 0;
                if (taken) exec_stmt(*st.then_branch);
                else if (st.else_branch) exec_stmt(*st.else_branch);
                break;
            }
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
};

} // namespace

BitVec run_concrete(const Program& program, const BitVec& input, const ExecOptions& opts) {
    if (!program.main) throw Error("run_concrete: program has no main");
    Interp in(program, opts);
    return in.run(input);
}

} // namespace algsat
