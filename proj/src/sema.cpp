#include "algsat/sema.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "algsat/parser.hpp"

namespace algsat {

namespace {

class Resolver {
public:
    Resolver(Program& p, DiagList& d) : prog_(p), diags_(d) {}

    void run() {
        Scope* global = new_scope(nullptr);
        for (auto& g : prog_.globals) declare(global, g.get());
        for (auto& g : prog_.globals)
            if (g->init) resolve_expr(*g->init, global);
        for (auto& f : prog_.functions) {
            if (fn_names_.count(f->name))
                diags_.error(f->loc, "duplicate function '" + f->name + "'");
            fn_names_.insert(f->name);
        }
        for (auto& f : prog_.functions) {
            f->scope = new_scope(global);
            for (auto& p : f->params) declare(f->scope, p.get());
            resolve_stmt(*f->body, f->scope);
        }
        prog_.main = prog_.find_function("main");
    }

private:
    Program& prog_;
    DiagList& diags_;
    std::set<std::string> fn_names_;

    Scope* new_scope(Scope* parent) {
        prog_.scopes.push_back(std::make_unique<Scope>());
        prog_.scopes.back()->parent = parent;
        return prog_.scopes.back().get();
    }

    void declare(Scope* s, VarDecl* d) {
        auto [it, fresh] = s->vars.emplace(d->name, d);
        if (!fresh)
            diags_.error(d->loc, "duplicate declaration of '" + d->name + "' in the same scope");
    }

    void resolve_expr(Expr& e, Scope* s) {
        switch (e.kind) {
            case Expr::Kind::IntLit:
                break;
            case Expr::Kind::Ref:
                e.decl = s->lookup(e.name);
                if (!e.decl) diags_.error(e.loc, "use of undeclared identifier '" + e.name + "'");
                for (auto& idx : e.args) resolve_expr(*idx, s);
                break;
            case Expr::Kind::Call:
                e.callee = prog_.find_function(e.name);
                if (!e.callee) diags_.error(e.loc, "call of undeclared function '" + e.name + "'");
                for (auto& a : e.args) resolve_expr(*a, s);
                break;
            default:
                for (auto& a : e.args) resolve_expr(*a, s);
                break;
        }
    }

    void resolve_stmt(Stmt& st, Scope* s) {
        switch (st.kind) {
            case Stmt::Kind::DeclStmt:
                for (auto& d : st.decls) {
                    if (d->init) resolve_expr(*d->init, s);
                    declare(s, d.get());
                }
                break;
            case Stmt::Kind::Assign:
                resolve_expr(*st.target, s);
                resolve_expr(*st.value, s);
                break;
            case Stmt::Kind::CallStmt:
                resolve_expr(*st.value, s);
                break;
            case Stmt::Kind::Return:
                if (st.value) resolve_expr(*st.value, s);
                break;
            case Stmt::Kind::If:
                resolve_expr(*st.cond, s);
                resolve_stmt(*st.then_branch, s);
                if (st.else_branch) resolve_stmt(*st.else_branch, s);
                break;
            case Stmt::Kind::For: {
                st.scope = new_scope(s);
                resolve_stmt(*st.init, st.scope);
                resolve_expr(*st.cond, st.scope);
                resolve_stmt(*st.step, st.scope);
                resolve_stmt(*st.body, st.scope);
                break;
            }
            case Stmt::Kind::Block: {
                st.scope = new_scope(s);
                for (auto& sub : st.stmts) resolve_stmt(*sub, st.scope);
                break;
            }
        }
    }
};

class Checker {
public:
    Checker(Program& p, DiagList& d) : prog_(p), diags_(d) {}

    void run() {
        if (!prog_.main)
            diags_.error({0, 0}, "entry point missing: no function named 'main'");
        else if (prog_.main->ret != BaseType::Void)
            diags_.error(prog_.main->loc, "'main' must return void");

        for (auto& g : prog_.globals) check_decl(*g);
        for (auto& f : prog_.functions) {
            current_fn_ = f.get();
            for (auto& p : f->params) {
                if (p->base == BaseType::Void)
                    diags_.error(p->loc, "'void' is legal only as a function return type");
            }
            check_stmt(*f->body, /*guard=*/nullptr);
        }
        check_call_graph();
    }

private:
    Program& prog_;
    DiagList& diags_;
    FuncDecl* current_fn_ = nullptr;
    std::map<const FuncDecl*, std::set<const FuncDecl*>> calls_;

    // Int state must stay concrete across a symbolic branch, so ints
    // assigned under a bit guard must have been declared under that guard.
    struct GuardCtx {
        std::set<const VarDecl*> locals;
    };
    std::map<const FuncDecl*, bool> fn_guard_safe_;

    struct ValType {
        BaseType base = BaseType::Void;
        std::vector<int64_t> dims; // non-empty = array value (only valid as call arg)
        bool scalar() const { return dims.empty(); }
    };

    void check_decl(const VarDecl& d) {
        if (d.base == BaseType::Void)
            diags_.error(d.loc, "'void' is legal only as a function return type");
        if (d.attr != Attr::None) {
            if (!d.is_global)
                diags_.error(d.loc, "local variables cannot be declared __in/__out");
            if (d.base != BaseType::Bit)
                diags_.error(d.loc, "__in/__out attributes apply only to bit variables");
        }
        for (int64_t dim : d.dims)
            if (dim == 0) diags_.error(d.loc, "array extent must be positive");
        if (d.init) {
            if (d.attr == Attr::In)
                diags_.error(d.loc, "__in variables cannot have initializers");
            ValType t = check_expr(*d.init);
            require_scalar_of(t, d.base, d.init->loc);
            if (d.is_array())
                diags_.error(d.loc, "array declarations cannot have initializers");
        }
    }

    bool is_bool_lit(const Expr& e) const {
        return e.kind == Expr::Kind::IntLit && (e.int_val == 0 || e.int_val == 1);
    }

    void require_scalar_of(const ValType& t, BaseType want, SourceLoc loc) {
        if (!t.scalar()) {
            diags_.error(loc, "array value not allowed here");
            return;
        }
        if (t.base == want) return;
        if (want == BaseType::Bit && t.base == BaseType::Int) {
            // only constants 0/1 promote; checked at the expression site
            return;
        }
        diags_.error(loc, std::string("expected ") + base_type_name(want) + " expression, found " +
                              base_type_name(t.base));
    }

    // Typing for a scalar context: bit positions accept int literals 0/1.
    ValType check_expr(Expr& e) {
        ValType t = infer(e);
        return t;
    }

    ValType infer(Expr& e) {
        switch (e.kind) {
            case Expr::Kind::IntLit:
                e.type = BaseType::Int;
                return {BaseType::Int, {}};
            case Expr::Kind::Ref: {
                if (!e.decl) return {BaseType::Void, {}};
                if (e.args.size() > e.decl->dims.size()) {
                    diags_.error(e.loc, "'" + e.name + "' indexed with too many subscripts");
                    return {e.decl->base, {}};
                }
                for (auto& idx : e.args) {
                    ValType it = infer(*idx);
                    if (!it.scalar() || it.base != BaseType::Int)
                        diags_.error(idx->loc, "array index must be an int expression");
                }
                e.remaining_dims = int(e.decl->dims.size() - e.args.size());
                e.type = e.decl->base;
                ValType t{e.decl->base, {}};
                for (size_t i = e.args.size(); i < e.decl->dims.size(); ++i)
                    t.dims.push_back(e.decl->dims[i]);
                return t;
            }
            case Expr::Kind::Unary: {
                ValType a = infer(*e.args[0]);
                if (!a.scalar()) {
                    diags_.error(e.loc, "operator '" + e.op + "' needs a scalar operand");
                    return {BaseType::Void, {}};
                }
                if (e.op == "-") {
                    if (a.base != BaseType::Int)
                        diags_.error(e.loc, "unary '-' applies to int only");
                    e.type = BaseType::Int;
                    return {BaseType::Int, {}};
                }
                // ! and ~ work on both; on bits both mean negation
                BaseType b = a.base == BaseType::Bit || is_bool_lit(*e.args[0])
                                 ? a.base
                                 : BaseType::Int;
                e.type = b;
                return {b, {}};
            }
            case Expr::Kind::Binary:
                return infer_binary(e);
            case Expr::Kind::Ternary: {
                ValType c = infer(*e.args[0]);
                ValType a = infer(*e.args[1]);
                ValType b = infer(*e.args[2]);
                if (!c.scalar() || !a.scalar() || !b.scalar()) {
                    diags_.error(e.loc, "'?:' needs scalar operands");
                    return {BaseType::Void, {}};
                }
                if (c.base == BaseType::Bit) {
                    bool ok_a = a.base == BaseType::Bit || is_bool_lit(*e.args[1]);
                    bool ok_b = b.base == BaseType::Bit || is_bool_lit(*e.args[2]);
                    if (!ok_a || !ok_b)
                        diags_.error(e.loc, "branches of a bit-guarded '?:' must be bit expressions");
                    e.type = BaseType::Bit;
                    return {BaseType::Bit, {}};
                }
                if (a.base != b.base)
                    diags_.error(e.loc, "'?:' branches must have the same type");
                e.type = a.base;
                return {a.base, {}};
            }
            case Expr::Kind::Call: {
                if (!e.callee) return {BaseType::Void, {}};
                if (current_fn_) calls_[current_fn_].insert(e.callee);
                const FuncDecl& f = *e.callee;
                if (e.args.size() != f.params.size()) {
                    diags_.error(e.loc, "call of '" + f.name + "' with " +
                                            std::to_string(e.args.size()) + " arguments, expected " +
                                            std::to_string(f.params.size()));
                } else {
                    for (size_t i = 0; i < e.args.size(); ++i) check_arg(*e.args[i], *f.params[i]);
                }
                e.type = f.ret;
                return {f.ret, {}};
            }
        }
        return {BaseType::Void, {}};
    }

    void check_arg(Expr& arg, const VarDecl& param) {
        ValType t = infer(arg);
        if (param.is_array()) {
            if (arg.kind != Expr::Kind::Ref || t.scalar()) {
                diags_.error(arg.loc, "parameter '" + param.name + "' expects an array");
                return;
            }
            if (t.base != param.base) {
                diags_.error(arg.loc, "array argument type mismatch for '" + param.name + "'");
                return;
            }
            if (t.dims.size() != param.dims.size()) {
                diags_.error(arg.loc, "array argument rank mismatch for '" + param.name + "'");
                return;
            }
            for (size_t i = 0; i < t.dims.size(); ++i)
                if (param.dims[i] >= 0 && param.dims[i] != t.dims[i])
                    diags_.error(arg.loc, "array argument extent mismatch for '" + param.name + "'");
            return;
        }
        if (!t.scalar()) {
            diags_.error(arg.loc, "parameter '" + param.name + "' expects a scalar");
            return;
        }
        if (t.base == param.base) return;
        if (param.base == BaseType::Bit && is_bool_lit(arg)) return;
        diags_.error(arg.loc, "argument type mismatch for '" + param.name + "'");
    }

    ValType infer_binary(Expr& e) {
        ValType a = infer(*e.args[0]);
        ValType b = infer(*e.args[1]);
        if (!a.scalar() || !b.scalar()) {
            diags_.error(e.loc, "operator '" + e.op + "' needs scalar operands");
            return {BaseType::Void, {}};
        }
        auto is_bitish = [&](const ValType& t, const Expr& x) {
            return t.base == BaseType::Bit || is_bool_lit(x);
        };
        bool bit_ctx = a.base == BaseType::Bit || b.base == BaseType::Bit;
        const std::string& op = e.op;
        if (op == "&" || op == "|" || op == "^" || op == "==" || op == "!=") {
            if (bit_ctx) {
                if (!is_bitish(a, *e.args[0]) || !is_bitish(b, *e.args[1]))
                    diags_.error(e.loc, "operator '" + op + "' mixes bit and int operands");
                e.type = BaseType::Bit;
                return {BaseType::Bit, {}};
            }
            e.type = BaseType::Int;
            return {BaseType::Int, {}};
        }
        // int-only operators
        if (a.base != BaseType::Int || b.base != BaseType::Int)
            diags_.error(e.loc, "operator '" + op + "' applies to int operands only");
        e.type = BaseType::Int;
        return {BaseType::Int, {}};
    }

    void check_stmt(Stmt& st, GuardCtx* guard) {
        switch (st.kind) {
            case Stmt::Kind::DeclStmt:
                for (auto& d : st.decls) {
                    check_decl(*d);
                    if (guard) guard->locals.insert(d.get());
                }
                break;
            case Stmt::Kind::Assign: {
                ValType vt = check_expr(*st.value);
                if (st.target->kind != Expr::Kind::Ref) {
                    diags_.error(st.loc, "assignment target must be a variable");
                    break;
                }
                ValType tt = infer(*st.target);
                if (!tt.scalar()) {
                    diags_.error(st.loc, "cannot assign to a whole array");
                    break;
                }
                if (tt.base == BaseType::Int && guard && st.target->decl &&
                    !guard->locals.count(st.target->decl))
                    diags_.error(st.loc, "assignment to int variable '" + st.target->name +
                                             "' declared outside a bit-guarded conditional");
                require_scalar_of(vt, tt.base, st.value->loc);
                if (tt.base == BaseType::Bit && vt.scalar() && vt.base == BaseType::Int &&
                    !is_bool_lit(*st.value))
                    diags_.error(st.value->loc, "only constants 0/1 convert to bit");
                break;
            }
            case Stmt::Kind::CallStmt:
                check_expr(*st.value);
                if (guard && st.value->callee && !fn_pure_int_free(st.value->callee))
                    diags_.error(st.loc, "call of '" + st.value->name +
                                             "' inside a bit-guarded conditional mutates int state");
                break;
            case Stmt::Kind::Return: {
                if (guard)
                    diags_.error(st.loc, "return inside a bit-guarded conditional");
                BaseType want = current_fn_ ? current_fn_->ret : BaseType::Void;
                if (want == BaseType::Void) {
                    if (st.value) diags_.error(st.loc, "void function cannot return a value");
                } else if (!st.value) {
                    diags_.error(st.loc, "missing return value");
                } else {
                    ValType t = check_expr(*st.value);
                    require_scalar_of(t, want, st.value->loc);
                }
                break;
            }
            case Stmt::Kind::If: {
                ValType c = check_expr(*st.cond);
                if (!c.scalar() || c.base == BaseType::Void)
                    diags_.error(st.cond->loc, "if condition must be a bit or int expression");
                GuardCtx fresh;
                GuardCtx* inner = guard;
                if (c.base == BaseType::Bit && !inner) inner = &fresh;
                check_stmt(*st.then_branch, inner);
                if (st.else_branch) check_stmt(*st.else_branch, inner);
                break;
            }
            case Stmt::Kind::For: {
                check_stmt(*st.init, guard);
                if (st.init->kind == Stmt::Kind::DeclStmt) {
                    for (auto& d : st.init->decls)
                        if (d->base != BaseType::Int || d->is_array())
                            diags_.error(d->loc, "for-loop counter must be a scalar int");
                } else if (st.init->kind == Stmt::Kind::Assign) {
                    if (st.init->target->type != BaseType::Int)
                        diags_.error(st.init->loc, "for-loop init must assign an int");
                }
                ValType c = check_expr(*st.cond);
                if (!c.scalar() || c.base != BaseType::Int)
                    diags_.error(st.cond->loc, "for-loop condition must be an int expression");
                check_stmt(*st.step, guard);
                check_stmt(*st.body, guard);
                break;
            }
            case Stmt::Kind::Block:
                for (auto& sub : st.stmts) check_stmt(*sub, guard);
                break;
        }
    }

    // A call is safe under a bit guard when the callee (transitively) never
    // assigns an int it did not declare itself. Parameters count as local.
    bool fn_pure_int_free(const FuncDecl* f) {
        auto it = fn_guard_safe_.find(f);
        if (it != fn_guard_safe_.end()) return it->second;
        fn_guard_safe_[f] = true; // optimistic on cycles; cycle errors come separately
        GuardCtx ctx;
        for (const auto& p : f->params) ctx.locals.insert(p.get());
        bool ok = stmt_guard_safe(*f->body, ctx);
        fn_guard_safe_[f] = ok;
        return ok;
    }

    bool stmt_guard_safe(const Stmt& st, GuardCtx& ctx) {
        switch (st.kind) {
            case Stmt::Kind::DeclStmt:
                for (const auto& d : st.decls) ctx.locals.insert(d.get());
                return true;
            case Stmt::Kind::Assign:
                if (st.target->type == BaseType::Int && st.target->decl &&
                    !ctx.locals.count(st.target->decl))
                    return false;
                return true;
            case Stmt::Kind::CallStmt:
                return st.value->callee ? fn_pure_int_free(st.value->callee) : true;
            case Stmt::Kind::Return:
                return true;
            case Stmt::Kind::If:
                if (!stmt_guard_safe(*st.then_branch, ctx)) return false;
                if (st.else_branch && !stmt_guard_safe(*st.else_branch, ctx)) return false;
                return true;
            case Stmt::Kind::For:
                return stmt_guard_safe(*st.init, ctx) && stmt_guard_safe(*st.step, ctx) &&
                       stmt_guard_safe(*st.body, ctx);
            case Stmt::Kind::Block:
                for (const auto& sub : st.stmts)
                    if (!stmt_guard_safe(*sub, ctx)) return false;
                return true;
        }
        return true;
    }

    void check_call_graph() {
        std::map<const FuncDecl*, int> state; // 0 new, 1 active, 2 done
        std::function<bool(const FuncDecl*)> dfs = [&](const FuncDecl* f) -> bool {
            state[f] = 1;
            for (const FuncDecl* g : calls_[f]) {
                if (state[g] == 1) return false;
                if (state[g] == 0 && !dfs(g)) return false;
            }
            state[f] = 2;
            return true;
        };
        for (auto& f : prog_.functions) {
            if (state[f.get()] == 0 && !dfs(f.get())) {
                diags_.error(f->loc, "recursion unsupported: call graph contains a cycle through '" +
                                         f->name + "'");
                return;
            }
        }
    }
};

} // namespace

void resolve(Program& program, DiagList& diags) {
    Resolver r(program, diags);
    r.run();
}

void check(Program& program, DiagList& diags) {
    Checker c(program, diags);
    c.run();
}

std::unique_ptr<Program> analyze_source(const std::string& source, DiagList& diags) {
    auto prog = parse_source(source, diags);
    if (diags.has_errors()) return nullptr;
    resolve(*prog, diags);
    if (diags.has_errors()) return nullptr;
    check(*prog, diags);
    if (diags.has_errors()) return nullptr;
    return prog;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::unique_ptr<Program> analyze_file(const std::string& path, DiagList& diags) {
    return analyze_source(read_text_file(path), diags);
}

} // namespace algsat
