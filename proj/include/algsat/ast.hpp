#pragma once

#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "algsat/diag.hpp"

namespace algsat {

enum class BaseType { Bit, Int, Void };
const char* base_type_name(BaseType t);

enum class Attr { None, In, Out };

struct Expr;
struct Stmt;
struct FuncDecl;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

struct VarDecl {
    std::string name;
    BaseType    base = BaseType::Void;
    std::vector<int64_t> dims; // array extents; -1 in params means "any"
    Attr        attr = Attr::None;
    ExprPtr     init;          // optional initializer
    SourceLoc   loc;
    bool        is_global = false;
    bool        is_param  = false;

    bool is_array() const { return !dims.empty(); }
    int64_t cell_count() const {
        int64_t n = 1;
        for (int64_t d : dims) n *= d;
        return n;
    }
};

struct Expr {
    enum class Kind { IntLit, Ref, Unary, Binary, Ternary, Call };
    Kind        kind;
    SourceLoc   loc;
    int64_t     int_val = 0;   // IntLit
    std::string name;          // Ref / Call
    std::string op;            // Unary / Binary
    std::vector<ExprPtr> args; // Ref: indices; Call: arguments; operators: operands

    // resolution / checking results
    VarDecl*  decl   = nullptr;
    FuncDecl* callee = nullptr;
    BaseType  type   = BaseType::Void;
    int       remaining_dims = 0; // Ref only: dims not consumed by indices
};

struct Scope {
    Scope* parent = nullptr;
    std::map<std::string, VarDecl*> vars;

    VarDecl* lookup(const std::string& n) const {
        for (const Scope* s = this; s; s = s->parent) {
            auto it = s->vars.find(n);
            if (it != s->vars.end()) return it->second;
        }
        return nullptr;
    }
};

struct Stmt {
    enum class Kind { DeclStmt, Assign, If, For, Block, CallStmt, Return };
    Kind      kind;
    SourceLoc loc;

    std::vector<std::unique_ptr<VarDecl>> decls; // DeclStmt
    ExprPtr target;                 // Assign lhs (Ref)
    ExprPtr value;                  // Assign rhs / Return value / CallStmt call
    ExprPtr cond;                   // If / For condition
    StmtPtr then_branch, else_branch;
    StmtPtr init, step, body;       // For
    std::vector<StmtPtr> stmts;     // Block
    Scope* scope = nullptr;         // Block / For header scope
};

struct FuncDecl {
    std::string name;
    BaseType    ret = BaseType::Void;
    std::vector<std::unique_ptr<VarDecl>> params;
    StmtPtr     body;
    SourceLoc   loc;
    Scope*      scope = nullptr; // parameter scope
};

struct Program {
    std::vector<std::unique_ptr<VarDecl>>  globals;   // declaration order
    std::vector<std::unique_ptr<FuncDecl>> functions; // declaration order
    std::vector<std::pair<bool, int>> decl_order;     // (is_function, index) in source order
    std::vector<std::unique_ptr<Scope>> scopes;       // arena, scopes[0] = global
    FuncDecl* main = nullptr;                         // set by resolve

    Scope* global_scope() const { return scopes.empty() ? nullptr : scopes[0].get(); }
    FuncDecl* find_function(const std::string& n) const {
        for (const auto& f : functions)
            if (f->name == n) return f.get();
        return nullptr;
    }
};

// Source-shaped printer; parse(print(p)) is structurally identical to p.
void print_program(const Program& p, std::ostream& os);
std::string print_program(const Program& p);
void print_expr(const Expr& e, std::ostream& os);

} // namespace algsat
