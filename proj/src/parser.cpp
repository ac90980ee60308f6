#include "algsat/parser.hpp"

namespace algsat {

namespace {

class Parser {
public:
    Parser(const std::vector<Token>& toks, DiagList& diags) : toks_(toks), diags_(diags) {}

    std::unique_ptr<Program> run() {
        auto prog = std::make_unique<Program>();
        prog_ = prog.get();
        while (!at_eof()) {
            size_t before = pos_;
            parse_top_level();
            if (pos_ == before) advance(); // always make progress
        }
        return prog;
    }

private:
    const std::vector<Token>& toks_;
    DiagList& diags_;
    size_t pos_ = 0;
    Program* prog_ = nullptr;

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(size_t n = 1) const {
        return toks_[std::min(pos_ + n, toks_.size() - 1)];
    }
    bool at_eof() const { return cur().kind == TokKind::Eof; }
    void advance() { if (!at_eof()) ++pos_; }

    bool accept(TokKind k, const char* text) {
        if (cur().is(k, text)) { advance(); return true; }
        return false;
    }
    bool expect(TokKind k, const char* text) {
        if (accept(k, text)) return true;
        diags_.error(cur().loc, std::string("expected '") + text + "', found '" +
                                    (cur().kind == TokKind::Eof ? "<eof>" : cur().lexeme) + "'");
        return false;
    }

    void sync_statement() {
        // skip to just past the next ';' or to a block boundary
        while (!at_eof()) {
            if (cur().is(TokKind::Punct, ";")) { advance(); return; }
            if (cur().is(TokKind::Punct, "}") || cur().is(TokKind::Punct, "{")) return;
            advance();
        }
    }

    bool is_type_kw() const {
        return cur().is_kw("bit") || cur().is_kw("int") || cur().is_kw("void");
    }

    BaseType parse_base_type() {
        if (accept(TokKind::Keyword, "bit")) return BaseType::Bit;
        if (accept(TokKind::Keyword, "int")) return BaseType::Int;
        if (accept(TokKind::Keyword, "void")) return BaseType::Void;
        diags_.error(cur().loc, "expected type, found '" + cur().lexeme + "'");
        return BaseType::Void;
    }

    void parse_top_level() {
        // function with omitted return type: `name ( ... ) { ... }`
        if (cur().kind == TokKind::Identifier && peek().is(TokKind::Punct, "(")) {
            parse_function(BaseType::Void, true);
            return;
        }
        Attr attr = Attr::None;
        SourceLoc attr_loc = cur().loc;
        if (accept(TokKind::Keyword, "__in")) attr = Attr::In;
        else if (accept(TokKind::Keyword, "__out")) attr = Attr::Out;
        if (!is_type_kw()) {
            diags_.error(cur().loc, "expected declaration or function, found '" + cur().lexeme + "'");
            sync_statement();
            return;
        }
        BaseType base = parse_base_type();
        if (attr == Attr::None && cur().kind == TokKind::Identifier &&
            peek().is(TokKind::Punct, "(")) {
            parse_function(base, false);
            return;
        }
        (void)attr_loc;
        auto decls = parse_declarators(base, attr, /*global=*/true);
        expect(TokKind::Punct, ";");
        for (auto& d : decls) {
            prog_->decl_order.push_back({false, int(prog_->globals.size())});
            prog_->globals.push_back(std::move(d));
        }
    }

    void parse_function(BaseType ret, bool implied_void) {
        auto fn = std::make_unique<FuncDecl>();
        fn->ret = ret;
        fn->loc = cur().loc;
        (void)implied_void;
        if (cur().kind != TokKind::Identifier) {
            diags_.error(cur().loc, "expected function name");
            sync_statement();
            return;
        }
        fn->name = cur().lexeme;
        advance();
        expect(TokKind::Punct, "(");
        if (!cur().is(TokKind::Punct, ")")) {
            do {
                auto p = parse_param();
                if (p) fn->params.push_back(std::move(p));
            } while (accept(TokKind::Punct, ","));
        }
        expect(TokKind::Punct, ")");
        if (!cur().is(TokKind::Punct, "{")) {
            diags_.error(cur().loc, "expected function body");
            sync_statement();
            return;
        }
        fn->body = parse_block();
        prog_->decl_order.push_back({true, int(prog_->functions.size())});
        prog_->functions.push_back(std::move(fn));
    }

    std::unique_ptr<VarDecl> parse_param() {
        auto d = std::make_unique<VarDecl>();
        d->loc = cur().loc;
        d->is_param = true;
        if (accept(TokKind::Keyword, "__in") || accept(TokKind::Keyword, "__out"))
            diags_.error(d->loc, "parameters cannot carry __in/__out attributes");
        d->base = parse_base_type();
        if (cur().kind != TokKind::Identifier) {
            diags_.error(cur().loc, "expected parameter name");
            return nullptr;
        }
        d->name = cur().lexeme;
        advance();
        while (accept(TokKind::Punct, "[")) {
            if (cur().kind == TokKind::IntLiteral) {
                d->dims.push_back(cur().int_val);
                advance();
            } else {
                d->dims.push_back(-1); // open extent: matches any argument length
            }
            expect(TokKind::Punct, "]");
        }
        return d;
    }

    std::vector<std::unique_ptr<VarDecl>> parse_declarators(BaseType base, Attr attr, bool global) {
        std::vector<std::unique_ptr<VarDecl>> out;
        do {
            auto d = std::make_unique<VarDecl>();
            d->base = base;
            d->attr = attr;
            d->is_global = global;
            d->loc = cur().loc;
            if (cur().kind != TokKind::Identifier) {
                diags_.error(cur().loc, "expected declarator name, found '" + cur().lexeme + "'");
                sync_statement();
                return out;
            }
            d->name = cur().lexeme;
            advance();
            while (accept(TokKind::Punct, "[")) {
                if (cur().kind == TokKind::IntLiteral) {
                    if (cur().int_val < 0)
                        diags_.error(cur().loc, "array extent must be non-negative");
                    d->dims.push_back(cur().int_val);
                    advance();
                } else {
                    diags_.error(cur().loc, "array extent must be an integer constant");
                }
                expect(TokKind::Punct, "]");
            }
            if (accept(TokKind::Operator, "=")) d->init = parse_expr();
            out.push_back(std::move(d));
        } while (accept(TokKind::Punct, ","));
        return out;
    }

    StmtPtr parse_block() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::Block;
        s->loc = cur().loc;
        expect(TokKind::Punct, "{");
        while (!at_eof() && !cur().is(TokKind::Punct, "}")) {
            size_t before = pos_;
            auto sub = parse_statement();
            if (sub) s->stmts.push_back(std::move(sub));
            if (pos_ == before) advance();
        }
        expect(TokKind::Punct, "}");
        return s;
    }

    StmtPtr parse_statement() {
        if (cur().is(TokKind::Punct, "{")) return parse_block();
        if (cur().is_kw("if")) return parse_if();
        if (cur().is_kw("for")) return parse_for();
        if (cur().is_kw("return")) {
            auto s = std::make_unique<Stmt>();
            s->kind = Stmt::Kind::Return;
            s->loc = cur().loc;
            advance();
            if (!cur().is(TokKind::Punct, ";")) s->value = parse_expr();
            expect(TokKind::Punct, ";");
            return s;
        }
        if (cur().is_kw("__in") || cur().is_kw("__out") || is_type_kw()) {
            auto s = std::make_unique<Stmt>();
            s->kind = Stmt::Kind::DeclStmt;
            s->loc = cur().loc;
            Attr attr = Attr::None;
            if (accept(TokKind::Keyword, "__in")) attr = Attr::In;
            else if (accept(TokKind::Keyword, "__out")) attr = Attr::Out;
            BaseType base = parse_base_type();
            s->decls = parse_declarators(base, attr, /*global=*/false);
            expect(TokKind::Punct, ";");
            return s;
        }
        if (cur().kind == TokKind::Identifier) {
            if (peek().is(TokKind::Punct, "(")) {
                auto s = std::make_unique<Stmt>();
                s->kind = Stmt::Kind::CallStmt;
                s->loc = cur().loc;
                s->value = parse_primary();
                expect(TokKind::Punct, ";");
                return s;
            }
            return parse_assign(true);
        }
        diags_.error(cur().loc, "expected statement, found '" + cur().lexeme + "'");
        sync_statement();
        return nullptr;
    }

    StmtPtr parse_assign(bool eat_semi) {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::Assign;
        s->loc = cur().loc;
        s->target = parse_ref();
        if (!expect(TokKind::Operator, "=")) {
            sync_statement();
            return nullptr;
        }
        s->value = parse_expr();
        if (eat_semi) expect(TokKind::Punct, ";");
        return s;
    }

    StmtPtr parse_if() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::If;
        s->loc = cur().loc;
        advance(); // if
        expect(TokKind::Punct, "(");
        s->cond = parse_expr();
        expect(TokKind::Punct, ")");
        s->then_branch = parse_statement();
        if (accept(TokKind::Keyword, "else")) s->else_branch = parse_statement();
        if (!s->then_branch) return nullptr;
        return s;
    }

    StmtPtr parse_for() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::For;
        s->loc = cur().loc;
        advance(); // for
        expect(TokKind::Punct, "(");
        if (is_type_kw()) {
            auto init = std::make_unique<Stmt>();
            init->kind = Stmt::Kind::DeclStmt;
            init->loc = cur().loc;
            BaseType base = parse_base_type();
            init->decls = parse_declarators(base, Attr::None, false);
            s->init = std::move(init);
        } else {
            s->init = parse_assign(false);
        }
        expect(TokKind::Punct, ";");
        s->cond = parse_expr();
        expect(TokKind::Punct, ";");
        s->step = parse_assign(false);
        expect(TokKind::Punct, ")");
        s->body = parse_statement();
        if (!s->init || !s->step || !s->body) return nullptr;
        return s;
    }

    ExprPtr mk_expr(Expr::Kind k) {
        auto e = std::make_unique<Expr>();
        e->kind = k;
        e->loc = cur().loc;
        return e;
    }

    ExprPtr parse_ref() {
        auto e = mk_expr(Expr::Kind::Ref);
        if (cur().kind != TokKind::Identifier) {
            diags_.error(cur().loc, "expected identifier, found '" + cur().lexeme + "'");
            e->name = "<error>";
            return e;
        }
        e->name = cur().lexeme;
        advance();
        while (accept(TokKind::Punct, "[")) {
            e->args.push_back(parse_expr());
            expect(TokKind::Punct, "]");
        }
        return e;
    }

    // precedence table, lowest binds loosest
    int binary_prec(const std::string& op) {
        if (op == "|") return 1;
        if (op == "^") return 2;
        if (op == "&") return 3;
        if (op == "==" || op == "!=") return 4;
        if (op == "<" || op == ">" || op == "<=" || op == ">=") return 5;
        if (op == "<<" || op == ">>") return 6;
        if (op == "+" || op == "-") return 7;
        if (op == "*") return 8;
        return -1;
    }

    ExprPtr parse_expr() { return parse_ternary(); }

    ExprPtr parse_ternary() {
        ExprPtr c = parse_binary(1);
        if (cur().is(TokKind::Operator, "?")) {
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Ternary;
            e->loc = cur().loc;
            advance();
            ExprPtr t = parse_expr();
            expect(TokKind::Operator, ":");
            ExprPtr f = parse_ternary();
            e->args.push_back(std::move(c));
            e->args.push_back(std::move(t));
            e->args.push_back(std::move(f));
            return e;
        }
        return c;
    }

    ExprPtr parse_binary(int min_prec) {
        ExprPtr lhs = parse_unary();
        while (cur().kind == TokKind::Operator) {
            int prec = binary_prec(cur().lexeme);
            if (prec < min_prec) break;
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Binary;
            e->op = cur().lexeme;
            e->loc = cur().loc;
            advance();
            ExprPtr rhs = parse_binary(prec + 1);
            e->args.push_back(std::move(lhs));
            e->args.push_back(std::move(rhs));
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (cur().is(TokKind::Operator, "!") || cur().is(TokKind::Operator, "~") ||
            cur().is(TokKind::Operator, "-")) {
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Unary;
            e->op = cur().lexeme;
            e->loc = cur().loc;
            advance();
            e->args.push_back(parse_unary());
            return e;
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        if (cur().kind == TokKind::IntLiteral) {
            auto e = mk_expr(Expr::Kind::IntLit);
            e->int_val = cur().int_val;
            advance();
            return e;
        }
        if (accept(TokKind::Punct, "(")) {
            ExprPtr e = parse_expr();
            expect(TokKind::Punct, ")");
            return e;
        }
        if (cur().kind == TokKind::Identifier) {
            if (peek().is(TokKind::Punct, "(")) {
                auto e = mk_expr(Expr::Kind::Call);
                e->name = cur().lexeme;
                advance();
                advance(); // (
                if (!cur().is(TokKind::Punct, ")")) {
                    do {
                        e->args.push_back(parse_expr());
                    } while (accept(TokKind::Punct, ","));
                }
                expect(TokKind::Punct, ")");
                return e;
            }
            return parse_ref();
        }
        diags_.error(cur().loc, "expected expression, found '" +
                                    (cur().kind == TokKind::Eof ? "<eof>" : cur().lexeme) + "'");
        auto e = mk_expr(Expr::Kind::IntLit);
        e->int_val = 0;
        advance();
        return e;
    }
};

} // namespace

std::unique_ptr<Program> parse(const std::vector<Token>& tokens, DiagList& diags) {
    Parser p(tokens, diags);
    return p.run();
}

std::unique_ptr<Program> parse_source(const std::string& source, DiagList& diags) {
    auto toks = tokenize(source, diags);
    return parse(toks, diags);
}

} // namespace algsat
