#include "algsat/ast.hpp"

#include <sstream>

namespace algsat {

const char* base_type_name(BaseType t) {
    switch (t) {
        case BaseType::Bit: return "bit";
        case BaseType::Int: return "int";
        case BaseType::Void: return "void";
    }
    return "?";
}

namespace {

// Printing uses full parenthesization of compound operands, so operator
// precedence never changes across a round trip.
void print_operand(const Expr& e, std::ostream& os) {
    bool atom = e.kind == Expr::Kind::IntLit || e.kind == Expr::Kind::Ref ||
                e.kind == Expr::Kind::Call;
    if (!atom) os << '(';
    print_expr(e, os);
    if (!atom) os << ')';
}

void print_decl(const VarDecl& d, std::ostream& os, bool with_type) {
    if (with_type) {
        if (d.attr == Attr::In) os << "__in ";
        if (d.attr == Attr::Out) os << "__out ";
        os << base_type_name(d.base) << ' ';
    }
    os << d.name;
    for (int64_t dim : d.dims) {
        os << '[';
        if (dim >= 0) os << dim;
        os << ']';
    }
    if (d.init) {
        os << " = ";
        print_expr(*d.init, os);
    }
}

void print_stmt(const Stmt& s, std::ostream& os, int indent) {
    std::string pad(size_t(indent) * 4, ' ');
    switch (s.kind) {
        case Stmt::Kind::DeclStmt:
            os << pad;
            for (size_t i = 0; i < s.decls.size(); ++i) {
                print_decl(*s.decls[i], os, i == 0);
                if (i + 1 < s.decls.size()) os << ", ";
            }
            os << ";\n";
            break;
        case Stmt::Kind::Assign:
            os << pad;
            print_expr(*s.target, os);
            os << " = ";
            print_expr(*s.value, os);
            os << ";\n";
            break;
        case Stmt::Kind::CallStmt:
            os << pad;
            print_expr(*s.value, os);
            os << ";\n";
            break;
        case Stmt::Kind::Return:
            os << pad << "return";
            if (s.value) {
                os << ' ';
                print_expr(*s.value, os);
            }
            os << ";\n";
            break;
        case Stmt::Kind::If:
            os << pad << "if (";
            print_expr(*s.cond, os);
            os << ")\n";
            print_stmt(*s.then_branch, os, indent + (s.then_branch->kind != Stmt::Kind::Block));
            if (s.else_branch) {
                os << pad << "else\n";
                print_stmt(*s.else_branch, os, indent + (s.else_branch->kind != Stmt::Kind::Block));
            }
            break;
        case Stmt::Kind::For: {
            os << pad << "for (";
            std::ostringstream head;
            print_stmt(*s.init, head, 0);
            std::string init_text = head.str();
            // strip trailing ";\n" pieces for the header
            while (!init_text.empty() && (init_text.back() == '\n' || init_text.back() == ';'))
                init_text.pop_back();
            os << init_text << "; ";
            print_expr(*s.cond, os);
            os << "; ";
            std::ostringstream step;
            print_stmt(*s.step, step, 0);
            std::string step_text = step.str();
            while (!step_text.empty() && (step_text.back() == '\n' || step_text.back() == ';'))
                step_text.pop_back();
            os << step_text << ")\n";
            print_stmt(*s.body, os, indent + (s.body->kind != Stmt::Kind::Block));
            break;
        }
        case Stmt::Kind::Block:
            os << pad << "{\n";
            for (const auto& sub : s.stmts) print_stmt(*sub, os, indent + 1);
            os << pad << "}\n";
            break;
    }
}

} // namespace

void print_expr(const Expr& e, std::ostream& os) {
    switch (e.kind) {
        case Expr::Kind::IntLit:
            os << e.int_val;
            break;
        case Expr::Kind::Ref:
            os << e.name;
            for (const auto& idx : e.args) {
                os << '[';
                print_expr(*idx, os);
                os << ']';
            }
            break;
        case Expr::Kind::Unary:
            os << e.op;
            print_operand(*e.args[0], os);
            break;
        case Expr::Kind::Binary:
            print_operand(*e.args[0], os);
            os << ' ' << e.op << ' ';
            print_operand(*e.args[1], os);
            break;
        case Expr::Kind::Ternary:
            print_operand(*e.args[0], os);
            os << " ? ";
            print_operand(*e.args[1], os);
            os << " : ";
            print_operand(*e.args[2], os);
            break;
        case Expr::Kind::Call:
            os << e.name << '(';
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) os << ", ";
                print_expr(*e.args[i], os);
            }
            os << ')';
            break;
    }
}

void print_program(const Program& p, std::ostream& os) {
    for (auto [is_func, idx] : p.decl_order) {
        if (is_func) {
            const FuncDecl& f = *p.functions[size_t(idx)];
            os << base_type_name(f.ret) << ' ' << f.name << '(';
            for (size_t i = 0; i < f.params.size(); ++i) {
                if (i) os << ", ";
                print_decl(*f.params[i], os, true);
            }
            os << ")\n";
            print_stmt(*f.body, os, 0);
        } else {
            print_decl(*p.globals[size_t(idx)], os, true);
            os << ";\n";
        }
    }
}

std::string print_program(const Program& p) {
    std::ostringstream ss;
    print_program(p, ss);
    return ss.str();
}

} // namespace algsat
