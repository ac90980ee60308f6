#pragma once

#include "algsat/ast.hpp"

namespace algsat {

// Builds the scope tree, binds every identifier use to its declaration
// (innermost scope wins, globals visible everywhere), and reports
// undeclared identifiers / duplicate declarations.
void resolve(Program& program, DiagList& diags);

// Semantic rules on a resolved program: `main` exists, __in/__out only on
// global bit declarations, expression typing (bit vs int), array shapes,
// call signatures, acyclic call graph, int-only control flow positions.
void check(Program& program, DiagList& diags);

// tokenize + parse + resolve + check; returns nullptr if any pass errored.
std::unique_ptr<Program> analyze_source(const std::string& source, DiagList& diags);
std::unique_ptr<Program> analyze_file(const std::string& path, DiagList& diags);

// Reads a whole file or throws Error.
std::string read_text_file(const std::string& path);

} // namespace algsat
