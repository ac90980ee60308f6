#pragma once

#include <memory>

#include "algsat/ast.hpp"
#include "algsat/lexer.hpp"

namespace algsat {

// Builds a Program from a token stream. Syntax errors are reported through
// `diags` and recovery continues at the next statement, so several errors
// can be reported in one pass. The returned Program is only meaningful when
// diags has no errors.
std::unique_ptr<Program> parse(const std::vector<Token>& tokens, DiagList& diags);

// Convenience: tokenize + parse.
std::unique_ptr<Program> parse_source(const std::string& source, DiagList& diags);

} // namespace algsat
