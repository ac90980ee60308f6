#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "algsat/diag.hpp"

namespace algsat {

enum class TokKind { Identifier, Keyword, IntLiteral, Operator, Punct, Error, Eof };

struct Token {
    TokKind     kind;
    std::string lexeme;
    SourceLoc   loc;
    int64_t     int_val = 0; // IntLiteral only

    bool is(TokKind k, const char* text) const { return kind == k && lexeme == text; }
    bool is_kw(const char* kw) const { return is(TokKind::Keyword, kw); }
};

// Exhaustive scan: comments stripped, unknown characters become Error tokens
// with their location; scanning never stops early. The final token is Eof.
std::vector<Token> tokenize(const std::string& source, DiagList& diags);

} // namespace algsat
