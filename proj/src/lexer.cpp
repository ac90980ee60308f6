#include "algsat/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace algsat {

namespace {

const std::unordered_set<std::string> kKeywords = {
    "bit", "int", "void", "if", "else", "for", "return", "__in", "__out",
};

// longest-match first
const std::array<const char*, 19> kOperators = {
    "<<", ">>", "<=", ">=", "==", "!=",
    "&", "|", "^", "!", "~", "+", "-", "*", "<", ">", "=", "?", ":",
};

} // namespace

std::vector<Token> tokenize(const std::string& src, DiagList& diags) {
    std::vector<Token> out;
    size_t i = 0;
    int line = 1, col = 1;

    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') { ++line; col = 1; }
            else ++col;
            ++i;
        }
    };

    while (i < src.size()) {
        char c = src[i];
        SourceLoc loc{line, col};
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(1); continue; }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            advance(2);
            bool closed = false;
            while (i < src.size()) {
                if (src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/') {
                    advance(2);
                    closed = true;
                    break;
                }
                advance(1);
            }
            if (!closed) diags.error(loc, "unterminated block comment");
            continue;
        }
        if (std::isalpha(uint8_t(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() && (std::isalnum(uint8_t(src[j])) || src[j] == '_')) ++j;
            std::string word = src.substr(i, j - i);
            out.push_back({kKeywords.count(word) ? TokKind::Keyword : TokKind::Identifier,
                           word, loc});
            advance(j - i);
            continue;
        }
        if (std::isdigit(uint8_t(c))) {
            size_t j = i;
            int base = 10;
            if (c == '0' && j + 1 < src.size() && (src[j + 1] == 'x' || src[j + 1] == 'X')) {
                base = 16;
                j += 2;
                while (j < src.size() && std::isxdigit(uint8_t(src[j]))) ++j;
            } else {
                while (j < src.size() && std::isdigit(uint8_t(src[j]))) ++j;
            }
            std::string text = src.substr(i, j - i);
            Token tok{TokKind::IntLiteral, text, loc};
            try {
                tok.int_val = std::stoll(text, nullptr, base);
            } catch (...) {
                diags.error(loc, "integer literal out of range: " + text);
                tok.kind = TokKind::Error;
            }
            out.push_back(tok);
            advance(j - i);
            continue;
        }
        if (c == ';' || c == ',' || c == '(' || c == ')' || c == '{' || c == '}' ||
            c == '[' || c == ']') {
            out.push_back({TokKind::Punct, std::string(1, c), loc});
            advance(1);
            continue;
        }
        bool matched = false;
        for (const char* op : kOperators) {
            size_t len = std::string(op).size();
            if (src.compare(i, len, op) == 0) {
                out.push_back({TokKind::Operator, op, loc});
                advance(len);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        diags.error(loc, std::string("unknown character '") + c + "'");
        out.push_back({TokKind::Error, std::string(1, c), loc});
        advance(1);
    }
    out.push_back({TokKind::Eof, "", {line, col}});
    return out;
}

} // namespace algsat
