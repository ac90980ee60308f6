#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace algsat {

struct SourceLoc {
    int line = 0;   // 1-based, 0 = unknown
    int col  = 0;

    bool known() const { return line > 0; }
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity    severity = Severity::Error;
    std::string message;
    SourceLoc   loc;
};

// Accumulates diagnostics across frontend passes. An error prevents
// downstream translation; warnings do not.
class DiagList {
public:
    void error(SourceLoc loc, std::string msg) {
        items_.push_back({Severity::Error, std::move(msg), loc});
    }
    void warning(SourceLoc loc, std::string msg) {
        items_.push_back({Severity::Warning, std::move(msg), loc});
    }

    bool has_errors() const {
        for (const auto& d : items_)
            if (d.severity == Severity::Error) return true;
        return false;
    }
    bool empty() const { return items_.empty(); }
    size_t size() const { return items_.size(); }

    const std::vector<Diagnostic>& items() const { return items_; }

    // `file:line:col: severity: message` per diagnostic.
    void print(std::ostream& os, const std::string& file) const;
    std::string to_string(const std::string& file) const;

private:
    std::vector<Diagnostic> items_;
};

// Internal/runtime failure (I/O, misuse of an API, execution errors).
class Error : public std::exception {
public:
    explicit Error(std::string msg) : msg_(std::move(msg)) {}
    const char* what() const noexcept override { return msg_.c_str(); }

private:
    std::string msg_;
};

} // namespace algsat
