#include "algsat/diag.hpp"

#include <sstream>

namespace algsat {

void DiagList::print(std::ostream& os, const std::string& file) const {
    for (const auto& d : items_) {
        os << file << ':' << d.loc.line << ':' << d.loc.col << ": "
           << (d.severity == Severity::Error ? "error" : "warning") << ": "
           << d.message << '\n';
    }
}

std::string DiagList::to_string(const std::string& file) const {
    std::ostringstream ss;
    print(ss, file);
    return ss.str();
}

} // namespace algsat
