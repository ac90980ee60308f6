#include "support/util.hpp"

#include <iostream>

namespace testutil {

std::unique_ptr<algsat::Program> must_analyze(const std::string& source) {
    algsat::DiagList diags;
    auto prog = algsat::analyze_source(source, diags);
    if (!prog) {
        std::cerr << diags.to_string("<test>");
        throw algsat::Error("test program failed analysis");
    }
    return prog;
}

algsat::Corpus& corpus() {
    static algsat::Corpus c(corpus_dir());
    return c;
}

} // namespace testutil
