#pragma once

#include <memory>
#include <string>

#include "algsat/corpus.hpp"
#include "algsat/sema.hpp"

namespace testutil {

inline std::string corpus_dir() { return ALGSAT_CORPUS_DIR; }
inline std::string cli_path() { return ALGSAT_CLI_PATH; }

// analyze or abort with diagnostics printed
std::unique_ptr<algsat::Program> must_analyze(const std::string& source);

algsat::Corpus& corpus();

} // namespace testutil
