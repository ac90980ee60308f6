#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "algsat/ast.hpp"
#include "algsat/verify.hpp"

namespace algsat {

struct CorpusEntry {
    std::string name;
    std::string alg_path; // absolute
    size_t input_width = 0;
    size_t output_width = 0;
    std::vector<std::pair<std::string, std::string>> vectors; // hex input -> hex output
    // default attack profile
    int         guessing_bits = 0;
    std::string decomposition_file;              // absolute, may be empty
    std::vector<std::string> condition_files;    // absolute
    std::string notes;
};

// Registry over the on-disk corpus layout
//   <dir>/<name>/<name>.alg, vectors.txt, profile.txt, conditions/*.txt
class Corpus {
public:
    explicit Corpus(std::string dir);

    const std::string& dir() const { return dir_; }
    std::vector<std::string> names() const;
    const CorpusEntry& get(const std::string& name) const;

    std::unique_ptr<Program> load_program(const std::string& name) const;

    // Checks every entry's reference vectors through run_concrete.
    VerifyReport validate_all() const;
    VerifyReport validate(const std::string& name) const;

private:
    std::string dir_;
    std::map<std::string, CorpusEntry> entries_;
};

// Default directory: $ALGSAT_CORPUS if set, else "corpus".
std::string default_corpus_dir();

} // namespace algsat
