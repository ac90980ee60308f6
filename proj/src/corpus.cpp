#include "algsat/corpus.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "algsat/diag.hpp"
#include "algsat/sema.hpp"

namespace fs = std::filesystem;

namespace algsat {

std::string default_corpus_dir() {
    if (const char* env = std::getenv("ALGSAT_CORPUS")) return env;
    return "corpus";
}

namespace {

struct Registered {
    const char* name;
    size_t n, m;
};

// the shipped suite; widths double-checked against the programs on load
const Registered kRegistry[] = {
    {"and2", 2, 1},       {"maj3", 3, 1},      {"lfsr16", 16, 32},
    {"geffe96", 96, 200}, {"bivium", 177, 200}, {"trivium", 288, 300},
    {"grain", 160, 160},  {"a5_1", 64, 114},   {"md4", 640, 128},
    {"md5", 640, 128},
};

} // namespace

Corpus::Corpus(std::string dir) : dir_(std::move(dir)) {
    for (const Registered& r : kRegistry) {
        CorpusEntry e;
        e.name = r.name;
        e.input_width = r.n;
        e.output_width = r.m;
        fs::path base = fs::path(dir_) / r.name;
        e.alg_path = (base / (std::string(r.name) + ".alg")).string();

        fs::path vec = base / "vectors.txt";
        if (fs::exists(vec)) {
            std::ifstream in(vec);
            std::string line;
            while (std::getline(in, line)) {
                auto hash = line.find('#');
                if (hash != std::string::npos) line.resize(hash);
                std::istringstream ss(line);
                std::string a, b;
                if (ss >> a >> b) e.vectors.push_back({a, b});
            }
        }
        fs::path prof = base / "profile.txt";
        if (fs::exists(prof)) {
            std::ifstream in(prof);
            std::string line;
            while (std::getline(in, line)) {
                auto hash = line.find('#');
                if (hash != std::string::npos) line.resize(hash);
                auto eq = line.find('=');
                if (eq == std::string::npos) continue;
                std::string key = line.substr(0, eq);
                std::string val = line.substr(eq + 1);
                auto trim = [](std::string& s) {
                    while (!s.empty() && std::isspace(uint8_t(s.front()))) s.erase(s.begin());
                    while (!s.empty() && std::isspace(uint8_t(s.back()))) s.pop_back();
                };
                trim(key);
                trim(val);
                if (key == "guessing_bits") e.guessing_bits = std::stoi(val);
                else if (key == "decomposition") e.decomposition_file = (base / val).string();
                else if (key == "conditions") e.condition_files.push_back((base / val).string());
                else if (key == "notes") e.notes = val;
            }
        }
        entries_[e.name] = std::move(e);
    }
}

std::vector<std::string> Corpus::names() const {
    std::vector<std::string> out;
    for (auto& [k, v] : entries_) {
        (void)v;
        out.push_back(k);
    }
    return out;
}

const CorpusEntry& Corpus::get(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
        std::string known;
        for (auto& [k, v] : entries_) {
            (void)v;
            known += known.empty() ? k : ", " + k;
        }
        throw Error("unknown corpus entry '" + name + "' (known: " + known + ")");
    }
    return it->second;
}

std::unique_ptr<Program> Corpus::load_program(const std::string& name) const {
    const CorpusEntry& e = get(name);
    DiagList diags;
    auto prog = analyze_file(e.alg_path, diags);
    if (!prog)
        throw Error("corpus program " + e.alg_path + " failed analysis:\n" +
                    diags.to_string(e.alg_path));
    size_t n = program_input_width(*prog), m = program_output_width(*prog);
    if (n != e.input_width || m != e.output_width)
        throw Error("corpus program " + e.name + " has widths " + std::to_string(n) + "->" +
                    std::to_string(m) + ", registry says " + std::to_string(e.input_width) + "->" +
                    std::to_string(e.output_width));
    return prog;
}

VerifyReport Corpus::validate(const std::string& name) const {
    auto t0 = std::chrono::steady_clock::now();
    const CorpusEntry& e = get(name);
    auto prog = load_program(name);
    VerifyReport rep;
    for (size_t i = 0; i < e.vectors.size(); ++i) {
        ++rep.trials;
        auto& [hin, hout] = e.vectors[i];
        VerifyFailure fail;
        fail.trial = i;
        try {
            BitVec x = hex_to_bits(hin, e.input_width);
            BitVec want = hex_to_bits(hout, e.output_width);
            BitVec got = run_concrete(*prog, x);
            if (got != want) {
                fail.input = x;
                fail.expected = want;
                fail.observed = got;
                fail.note = e.name + " vector " + std::to_string(i) + " mismatch";
                rep.failures.push_back(std::move(fail));
            }
        } catch (const Error& err) {
            fail.note = e.name + " vector " + std::to_string(i) + ": " + err.what();
            rep.failures.push_back(std::move(fail));
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

VerifyReport Corpus::validate_all() const {
    VerifyReport rep;
    for (auto& [name, e] : entries_) {
        (void)e;
        VerifyReport one = validate(name);
        rep.trials += one.trials;
        rep.seconds += one.seconds;
        for (auto& f : one.failures) rep.failures.push_back(f);
    }
    return rep;
}

} // namespace algsat
