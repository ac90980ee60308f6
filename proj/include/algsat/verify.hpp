#pragma once

#include <functional>

#include "algsat/instance.hpp"
#include "algsat/interp.hpp"
#include "algsat/solver.hpp"

namespace algsat {

struct VerifyFailure {
    size_t      trial;
    BitVec      input;
    BitVec      expected;
    BitVec      observed;
    std::string note;
};

struct VerifyReport {
    size_t trials = 0;
    uint64_t seed = 0;
    std::vector<VerifyFailure> failures;
    double seconds = 0;

    bool passed() const { return failures.empty(); }
    std::string summary() const;
};

// Forward check: for each seeded random input x, propagate the template under
// input assumptions and compare the forced output values with run_concrete.
VerifyReport verify_forward(const Program& program, const TemplateCnf& tpl, size_t trials,
                            uint64_t seed, const ExecOptions& opts = {});

// Inversion round trip: y := run_concrete(x); solve the inversion instance;
// check the extracted preimage regenerates y. UNSAT for an in-range y or a
// bad preimage counts as a failure; solver UNKNOWN is recorded separately.
VerifyReport verify_inversion(const Program& program, std::shared_ptr<const TemplateCnf> tpl,
                              size_t trials, uint64_t seed, const SolveConfig& cfg = {},
                              const ExecOptions& opts = {});

// Exhaustive preimage scan (input width <= 24).
std::vector<BitVec> brute_force_invert(const Program& program, const BitVec& y,
                                       const ExecOptions& opts = {});

} // namespace algsat
