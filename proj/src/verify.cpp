#include "algsat/verify.hpp"

#include <chrono>
#include <sstream>

#include "algsat/diag.hpp"

namespace algsat {

std::string VerifyReport::summary() const {
    std::ostringstream ss;
    ss << trials << " trials, " << failures.size() << " failures (seed " << seed << ", "
       << seconds << " s)";
    if (!failures.empty()) {
        const VerifyFailure& f = failures.front();
        ss << "; first failure at trial " << f.trial;
        if (!f.note.empty()) ss << ": " << f.note;
    }
    return ss.str();
}

VerifyReport verify_forward(const Program& program, const TemplateCnf& tpl, size_t trials,
                            uint64_t seed, const ExecOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep;
    rep.trials = trials;
    rep.seed = seed;
    BitRng rng(seed);

    // one engine, incremental assumption propagation per trial
    CdclSolver solver;
    solver.ensure_vars(tpl.var_count);
    bool ok = true;
    for (const Clause& c : tpl.clauses)
        if (!solver.add_clause(c)) { ok = false; break; }

    size_t n = tpl.input_vars.size();
    for (size_t t = 0; t < trials; ++t) {
        BitVec x = rng.next_bits(n);
        BitVec expect = run_concrete(program, x, opts);

        VerifyFailure fail;
        fail.trial = t;
        fail.input = x;
        fail.expected = expect;

        if (!ok) {
            fail.note = "template is unsatisfiable at level 0";
            rep.failures.push_back(std::move(fail));
            continue;
        }
        std::vector<Lit> assumps;
        assumps.reserve(n);
        for (size_t i = 0; i < n; ++i) assumps.push_back(make_lit(tpl.input_vars[i].second, x[i] != 0));
        std::vector<int8_t> values;
        if (!solver.propagate_only(assumps, &values)) {
            fail.note = "unit propagation conflict under input assumptions";
            rep.failures.push_back(std::move(fail));
            continue;
        }
        BitVec got(tpl.output_vars.size(), 0);
        bool forced = true;
        for (size_t i = 0; i < tpl.output_vars.size(); ++i) {
            int8_t v = values[tpl.output_vars[i].second];
            if (v < 0) {
                forced = false;
                fail.note = "output " + tpl.output_vars[i].first + " not forced by propagation";
                break;
            }
            got[i] = uint8_t(v);
        }
        if (!forced) {
            rep.failures.push_back(std::move(fail));
            continue;
        }
        if (got != expect) {
            fail.observed = got;
            fail.note = "forced outputs differ from oracle";
            rep.failures.push_back(std::move(fail));
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

VerifyReport verify_inversion(const Program& program, std::shared_ptr<const TemplateCnf> tpl,
                              size_t trials, uint64_t seed, const SolveConfig& cfg,
                              const ExecOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep;
    rep.trials = trials;
    rep.seed = seed;
    BitRng rng(seed);
    size_t n = tpl->input_vars.size();

    for (size_t t = 0; t < trials; ++t) {
        BitVec x = rng.next_bits(n);
        BitVec y = run_concrete(program, x, opts);
        Instance inst = inversion_instance(tpl, y);
        SolveResult res = solve_instance(inst, cfg);

        VerifyFailure fail;
        fail.trial = t;
        fail.input = x;
        fail.expected = y;
        if (res.status == Status::Unknown) {
            fail.note = "solver gave up: " + res.unknown_reason;
            rep.failures.push_back(std::move(fail));
            continue;
        }
        if (res.status == Status::Unsat) {
            fail.note = "inversion instance unsatisfiable for in-range output";
            rep.failures.push_back(std::move(fail));
            continue;
        }
        BitVec xhat = decode_inputs(*tpl, res.model);
        BitVec yhat = run_concrete(program, xhat, opts);
        if (yhat != y) {
            fail.observed = yhat;
            fail.note = "extracted preimage does not regenerate the output";
            rep.failures.push_back(std::move(fail));
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<BitVec> brute_force_invert(const Program& program, const BitVec& y,
                                       const ExecOptions& opts) {
    size_t n = program_input_width(program);
    if (n > 24) throw Error("brute_force_invert: input width " + std::to_string(n) + " > 24");
    std::vector<BitVec> preimages;
    uint64_t space = uint64_t(1) << n;
    BitVec x(n, 0);
    for (uint64_t m = 0; m < space; ++m) {
        for (size_t j = 0; j < n; ++j) x[j] = (m >> j) & 1;
        if (run_concrete(program, x, opts) == y) preimages.push_back(x);
    }
    return preimages;
}

} // namespace algsat
