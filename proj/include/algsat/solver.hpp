#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "algsat/cnf.hpp"

namespace algsat {

struct SolveConfig {
    double   time_limit     = 0;   // seconds; 0 = unlimited
    uint64_t conflict_limit = 0;   // 0 = unlimited
    uint64_t seed           = 0;
    // Branching priority for input variables. 1 = off. Values >= 2 make
    // unassigned inputs strictly outrank other variables in the decision
    // order (so a fresh solve decides all inputs first); values in (1,2)
    // only give inputs an activity head start.
    double input_priority = 1.0;
    double var_decay      = 0.95;
    double clause_decay   = 0.999;
    bool   phase_saving   = true;
    int    decision_log   = 0;     // record the first N decision variables
    bool   verify_model   = true;
    std::atomic<bool>* stop = nullptr; // cooperative cancellation
};

enum class Status { Sat, Unsat, Unknown };
const char* status_name(Status s);

struct SolveResult {
    Status      status = Status::Unknown;
    std::string unknown_reason;
    // model[v] for v in 1..var_count when SAT (0/1)
    std::vector<uint8_t> model;
    uint64_t conflicts = 0, decisions = 0, propagations = 0;
    double   seconds = 0;
    std::vector<Var> decision_head;
};

// Embedded CDCL engine: two-watched-literal propagation, first-UIP learning
// with clause minimization, VSIDS decisions (ties to the lowest index),
// Luby restarts, activity-based learnt-clause reduction, incremental
// assumption solving.
class CdclSolver {
public:
    CdclSolver();
    ~CdclSolver();
    CdclSolver(const CdclSolver&) = delete;
    CdclSolver& operator=(const CdclSolver&) = delete;

    void ensure_vars(Var n);
    Var  var_count() const;
    // false if the clause is already falsified at level 0 (solver unusable)
    bool add_clause(const Clause& external);
    void mark_input(Var v);

    SolveResult solve(const std::vector<Lit>& assumptions, const SolveConfig& cfg);

    // Fixpoint of unit propagation under assumptions, no decisions. Returns
    // false on conflict. When `values` is non-null it receives one entry per
    // variable 1..n: -1 unassigned, 0 false, 1 true.
    bool propagate_only(const std::vector<Lit>& assumptions, std::vector<int8_t>* values);

private:
    struct Impl;
    Impl* impl_;
};

// Convenience couplers for Instance (defined in instance.hpp).
struct Instance;
CdclSolver* make_solver(const Instance& inst);
SolveResult solve_instance(const Instance& inst, const SolveConfig& cfg);
bool propagate_instance(const Instance& inst, const std::vector<Lit>& extra_assumptions,
                        std::vector<int8_t>* values);

} // namespace algsat
