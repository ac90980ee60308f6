#pragma once

#include <string>

#include "algsat/instance.hpp"
#include "algsat/solver.hpp"

namespace algsat {

// Runs `command <dimacs-file>` (through /bin/sh), parses SAT-competition
// output (`s SATISFIABLE` / `s UNSATISFIABLE`, `v` value lines), enforces the
// configured time limit by killing the process, and verifies any model
// against the instance before reporting SAT. A model that fails verification
// is a hard error (solver mismatch); a missing status line yields
// UNKNOWN(external-failure).
SolveResult solve_external(const Instance& inst, const std::string& command,
                           const SolveConfig& cfg);

} // namespace algsat
