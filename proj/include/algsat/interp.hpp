#pragma once

#include "algsat/ast.hpp"
#include "algsat/bits.hpp"

namespace algsat {

struct ExecOptions {
    bool     zero_init = false;  // unwritten non-__in bit reads as 0 instead of erroring
    bool     fuse      = true;   // symbolic execution: fuse statement expressions into tables
    int      fuse_max  = 8;      // max distinct leaves for a fused table (2..16)
    uint64_t max_steps = 1ull << 28; // runaway-loop guard (statements executed)
};

// Reference interpreter: runs a checked program on a concrete input vector
// and returns the __out bits in declaration order. Control-flow rules match
// symbolic execution (loops unrolled by concrete int state, calls inlined,
// arrays passed by reference), but evaluation is plain bit arithmetic with
// no formula construction involved.
BitVec run_concrete(const Program& program, const BitVec& input,
                    const ExecOptions& opts = {});

// Widths derived from __in/__out declarations.
size_t program_input_width(const Program& program);
size_t program_output_width(const Program& program);

} // namespace algsat
