#pragma once

#include "bssram/program.hpp"

namespace bssram {

/// Pushdown evaluator for prefix Boolean formulas over bool-symbols
/// (signature (15;;2), r1 the identity).
///
/// The input u_1..u_m is copied above the work area and read from u_m down to
/// u_1, with Lambda written just below u_1. Values are pushed on a stack that
/// starts with # and grows upward. The program halts with output (1) exactly
/// when the input is a well-formed prefix formula whose value is 1; every other
/// input ends in a self-loop.
///
/// Z1 read symbol, Z2 stack top, Z3 state, Z4 value to store, Z5..Z19 the
/// constants c1..c15.
/// I1 = m, I3 read pointer, I4 stack pointer, I5 and I6 decrement scratch,
/// I7 Lambda position, I8 = 4, I9 = 1, I10 = 2.
Program build_boolean_pda();

} // namespace bssram
