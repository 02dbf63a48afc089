#pragma once

#include "flowlab/trace.hpp"

#include <string>
#include <vector>

namespace flowlab {

struct CheckViolation {
    Rat t;
    std::string check;   // stable identifier of the violated property
    std::string detail;  // witness state dump
};

struct CheckOptions {
    // The provable partial/full bound for the learning policy carries a +1
    // for the mandatory bootstrap partial: delta_p <= (sigma+2) delta_f + 1.
    // Setting this drops the +1, a strictly stronger form that a lone pending
    // partial already violates; it exists so the acceptance suite can report
    // against the stronger form explicitly.
    bool dl_strict_partial_bound = false;
    std::size_t max_violations = 16;
};

// Replays a trace and verifies every invariant the policies and the engine
// promise, at every event time: machine exclusivity, non-idling, exact
// completions, mark/morph legality, one partial per class, the alternation
// discipline and its consequences (zigzag), sigma-hat monotonicity and bounds
// (dl), partial/full count bounds, and (given opt, for zigzag traces)
// far-behind sparsification size and gap. opt may be null; it must be an
// SRPT trace over the same realized instance otherwise.
std::vector<CheckViolation> check_trace(const Trace& alg, const Trace* opt,
                                        const CheckOptions& opts = {});

}  // namespace flowlab
