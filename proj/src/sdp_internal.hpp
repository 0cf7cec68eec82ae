#pragma once

#include <vector>

#include "cbnorm/sdp.hpp"

namespace cbnorm::detail {

struct Presolved {
    SdpProblem reduced;
    std::vector<int> kept;  // indices into the original constraint list
};

Presolved presolve_tracked(const SdpProblem& p);

// Core interior-point loop. Expects a validated problem with no dependent
// constraint rows; y in the result is sized to p.constraints.
SdpSolution solve_reduced(const SdpProblem& p, const SolveOptions& opt);

}  // namespace cbnorm::detail
