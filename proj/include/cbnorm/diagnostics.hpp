#pragma once

#include <string>
#include <vector>

#include "cbnorm/channels.hpp"
#include "cbnorm/programs.hpp"
#include "cbnorm/sdp.hpp"

namespace cbnorm {

/// A priori solvability summary for the compiled norm programs: a certified
/// interiority margin for the dual, a radius bound on primal optima, and a
/// digest of the inputs for reproducibility logs.
struct SolvabilityReport {
    double epsilon = 0.0;
    double r_bound = 0.0;
    ProgramKind program = ProgramKind::maxfid_stinespring;
    std::string inputs_digest;
    bool degenerate_zero_map = false;
};

SolvabilityReport solvability_report(const StinespringPair& s);
SolvabilityReport solvability_report(const ChoiMatrix& c);

/// Empirical interiority check: perturbs the dual slack of y by `samples`
/// random block-diagonal Hermitian directions of spectral norm epsilon and
/// demands every perturbed slack stay PSD up to -1e-9. Deterministic in
/// seed.
bool verify_interior_point(const SdpProblem& p, const std::vector<double>& dual_y,
                           double epsilon, int samples = 64, unsigned long long seed = 0);

}  // namespace cbnorm
