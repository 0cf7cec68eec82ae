#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cbnorm/complex_matrix.hpp"

namespace cbnorm {

/// Equality-form semidefinite program over a block-diagonal Hermitian
/// variable X = diag(X_1, ..., X_B), X_b PSD:
///
///     maximize    sum_b <C_b, X_b>
///     subject to  sum_b <A_{i,b}, X_b> = rhs_i,   i = 1..m
///
/// The dual minimizes b^T y subject to sum_i y_i A_i - C >= 0, so the primal
/// value alpha never exceeds the dual value beta.
struct SdpProblem {
    std::vector<int> block_dims;
    std::vector<HermitianMatrix> objective;

    struct Constraint {
        std::vector<HermitianMatrix> blocks;
        double rhs = 0.0;
    };
    std::vector<Constraint> constraints;
    std::string name;

    void validate() const;
};

enum class SdpStatus { optimal, max_iterations, infeasible_suspected };

struct SdpSolution {
    std::vector<HermitianMatrix> x;  // primal blocks
    std::vector<HermitianMatrix> s;  // dual slack blocks (solver iterate)
    std::vector<double> y;           // one multiplier per constraint of the input problem
    double alpha = 0.0;              // primal objective at x
    double beta = 0.0;               // dual objective at y
    double gap = 0.0;                // |beta - alpha|
    SdpStatus status = SdpStatus::max_iterations;
    int iterations = 0;
};

/// Residuals recomputed from the problem data alone; nothing here reuses
/// solver internals.
struct Certificate {
    double primal_residual = 0.0;  // ||b - A(x)||_2
    double dual_min_eig = 0.0;     // min eigenvalue of sum_i y_i A_i - C over blocks
    double duality_gap = 0.0;      // |beta - alpha|
    bool weak_duality_ok = false;  // alpha <= beta + 1e-9 * (1 + |alpha| + |beta|)
    double alpha_lower = 0.0;      // primal objective: lower bound when x feasible
    double beta_upper = 0.0;       // dual objective: upper bound when y feasible
};

struct SolveOptions {
    double tol = 1e-8;
    int max_iter = 200;
    std::function<void(const std::string&)> trace;  // one line per iteration when set
};

/// [[Re H, -Im H], [Im H, Re H]]: real symmetric, eigenvalues of H with
/// doubled multiplicity.
HermitianMatrix realify(const HermitianMatrix& h);

/// Drops linearly dependent constraint rows (consistent right-hand sides)
/// detected by Gram pivoting at threshold 1e-10; throws on an inconsistent
/// dependent row.
SdpProblem presolve(const SdpProblem& p);

/// Infeasible-start primal-dual path-following solver (Mehrotra
/// predictor-corrector, step fraction 0.98 to the boundary). Deterministic:
/// identical inputs and options give identical iterate sequences.
SdpSolution solve(const SdpProblem& p, const SolveOptions& opt = {});
SdpSolution solve(const SdpProblem& p, double tol, int max_iter = 200);

Certificate check(const SdpProblem& p, const SdpSolution& s);

struct FeasibilityReport {
    double primal_margin = 0.0;  // best exhibited min eigenvalue of a feasible X
    bool primal_found = false;
    double dual_margin = 0.0;  // best exhibited min eigenvalue of Xi*(y) - C
    bool dual_found = false;
};

/// Attempts to exhibit strictly feasible primal and dual points. The primal
/// side solves the auxiliary program max t s.t. A(X' + tI) = b, X' >= 0,
/// t >= 0; the dual side scores candidate multiplier vectors (callers may
/// pass known-good hints).
FeasibilityReport strict_feasibility_probe(const SdpProblem& p,
                                           const std::vector<std::vector<double>>& dual_hints = {});

}  // namespace cbnorm
