#pragma once

#include <vector>

#include "cbnorm/channels.hpp"
#include "cbnorm/complex_matrix.hpp"

namespace cbnorm {

/// Raised when an oracle is handed an input outside the regime where its
/// shortcut formula is valid.
class WrongRegimeError : public Error {
  public:
    WrongRegimeError(const std::string& what, double min_eig)
        : Error(what), min_eig_(min_eig) {}
    double min_eig() const { return min_eig_; }

  private:
    double min_eig_ = 0.0;
};

/// Completely bounded trace norm of a completely positive map: the largest
/// eigenvalue of the Choi matrix partially traced over the output space.
/// Demands a PSD (in particular Hermitian) Choi matrix and throws
/// WrongRegimeError otherwise.
double cp_diamond_oracle(const ChoiMatrix& c);

struct AscentConfig {
    int restarts = 32;
    int max_steps = 500;
    double step_tol = 1e-10;
    unsigned long long seed = 0;
};

struct AscentResult {
    double value = 0.0;   // best trace norm found; a lower bound on the cb trace norm
    ComplexMatrix a, b;   // unit-Frobenius witnesses: value = ||(1 (x) A^T) J (1 (x) conj(B))||_1
    int best_restart = 0;
    int steps = 0;        // steps taken by the winning restart
};

/// Projected gradient ascent of ||(Phi (x) 1)(vec A vec B*)||_1 over unit
/// witnesses. Restart 0 starts from the maximally entangled direction
/// (A = B = I/sqrt(n)); later restarts are seeded randomly but
/// deterministically from cfg.seed.
AscentResult rank_one_ascent(const ChoiMatrix& c, const AscentConfig& cfg = {});

/// sum_i sqrt(p_i q_i): fidelity of a pair of diagonal (hence commuting)
/// operators given by their diagonals. Throws on negative entries.
double commuting_fidelity_oracle(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace cbnorm
