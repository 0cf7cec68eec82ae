#pragma once

#include <vector>

#include "cbnorm/complex_matrix.hpp"

namespace cbnorm {

class NotPsdError : public Error {
public:
    NotPsdError(const std::string& msg, double min_eig) : Error(msg), min_eig_(min_eig) {}
    double min_eig() const { return min_eig_; }

private:
    double min_eig_;
};

class DecompositionError : public Error {
public:
    DecompositionError(const std::string& msg, double residual) : Error(msg), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

struct EigResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // unitary, column k pairs with values[k]
};

/// Full eigendecomposition of a Hermitian matrix: Householder reduction to
/// real symmetric tridiagonal form followed by implicit-shift QL sweeps.
/// Reconstruction V diag(w) V* matches the input to ~1e-14 * ||H||.
EigResult herm_eig(const HermitianMatrix& h);

/// Eigenvalues only (ascending); skips eigenvector accumulation.
std::vector<double> herm_eigenvalues(const HermitianMatrix& h);

/// Principal PSD square root. Eigenvalues in [-psd_tol, 0) are clamped to 0;
/// anything below -psd_tol raises NotPsdError carrying the offending eigenvalue.
HermitianMatrix sqrtm_psd(const HermitianMatrix& h, double psd_tol = kDefaultPsdTol);

/// Singular values, descending, as square roots of eigenvalues of A*A clamped at 0.
std::vector<double> singular_values(const ComplexMatrix& a);

double trace_norm(const ComplexMatrix& a);
double spectral_norm(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);

enum class Keep { first, second };

/// Partial trace of an operator on a bipartite space with composite index
/// (i, j) = i * d2 + j (first factor major). Keep::first traces out the
/// second factor and returns a d1 x d1 matrix; Keep::second the reverse.
ComplexMatrix partial_trace(const ComplexMatrix& m, int d1, int d2, Keep keep);

/// Row-major flattening: vec(A)[i * cols + j] = A(i, j), so vec(E_ij) = e_i (x) e_j.
ComplexMatrix vec(const ComplexMatrix& a);
ComplexMatrix unvec(const ComplexMatrix& v, int rows, int cols);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// F(P, Q) = || sqrt(P) sqrt(Q) ||_1 via sqrtm_psd and trace_norm.
double fidelity_direct(const HermitianMatrix& p, const HermitianMatrix& q,
                       double psd_tol = kDefaultPsdTol);

/// Orthonormal Hermitian basis of dim x dim matrices, enumerated as: for
/// i <= j in row-major pair order, E_ii for the diagonal, then
/// (E_ij + E_ji)/sqrt(2) followed by i(E_ij - E_ji)/sqrt(2) for i < j.
/// The ordering is a fixed contract; dual-variable packing depends on it.
std::vector<HermitianMatrix> hermitian_basis(int dim);

/// Coefficients of h in hermitian_basis(dim): exact expansion, basis_expand
/// inverts it.
std::vector<double> basis_coefficients(const HermitianMatrix& h);
HermitianMatrix basis_expand(const std::vector<double>& coeffs, int dim);

}  // namespace cbnorm
