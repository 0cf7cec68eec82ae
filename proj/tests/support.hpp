#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cbnorm/complex_matrix.hpp"
#include "cbnorm/linalg.hpp"

// Test-side generators. The RNG is written against raw mt19937_64 words (no
// standard-library distributions) so sequences are identical on every
// platform; it is deliberately a separate implementation from anything the
// library uses internally.
namespace testsupport {

using cbnorm::Complex;
using cbnorm::ComplexMatrix;
using cbnorm::HermitianMatrix;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double kTwoPi = 6.283185307179586476925286766559;
        spare_ = r * std::sin(kTwoPi * u2);
        have_spare_ = true;
        return r * std::cos(kTwoPi * u2);
    }

    Complex complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline ComplexMatrix random_matrix(Rng& rng, int rows, int cols) {
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
    return m;
}

inline HermitianMatrix random_hermitian(Rng& rng, int n) {
    ComplexMatrix g = random_matrix(rng, n, n);
    ComplexMatrix h = 0.5 * (g + g.adjoint());
    return HermitianMatrix(std::move(h));
}

inline HermitianMatrix random_psd(Rng& rng, int n) {
    ComplexMatrix g = random_matrix(rng, n, n);
    ComplexMatrix p = g * g.adjoint();
    return HermitianMatrix(std::move(p), 1e-10 * (1.0 + cbnorm::max_abs(p)));
}

inline HermitianMatrix random_density(Rng& rng, int n) {
    HermitianMatrix p = random_psd(rng, n);
    return (1.0 / p.trace_real()) * p;
}

// Modified Gram-Schmidt on gaussian columns; two projection passes keep the
// result unitary to working precision.
inline ComplexMatrix random_unitary(Rng& rng, int n) {
    ComplexMatrix g = random_matrix(rng, n, n);
    ComplexMatrix u(n, n);
    for (int j = 0; j < n; ++j) {
        std::vector<Complex> v(n);
        for (int i = 0; i < n; ++i) v[i] = g(i, j);
        for (int pass = 0; pass < 2; ++pass)
            for (int prev = 0; prev < j; ++prev) {
                Complex proj = 0.0;
                for (int i = 0; i < n; ++i) proj += std::conj(u(i, prev)) * v[i];
                for (int i = 0; i < n; ++i) v[i] -= proj * u(i, prev);
            }
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) norm2 += std::norm(v[i]);
        if (norm2 < 1e-24) {
            for (int i = 0; i < n; ++i) v[i] = (i == j) ? 1.0 : 0.0;
            norm2 = 1.0;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < n; ++i) u(i, j) = v[i] * inv;
    }
    return u;
}

}  // namespace testsupport
