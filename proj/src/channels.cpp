#include "cbnorm/channels.hpp"

#include <cmath>

#include "cbnorm/linalg.hpp"

namespace cbnorm {

StinespringPair::StinespringPair(ComplexMatrix a0_in, ComplexMatrix a1_in, int m_in, int k_in)
    : a0(std::move(a0_in)), a1(std::move(a1_in)), m(m_in), k(k_in) {
    if (m <= 0 || k <= 0) throw ShapeError("StinespringPair: m and k must be positive");
    if (a0.rows() != a1.rows() || a0.cols() != a1.cols()) {
        throw ShapeError("StinespringPair: A0 and A1 shapes differ");
    }
    if (a0.rows() != m * k) {
        throw ShapeError("StinespringPair: expected " + std::to_string(m * k) + " rows, got " +
                         std::to_string(a0.rows()));
    }
    n = a0.cols();
    a0.require_finite("StinespringPair A0");
    a1.require_finite("StinespringPair A1");
}

ComplexMatrix StinespringPair::slice(int b, int z) const {
    const ComplexMatrix& a = (b == 0) ? a0 : a1;
    ComplexMatrix s(m, n);
    for (int row = 0; row < m; ++row)
        for (int col = 0; col < n; ++col) s(row, col) = a(row * k + z, col);
    return s;
}

ChoiMatrix::ChoiMatrix(ComplexMatrix j_in, int n_in, int m_in)
    : j(std::move(j_in)), n(n_in), m(m_in) {
    if (n <= 0 || m <= 0) throw ShapeError("ChoiMatrix: n and m must be positive");
    if (!j.is_square() || j.rows() != m * n) {
        throw ShapeError("ChoiMatrix: expected square " + std::to_string(m * n) + "x" +
                         std::to_string(m * n) + " matrix");
    }
    j.require_finite("ChoiMatrix");
}

int ChannelRep::input_dim() const {
    return is_stinespring() ? stinespring().n : choi().n;
}

int ChannelRep::output_dim() const {
    return is_stinespring() ? stinespring().m : choi().m;
}

ChoiMatrix choi_from_stinespring(const StinespringPair& s) {
    const int n = s.n, m = s.m, k = s.k;
    ComplexMatrix j(m * n, m * n);
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i)
            for (int b = 0; b < m; ++b)
                for (int jj = 0; jj < n; ++jj) {
                    Complex t = 0.0;
                    for (int z = 0; z < k; ++z) {
                        t += s.a0(a * k + z, i) * std::conj(s.a1(b * k + z, jj));
                    }
                    j(a * n + i, b * n + jj) = t;
                }
    return ChoiMatrix(std::move(j), n, m);
}

StinespringPair stinespring_from_choi(const ChoiMatrix& c, double rank_tol) {
    const int n = c.n, m = c.m;
    const int dim = m * n;

    // SVD of J through the Hermitian embedding [[0, J], [J*, 0]], whose
    // eigenvalues are +-sigma.  Going through J*J instead would square the
    // noise floor and let ~1e-8-relative garbage modes past the cutoff.
    ComplexMatrix emb(2 * dim, 2 * dim);
    for (int r = 0; r < dim; ++r)
        for (int s = 0; s < dim; ++s) {
            emb(r, dim + s) = c.j(r, s);
            emb(dim + s, r) = std::conj(c.j(r, s));
        }
    EigResult eig = herm_eig(HermitianMatrix(emb));
    const double sigma_max = std::max(eig.values.back(), 0.0);
    const double cutoff = rank_tol * sigma_max;

    // descending order; each eigenvector (u; v) holds unit singular vectors
    // scaled by 1/sqrt(2), so J = sum over kept of 2 sigma u_emb v_emb*
    std::vector<int> kept;
    for (int t = 2 * dim - 1; t >= 0; --t) {
        if (eig.values[t] > cutoff && eig.values[t] > 0.0) kept.push_back(t);
    }
    const int k = std::max<int>(1, static_cast<int>(kept.size()));

    ComplexMatrix a0(m * k, n), a1(m * k, n);
    for (size_t zi = 0; zi < kept.size(); ++zi) {
        const int t = kept[zi];
        const double root = std::sqrt(2.0 * eig.values[t]);
        for (int a = 0; a < m; ++a)
            for (int i = 0; i < n; ++i) {
                a0(a * k + static_cast<int>(zi), i) = root * eig.vectors(a * n + i, t);
                a1(a * k + static_cast<int>(zi), i) = root * eig.vectors(dim + a * n + i, t);
            }
    }
    return StinespringPair(std::move(a0), std::move(a1), m, k);
}

ComplexMatrix apply(const ChannelRep& rep, const ComplexMatrix& x) {
    const int n = rep.input_dim();
    if (!x.is_square() || x.rows() != n) {
        throw ShapeError("apply: input must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (rep.is_stinespring()) {
        const StinespringPair& s = rep.stinespring();
        const ComplexMatrix big = s.a0 * x * s.a1.adjoint();
        return partial_trace(big, s.m, s.k, Keep::first);
    }
    const ChoiMatrix& c = rep.choi();
    const ComplexMatrix lifted = kron(ComplexMatrix::identity(c.m), x.transpose());
    return partial_trace(c.j * lifted, c.m, c.n, Keep::first);
}

ChannelRep adjoint(const ChannelRep& rep) {
    if (rep.is_stinespring()) {
        const StinespringPair& s = rep.stinespring();
        // Adjoint slices are the conjugate transposes of the originals:
        // Phi*(Y) = sum_z B_{0,z}* Y B_{1,z}.
        ComplexMatrix b0(s.n * s.k, s.m), b1(s.n * s.k, s.m);
        for (int z = 0; z < s.k; ++z) {
            const ComplexMatrix s0 = s.slice(0, z).adjoint();
            const ComplexMatrix s1 = s.slice(1, z).adjoint();
            for (int i = 0; i < s.n; ++i)
                for (int a = 0; a < s.m; ++a) {
                    b0(i * s.k + z, a) = s0(i, a);
                    b1(i * s.k + z, a) = s1(i, a);
                }
        }
        return ChannelRep(StinespringPair(std::move(b0), std::move(b1), s.n, s.k));
    }
    const ChoiMatrix& c = rep.choi();
    // J(Phi*)[(i,a),(j,b)] = conj(J(Phi)[(a,i),(b,j)]).
    ComplexMatrix jadj(c.n * c.m, c.n * c.m);
    for (int i = 0; i < c.n; ++i)
        for (int a = 0; a < c.m; ++a)
            for (int jj = 0; jj < c.n; ++jj)
                for (int b = 0; b < c.m; ++b) {
                    jadj(i * c.m + a, jj * c.m + b) =
                        std::conj(c.j(a * c.n + i, b * c.n + jj));
                }
    return ChannelRep(ChoiMatrix(std::move(jadj), c.m, c.n));
}

std::pair<ChannelRep, ChannelRep> reduced_maps(const StinespringPair& s) {
    // Psi_b(X) = Tr_Y(A_b X A_b*): reorder the output factors so the traced
    // space sits second, then reuse the Stinespring form with environment Y.
    auto swap_factors = [&](const ComplexMatrix& a) {
        ComplexMatrix r(s.k * s.m, s.n);
        for (int y = 0; y < s.m; ++y)
            for (int z = 0; z < s.k; ++z)
                for (int col = 0; col < s.n; ++col) r(z * s.m + y, col) = a(y * s.k + z, col);
        return r;
    };
    const ComplexMatrix t0 = swap_factors(s.a0);
    const ComplexMatrix t1 = swap_factors(s.a1);
    ChannelRep psi0(StinespringPair(t0, t0, s.k, s.m));
    ChannelRep psi1(StinespringPair(t1, t1, s.k, s.m));
    return {std::move(psi0), std::move(psi1)};
}

}  // namespace cbnorm
