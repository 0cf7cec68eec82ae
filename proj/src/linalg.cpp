#include "cbnorm/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace cbnorm {

namespace {

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form, followed by a diagonal phase similarity that makes the subdiagonal
// real and nonnegative. On return diag/offdiag hold the tridiagonal data and
// q (when requested) the accumulated unitary with H = q T q*.
void tridiagonalize(ComplexMatrix a, bool want_vectors, std::vector<double>& diag,
                    std::vector<double>& offdiag, ComplexMatrix& q) {
    const int n = a.rows();
    if (want_vectors) q = ComplexMatrix::identity(n);

    std::vector<Complex> v(n), p(n), w(n);
    for (int k = 0; k + 2 < n; ++k) {
        const int base = k + 1;
        const int len = n - base;

        double xnorm2 = 0.0;
        for (int i = 0; i < len; ++i) {
            v[i] = a(base + i, k);
            xnorm2 += std::norm(v[i]);
        }
        double tail2 = xnorm2 - std::norm(v[0]);
        if (xnorm2 == 0.0 || tail2 == 0.0) continue;  // column already tridiagonal here

        const double xnorm = std::sqrt(xnorm2);
        const Complex alpha0 = v[0];
        const double a0abs = std::abs(alpha0);
        const Complex phase = (a0abs > 0.0) ? alpha0 / a0abs : Complex(1.0, 0.0);
        const Complex beta = -phase * xnorm;
        v[0] = alpha0 - beta;

        double vnorm2 = 0.0;
        for (int i = 0; i < len; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        const double tau = 2.0 / vnorm2;

        // p = tau * B v on the trailing block, then the rank-two update
        // B <- B - w v* - v w* with w = p - (tau/2)(v* p) v.
        for (int i = 0; i < len; ++i) {
            Complex s = 0.0;
            for (int j = 0; j < len; ++j) s += a(base + i, base + j) * v[j];
            p[i] = tau * s;
        }
        Complex vp = 0.0;
        for (int i = 0; i < len; ++i) vp += std::conj(v[i]) * p[i];
        const Complex kappa = 0.5 * tau * vp;
        for (int i = 0; i < len; ++i) w[i] = p[i] - kappa * v[i];
        for (int i = 0; i < len; ++i) {
            for (int j = 0; j < len; ++j) {
                a(base + i, base + j) -=
                    w[i] * std::conj(v[j]) + v[i] * std::conj(w[j]);
            }
        }

        a(base, k) = beta;
        a(k, base) = std::conj(beta);
        for (int i = 1; i < len; ++i) {
            a(base + i, k) = 0.0;
            a(k, base + i) = 0.0;
        }

        if (want_vectors) {
            // q <- q (I - tau v v*) acting on columns base..n.
            for (int r = 0; r < n; ++r) {
                Complex s = 0.0;
                for (int c = 0; c < len; ++c) s += q(r, base + c) * v[c];
                s *= tau;
                for (int c = 0; c < len; ++c) q(r, base + c) -= s * std::conj(v[c]);
            }
        }
    }

    diag.assign(n, 0.0);
    offdiag.assign(n, 0.0);
    diag[0] = a(0, 0).real();
    Complex phi = 1.0;
    for (int j = 1; j < n; ++j) {
        diag[j] = a(j, j).real();
        const Complex e = a(j, j - 1);
        const double eabs = std::abs(e);
        offdiag[j - 1] = eabs;
        if (eabs > 0.0) phi *= e / eabs;
        if (want_vectors && (phi != Complex(1.0, 0.0))) {
            for (int r = 0; r < n; ++r) q(r, j) *= phi;
        }
    }
}

// Implicit-shift QL sweeps on a real symmetric tridiagonal matrix, rotations
// accumulated into the complex columns of q when present.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, ComplexMatrix* q, int n) {
    if (n == 1) return;
    const double eps = DBL_EPSILON;
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            while (m < n - 1) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
                ++m;
            }
            if (m == l) break;
            if (++iter > 50) {
                throw DecompositionError("tridiagonal QL failed to converge", std::abs(e[l]));
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (q) {
                    for (int t = 0; t < n; ++t) {
                        const Complex f2 = (*q)(t, i + 1);
                        (*q)(t, i + 1) = s * (*q)(t, i) + c * f2;
                        (*q)(t, i) = c * (*q)(t, i) - s * f2;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

EigResult eig_core(const HermitianMatrix& h, bool want_vectors) {
    const int n = h.dim();
    std::vector<double> d, e;
    ComplexMatrix q;
    tridiagonalize(h.mat(), want_vectors, d, e, q);
    tridiag_ql(d, e, want_vectors ? &q : nullptr, n);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });

    EigResult res;
    res.values.resize(n);
    for (int i = 0; i < n; ++i) res.values[i] = d[order[i]];
    if (want_vectors) {
        res.vectors = ComplexMatrix(n, n);
        for (int c = 0; c < n; ++c) {
            for (int r = 0; r < n; ++r) res.vectors(r, c) = q(r, order[c]);
        }
    }
    return res;
}

}  // namespace

EigResult herm_eig(const HermitianMatrix& h) { return eig_core(h, true); }

std::vector<double> herm_eigenvalues(const HermitianMatrix& h) {
    return eig_core(h, false).values;
}

HermitianMatrix sqrtm_psd(const HermitianMatrix& h, double psd_tol) {
    EigResult eig = herm_eig(h);
    const int n = h.dim();
    if (!eig.values.empty() && eig.values.front() < -psd_tol) {
        throw NotPsdError("matrix is not positive semidefinite: min eigenvalue " +
                              std::to_string(eig.values.front()),
                          eig.values.front());
    }
    ComplexMatrix r(n, n);
    for (int k = 0; k < n; ++k) {
        const double s = std::sqrt(std::max(eig.values[k], 0.0));
        if (s == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const Complex vis = s * eig.vectors(i, k);
            for (int j = 0; j < n; ++j) r(i, j) += vis * std::conj(eig.vectors(j, k));
        }
    }
    return HermitianMatrix(r, 1e-10 * (1.0 + h.mat().max_abs()));
}

std::vector<double> singular_values(const ComplexMatrix& a) {
    const ComplexMatrix gram = a.adjoint() * a;
    std::vector<double> lam = herm_eigenvalues(HermitianMatrix(gram, 1e-10 * (1.0 + gram.max_abs())));
    std::vector<double> sv(lam.size());
    for (size_t i = 0; i < lam.size(); ++i) {
        sv[lam.size() - 1 - i] = std::sqrt(std::max(lam[i], 0.0));
    }
    return sv;
}

double trace_norm(const ComplexMatrix& a) {
    std::vector<double> sv = singular_values(a);
    double t = 0.0;
    for (double s : sv) t += s;
    return t;
}

double spectral_norm(const ComplexMatrix& a) {
    std::vector<double> sv = singular_values(a);
    return sv.empty() ? 0.0 : sv.front();
}

double frobenius_norm(const ComplexMatrix& a) {
    double t = 0.0;
    for (const Complex& z : a.data()) t += std::norm(z);
    return std::sqrt(t);
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int d1, int d2, Keep keep) {
    if (!m.is_square()) throw ShapeError("partial_trace: matrix must be square");
    if (d1 <= 0 || d2 <= 0 || m.rows() != d1 * d2) {
        throw ShapeError("partial_trace: size " + std::to_string(m.rows()) +
                         " is not d1*d2 = " + std::to_string(d1) + "*" + std::to_string(d2));
    }
    if (keep == Keep::first) {
        ComplexMatrix r(d1, d1);
        for (int i = 0; i < d1; ++i)
            for (int j = 0; j < d1; ++j) {
                Complex t = 0.0;
                for (int b = 0; b < d2; ++b) t += m(i * d2 + b, j * d2 + b);
                r(i, j) = t;
            }
        return r;
    }
    ComplexMatrix r(d2, d2);
    for (int a = 0; a < d2; ++a)
        for (int b = 0; b < d2; ++b) {
            Complex t = 0.0;
            for (int i = 0; i < d1; ++i) t += m(i * d2 + a, i * d2 + b);
            r(a, b) = t;
        }
    return r;
}

ComplexMatrix vec(const ComplexMatrix& a) {
    ComplexMatrix v(a.rows() * a.cols(), 1);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) v(i * a.cols() + j, 0) = a(i, j);
    return v;
}

ComplexMatrix unvec(const ComplexMatrix& v, int rows, int cols) {
    if (v.cols() != 1 || v.rows() != rows * cols) {
        throw ShapeError("unvec: expected column vector of length " + std::to_string(rows * cols));
    }
    ComplexMatrix a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = v(i * cols + j, 0);
    return a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0, 0.0)) continue;
            for (int p = 0; p < b.rows(); ++p)
                for (int q = 0; q < b.cols(); ++q)
                    r(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return r;
}

double fidelity_direct(const HermitianMatrix& p, const HermitianMatrix& q, double psd_tol) {
    if (p.dim() != q.dim()) throw ShapeError("fidelity_direct: dimension mismatch");
    return trace_norm(sqrtm_psd(p, psd_tol).mat() * sqrtm_psd(q, psd_tol).mat());
}

std::vector<HermitianMatrix> hermitian_basis(int dim) {
    if (dim <= 0) throw ShapeError("hermitian_basis: dim must be positive");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<HermitianMatrix> basis;
    basis.reserve(static_cast<size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            if (i == j) {
                ComplexMatrix m(dim, dim);
                m(i, i) = 1.0;
                basis.emplace_back(m);
            } else {
                ComplexMatrix s(dim, dim);
                s(i, j) = inv_sqrt2;
                s(j, i) = inv_sqrt2;
                basis.emplace_back(s);
                ComplexMatrix t(dim, dim);
                t(i, j) = Complex(0.0, inv_sqrt2);
                t(j, i) = Complex(0.0, -inv_sqrt2);
                basis.emplace_back(t);
            }
        }
    }
    return basis;
}

std::vector<double> basis_coefficients(const HermitianMatrix& h) {
    const int dim = h.dim();
    const double sqrt2 = std::sqrt(2.0);
    std::vector<double> c;
    c.reserve(static_cast<size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            if (i == j) {
                c.push_back(h(i, i).real());
            } else {
                c.push_back(sqrt2 * h(i, j).real());
                c.push_back(sqrt2 * h(i, j).imag());
            }
        }
    }
    return c;
}

HermitianMatrix basis_expand(const std::vector<double>& coeffs, int dim) {
    if (static_cast<int>(coeffs.size()) != dim * dim) {
        throw ShapeError("basis_expand: expected " + std::to_string(dim * dim) + " coefficients");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ComplexMatrix m(dim, dim);
    size_t t = 0;
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            if (i == j) {
                m(i, i) = coeffs[t++];
            } else {
                const double re = coeffs[t++] * inv_sqrt2;
                const double im = coeffs[t++] * inv_sqrt2;
                m(i, j) = Complex(re, im);
                m(j, i) = Complex(re, -im);
            }
        }
    }
    return HermitianMatrix(m);
}

}  // namespace cbnorm
