#include "cbnorm/complex_matrix.hpp"

#include <algorithm>

namespace cbnorm {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ")");
    }
}

}  // namespace

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "add");
    ComplexMatrix r(a.rows(), a.cols());
    for (size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] + b.data()[i];
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "subtract");
    ComplexMatrix r(a.rows(), a.cols());
    for (size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] - b.data()[i];
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a) {
    ComplexMatrix r(a.rows(), a.cols());
    for (size_t i = 0; i < r.data().size(); ++i) r.data()[i] = -a.data()[i];
    return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("multiply: inner dimensions differ (" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + ")");
    }
    ComplexMatrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    ComplexMatrix r(a.rows(), a.cols());
    for (size_t i = 0; i < r.data().size(); ++i) r.data()[i] = s * a.data()[i];
    return r;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "hs_inner");
    Complex t = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i) t += std::conj(a.data()[i]) * b.data()[i];
    return t;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    return max_abs_diff(a, b) <= tol;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double herm_tol) : m_(1, 1) {
    if (!m.is_square()) throw ShapeError("Hermitian matrix must be square");
    m.require_finite("Hermitian matrix");
    double dev = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = i; j < m.cols(); ++j) {
            dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    if (dev > herm_tol) {
        throw Error("matrix is not Hermitian: max deviation " + std::to_string(dev) +
                    " exceeds tolerance " + std::to_string(herm_tol));
    }
    ComplexMatrix sym(m.rows(), m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        sym(i, i) = Complex(m(i, i).real(), 0.0);
        for (int j = i + 1; j < m.cols(); ++j) {
            Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            sym(i, j) = v;
            sym(j, i) = std::conj(v);
        }
    }
    m_ = sym;
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
    ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return HermitianMatrix(m);
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.mat() + b.mat());
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.mat() - b.mat());
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
    return HermitianMatrix(s * a.mat());
}

double hs_inner_real(const HermitianMatrix& a, const HermitianMatrix& b) {
    return hs_inner(a.mat(), b.mat()).real();
}

}  // namespace cbnorm
