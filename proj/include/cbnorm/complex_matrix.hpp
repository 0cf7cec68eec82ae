#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbnorm {

using Complex = std::complex<double>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows <= 0 || cols <= 0) {
            throw ShapeError("matrix dimensions must be positive");
        }
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static ComplexMatrix zeros(int rows, int cols) { return ComplexMatrix(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return a_.empty(); }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const Complex& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    const std::vector<Complex>& data() const { return a_; }
    std::vector<Complex>& data() { return a_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }
    ComplexMatrix transpose() const {
        ComplexMatrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    ComplexMatrix conjugate() const {
        ComplexMatrix r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = std::conj(a_[i]);
        return r;
    }

    Complex trace() const {
        if (!is_square()) throw ShapeError("trace of non-square matrix");
        Complex t = 0.0;
        for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    bool all_finite() const {
        for (const Complex& z : a_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
        return true;
    }
    void require_finite(const std::string& what) const {
        if (!all_finite()) throw Error(what + ": non-finite entry");
    }

    ComplexMatrix block(int r0, int c0, int h, int w) const {
        if (r0 < 0 || c0 < 0 || r0 + h > rows_ || c0 + w > cols_) {
            throw ShapeError("block extends outside matrix");
        }
        ComplexMatrix b(h, w);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }
    void place(int r0, int c0, const ComplexMatrix& sub) {
        if (r0 < 0 || c0 < 0 || r0 + sub.rows() > rows_ || c0 + sub.cols() > cols_) {
            throw ShapeError("placed block extends outside matrix");
        }
        for (int i = 0; i < sub.rows(); ++i)
            for (int j = 0; j < sub.cols(); ++j) (*this)(r0 + i, c0 + j) = sub(i, j);
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> a_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
inline ComplexMatrix operator*(double s, const ComplexMatrix& a) { return Complex(s, 0.0) * a; }
inline ComplexMatrix operator*(const ComplexMatrix& a, Complex s) { return s * a; }
inline ComplexMatrix operator*(const ComplexMatrix& a, double s) { return Complex(s, 0.0) * a; }
ComplexMatrix operator-(const ComplexMatrix& a);

/// Tr(A* B), the Hilbert-Schmidt inner product.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
inline double max_abs(const ComplexMatrix& a) { return a.max_abs(); }

inline constexpr double kDefaultHermTol = 1e-12;
inline constexpr double kDefaultPsdTol = 1e-9;

/// Square complex matrix validated Hermitian at construction; the stored
/// form is exactly (M + M*)/2.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const ComplexMatrix& m, double herm_tol = kDefaultHermTol);

    static HermitianMatrix identity(int n) { return HermitianMatrix(ComplexMatrix::identity(n)); }
    static HermitianMatrix zero(int n) { return HermitianMatrix(ComplexMatrix::zeros(n, n)); }
    static HermitianMatrix diagonal(const std::vector<double>& d);

    int dim() const { return m_.rows(); }
    const ComplexMatrix& mat() const { return m_; }
    const Complex& operator()(int r, int c) const { return m_(r, c); }

    double trace_real() const { return m_.trace().real(); }

private:
    ComplexMatrix m_;
};

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix operator*(double s, const HermitianMatrix& a);

/// Re Tr(A* B); exact inner product for Hermitian arguments.
double hs_inner_real(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace cbnorm
