#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ftb/dual.hpp"
#include "ftb/errors.hpp"

namespace ftb {

// Dense row-major matrix over a generic scalar. Dimensions here are tiny
// (n <= 3, 2n <= 6), so plain Gauss-Jordan with standard-part pivoting is
// both adequate and works for nested dual scalars, which rules out the
// usual fixed-scalar linear algebra packages.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), d_(size_t(rows) * cols, constant_of<T>(0.0)) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = constant_of<T>(1.0);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return d_[size_t(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return d_[size_t(i) * cols_ + j]; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> d_;
};

template <class T>
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int d0, int d1, int d2)
        : d0_(d0), d1_(d1), d2_(d2), d_(size_t(d0) * d1 * d2, constant_of<T>(0.0)) {}

    int dim0() const { return d0_; }
    int dim1() const { return d1_; }
    int dim2() const { return d2_; }

    T& operator()(int i, int j, int k) { return d_[(size_t(i) * d1_ + j) * d2_ + k]; }
    const T& operator()(int i, int j, int k) const { return d_[(size_t(i) * d1_ + j) * d2_ + k]; }

private:
    int d0_ = 0, d1_ = 0, d2_ = 0;
    std::vector<T> d_;
};

template <class T>
std::vector<T> mat_vec(const Matrix<T>& m, const std::vector<T>& v) {
    assert(m.cols() == int(v.size()));
    std::vector<T> r(m.rows(), constant_of<T>(0.0));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r[i] += m(i, j) * v[j];
    return r;
}

template <class T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b) {
    assert(a.cols() == b.rows());
    Matrix<T> r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k)
            for (int j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
    return r;
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
    assert(a.size() == b.size());
    T s = constant_of<T>(0.0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Solve A X = B in place via Gauss-Jordan with partial pivoting on the
// standard part. Throws DegenerateMetricError on (numerically) singular A.
template <class T>
Matrix<T> solve(Matrix<T> a, Matrix<T> b) {
    const int n = a.rows();
    assert(a.cols() == n && b.rows() == n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(standard_part(a(col, col)));
        for (int r = col + 1; r < n; ++r) {
            double cand = std::abs(standard_part(a(r, col)));
            if (cand > best) { best = cand; piv = r; }
        }
        if (!(best > 1e-14)) throw DegenerateMetricError("solve: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (int j = 0; j < b.cols(); ++j) std::swap(b(col, j), b(piv, j));
        }
        T inv = constant_of<T>(1.0) / a(col, col);
        for (int j = 0; j < n; ++j) a(col, j) = a(col, j) * inv;
        for (int j = 0; j < b.cols(); ++j) b(col, j) = b(col, j) * inv;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            T f = a(r, col);
            for (int j = 0; j < n; ++j) a(r, j) -= f * a(col, j);
            for (int j = 0; j < b.cols(); ++j) b(r, j) -= f * b(col, j);
        }
    }
    return b;
}

template <class T>
std::vector<T> solve_vec(const Matrix<T>& a, const std::vector<T>& rhs) {
    Matrix<T> b(int(rhs.size()), 1);
    for (size_t i = 0; i < rhs.size(); ++i) b(int(i), 0) = rhs[i];
    Matrix<T> x = solve(a, std::move(b));
    std::vector<T> r(rhs.size());
    for (size_t i = 0; i < rhs.size(); ++i) r[i] = x(int(i), 0);
    return r;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
    return solve(a, Matrix<T>::identity(a.rows()));
}

// Cholesky-style positive definiteness test (double only).
// pivot_tol guards against accepting near-singular Hessians.
inline bool is_positive_definite(const Matrix<double>& a, double pivot_tol = 1e-10) {
    const int n = a.rows();
    Matrix<double> l(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > pivot_tol)) return false;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return true;
}

// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double sym_eig_min(Matrix<double> a) {
    const int n = a.rows();
    if (n == 1) return a(0, 0);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    double mn = a(0, 0);
    for (int i = 1; i < n; ++i) mn = std::min(mn, a(i, i));
    return mn;
}

} // namespace ftb
