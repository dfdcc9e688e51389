// matrix.hpp — small dense matrices over exact scalars (mpz / mpq).
#pragma once

#include "latq/arith.hpp"

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace latq {

template <class T>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
    Mat(std::initializer_list<std::initializer_list<T>> init) {
        rows = static_cast<int>(init.size());
        cols = rows ? static_cast<int>(init.begin()->size()) : 0;
        a.reserve(static_cast<size_t>(rows) * cols);
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("ragged matrix initializer");
            for (const auto& x : row) a.push_back(x);
        }
    }

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const Mat& o) const { return !(*this == o); }
};

using MatZ = Mat<Int>;
using MatQ = Mat<Rat>;
using VecZ = std::vector<Int>;

template <class T>
Mat<T> mul(const Mat<T>& x, const Mat<T>& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix product shape mismatch");
    Mat<T> r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const T& v = x(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
        }
    return r;
}

template <class T>
Mat<T> transpose(const Mat<T>& m) {
    Mat<T> r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(j, i) = m(i, j);
    return r;
}

template <class T>
std::vector<T> mul_vec(const Mat<T>& m, const std::vector<T>& v) {
    if (m.cols != static_cast<int>(v.size())) throw std::invalid_argument("matrix-vector shape mismatch");
    std::vector<T> r(m.rows, T(0));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
    return r;
}

inline MatQ to_rational(const MatZ& m) {
    MatQ r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = Rat(m.a[i]);
    return r;
}

// Exact inverse over Q by Gauss-Jordan; throws if singular.
inline MatQ inverse(const MatQ& m) {
    if (m.rows != m.cols) throw std::invalid_argument("inverse of non-square matrix");
    int n = m.rows;
    MatQ w = m, inv = MatQ::identity(n);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (w(i, c) != 0) { piv = i; break; }
        if (piv < 0) throw std::domain_error("matrix is singular");
        if (piv != c)
            for (int j = 0; j < n; ++j) { std::swap(w(piv, j), w(c, j)); std::swap(inv(piv, j), inv(c, j)); }
        Rat d = w(c, c);
        for (int j = 0; j < n; ++j) { w(c, j) /= d; inv(c, j) /= d; }
        for (int i = 0; i < n; ++i) {
            if (i == c || w(i, c) == 0) continue;
            Rat f = w(i, c);
            for (int j = 0; j < n; ++j) { w(i, j) -= f * w(c, j); inv(i, j) -= f * inv(c, j); }
        }
    }
    return inv;
}

// Fraction-free determinant (Bareiss) with row pivoting.
inline Int det_bareiss(MatZ m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
    int n = m.rows;
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

template <class T>
std::string to_string(const Mat<T>& m) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < m.rows; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < m.cols; ++j) {
            if (j) os << ", ";
            os << m(i, j);
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace latq
