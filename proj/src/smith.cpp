// smith.cpp — Smith normal form and derived integer linear algebra.
#include "latq/smith.hpp"

#include <cstdlib>
#include <stdexcept>

namespace latq {

namespace {

struct Worker {
    MatZ m, u, uinv, v;

    explicit Worker(const MatZ& m0)
        : m(m0),
          u(MatZ::identity(m0.rows)),
          uinv(MatZ::identity(m0.rows)),
          v(MatZ::identity(m0.cols)) {}

    // Row op m[i] -= q*m[t] keeps u*m0*v = m when u gets the same op and
    // uinv the inverse column op.
    void row_sub(int i, int t, const Int& q) {
        if (q == 0) return;
        for (int j = 0; j < m.cols; ++j) m(i, j) -= q * m(t, j);
        for (int j = 0; j < u.cols; ++j) u(i, j) -= q * u(t, j);
        for (int j = 0; j < uinv.rows; ++j) uinv(j, t) += q * uinv(j, i);
    }

    void col_sub(int j, int t, const Int& q) {
        if (q == 0) return;
        for (int i = 0; i < m.rows; ++i) m(i, j) -= q * m(i, t);
        for (int i = 0; i < v.rows; ++i) v(i, j) -= q * v(i, t);
    }

    void row_swap(int i, int t) {
        if (i == t) return;
        for (int j = 0; j < m.cols; ++j) std::swap(m(i, j), m(t, j));
        for (int j = 0; j < u.cols; ++j) std::swap(u(i, j), u(t, j));
        for (int j = 0; j < uinv.rows; ++j) std::swap(uinv(j, i), uinv(j, t));
    }

    void col_swap(int j, int t) {
        if (j == t) return;
        for (int i = 0; i < m.rows; ++i) std::swap(m(i, j), m(i, t));
        for (int i = 0; i < v.rows; ++i) std::swap(v(i, j), v(i, t));
    }

    void row_negate(int i) {
        for (int j = 0; j < m.cols; ++j) m(i, j) = -m(i, j);
        for (int j = 0; j < u.cols; ++j) u(i, j) = -u(i, j);
        for (int j = 0; j < uinv.rows; ++j) uinv(j, i) = -uinv(j, i);
    }
};

}  // namespace

SmithResult smith_form(const MatZ& m0) {
    Worker w(m0);
    const int rows = m0.rows, cols = m0.cols;
    const int steps = rows < cols ? rows : cols;
    int t = 0;
    for (; t < steps; ++t) {
        // Find a pivot of minimal absolute value in the remaining block.
        int pi = -1, pj = -1;
        Int best;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j) {
                if (w.m(i, j) == 0) continue;
                Int v = abs(w.m(i, j));
                if (pi < 0 || v < best) { best = v; pi = i; pj = j; }
            }
        if (pi < 0) break;  // all zero: done
        w.row_swap(pi, t);
        w.col_swap(pj, t);

        for (;;) {
            // Clear column t below/above the pivot with floor-division steps;
            // remainders become the new (smaller) pivot candidates.
            bool touched = false;
            for (int i = 0; i < rows; ++i) {
                if (i == t || w.m(i, t) == 0) continue;
                Int q = fdiv(w.m(i, t), w.m(t, t));
                w.row_sub(i, t, q);
                if (w.m(i, t) != 0) { w.row_swap(i, t); touched = true; }
            }
            for (int j = 0; j < cols; ++j) {
                if (j == t || w.m(t, j) == 0) continue;
                Int q = fdiv(w.m(t, j), w.m(t, t));
                w.col_sub(j, t, q);
                if (w.m(t, j) != 0) { w.col_swap(j, t); touched = true; }
            }
            if (!touched) break;
        }

        if (w.m(t, t) < 0) w.row_negate(t);

        // Divisibility fix-up: pivot must divide every remaining entry.
        bool redo = false;
        for (int i = t + 1; i < rows && !redo; ++i)
            for (int j = t + 1; j < cols && !redo; ++j)
                if (fmod(w.m(i, j), w.m(t, t)) != 0) {
                    w.row_sub(t, i, Int(-1));  // add row i to row t
                    redo = true;
                }
        if (redo) { --t; continue; }
    }

    SmithResult r;
    r.d = w.m;
    r.u = w.u;
    r.uinv = w.uinv;
    r.v = w.v;
    r.rank = 0;
    for (int i = 0; i < steps; ++i)
        if (r.d(i, i) != 0) ++r.rank;
    return r;
}

MatZ kernel_basis(const MatZ& m) {
    SmithResult s = smith_form(m);
    int n = m.cols, r = s.rank;
    MatZ k(n, n - r);
    for (int j = r; j < n; ++j)
        for (int i = 0; i < n; ++i) k(i, j - r) = s.v(i, j);
    return k;
}

MatZ column_span_basis(const MatZ& m) {
    SmithResult s = smith_form(m);
    // m = uinv d vinv, so the column span is spanned by uinv * (d_i e_i).
    MatZ b(m.rows, s.rank);
    for (int j = 0; j < s.rank; ++j)
        for (int i = 0; i < m.rows; ++i) b(i, j) = s.uinv(i, j) * s.d(j, j);
    return b;
}

MatZ saturation(const MatZ& m) {
    SmithResult s = smith_form(m);
    MatZ b(m.rows, s.rank);
    for (int j = 0; j < s.rank; ++j)
        for (int i = 0; i < m.rows; ++i) b(i, j) = s.uinv(i, j);
    return b;
}

std::optional<VecZ> solve(const MatZ& m, const VecZ& b) {
    if (static_cast<int>(b.size()) != m.rows) throw std::invalid_argument("solve: rhs size mismatch");
    SmithResult s = smith_form(m);
    VecZ y = mul_vec(s.u, b);
    VecZ z(m.cols, Int(0));
    for (int i = 0; i < m.rows; ++i) {
        if (i < s.rank) {
            if (fmod(y[i], s.d(i, i)) != 0) return std::nullopt;
            if (i < m.cols) z[i] = y[i] / s.d(i, i);
        } else if (y[i] != 0) {
            return std::nullopt;
        }
    }
    return mul_vec(s.v, z);
}

}  // namespace latq
