// lattice.cpp — even lattice arithmetic and the discriminant-form bridge.
#include "latq/lattice.hpp"

#include <numeric>
#include <stdexcept>

namespace latq {

namespace {

MatZ neg_cartan_a(int h) {
    MatZ g(h, h);
    for (int i = 0; i < h; ++i) {
        g(i, i) = -2;
        if (i + 1 < h) g(i, i + 1) = g(i + 1, i) = 1;
    }
    return g;
}

// Negated Cartan matrix from an edge list on nodes 0..n-1.
MatZ neg_cartan(int n, const std::vector<std::pair<int, int>>& edges) {
    MatZ g(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = -2;
    for (auto& [a, b] : edges) g(a, b) = g(b, a) = 1;
    return g;
}

}  // namespace

GramLattice make_lattice(MatZ gram) {
    if (gram.rows != gram.cols) throw std::invalid_argument("lattice Gram matrix must be square");
    for (int i = 0; i < gram.rows; ++i) {
        if (fmod(gram(i, i), 2) != 0)
            throw std::invalid_argument("lattice is not even: odd diagonal entry at " + std::to_string(i));
        for (int j = i + 1; j < gram.cols; ++j)
            if (gram(i, j) != gram(j, i)) throw std::invalid_argument("lattice Gram matrix must be symmetric");
    }
    return GramLattice{std::move(gram)};
}

GramLattice rank_one_lattice(const Int& d) {
    if (d == 0 || fmod(d, 2) != 0) throw std::invalid_argument("rank-1 lattice needs a nonzero even entry");
    MatZ g(1, 1);
    g(0, 0) = d;
    return GramLattice{g};
}

GramLattice named_lattice(const std::string& name) {
    if (name == "U") return make_lattice(MatZ{{0, 1}, {1, 0}});
    if (name == "E6") return make_lattice(neg_cartan(6, {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 3}}));
    if (name == "E8")
        return make_lattice(neg_cartan(8, {{0, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 3}}));
    if (name == "H5") return make_lattice(MatZ{{2, 1}, {1, -2}});
    if (name == "K23") return make_lattice(MatZ{{-12, 1}, {1, -2}});
    if (name == "Omega") return make_lattice(MatZ{{-6, 0, -3}, {0, -6, 9}, {-3, 9, -18}});
    if (name == "E6dual3") {
        MatQ inv = inverse(to_rational(named_lattice("E6").gram));
        MatZ g(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                Rat e = inv(i, j) * 3;
                if (e.get_den() != 1) throw std::logic_error("E6dual3 entry not integral");
                g(i, j) = Int(e.get_num());
            }
        return make_lattice(std::move(g));
    }
    if (name.size() >= 2 && name[0] == 'A') {
        int h = 0;
        for (size_t i = 1; i < name.size(); ++i) {
            if (name[i] < '0' || name[i] > '9') { h = -1; break; }
            h = h * 10 + (name[i] - '0');
        }
        if (h >= 1 && h <= 22) return make_lattice(neg_cartan_a(h));
    }
    throw std::invalid_argument("unknown lattice name: " + name);
}

GramLattice direct_sum(const GramLattice& a, const GramLattice& b) {
    int n = a.rank(), m = b.rank();
    MatZ g(n + m, n + m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = a.gram(i, j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g(n + i, n + j) = b.gram(i, j);
    return GramLattice{std::move(g)};
}

GramLattice rescale(const GramLattice& a, const Int& t) {
    if (t < 1) throw std::invalid_argument("rescale factor must be a positive integer");
    GramLattice r = a;
    for (Int& x : r.gram.a) x *= t;
    return r;
}

GramLattice negate(const GramLattice& a) {
    GramLattice r = a;
    for (Int& x : r.gram.a) x = -x;
    return r;
}

std::pair<int, int> signature(const GramLattice& a) {
    int n = a.rank();
    MatQ w = to_rational(a.gram);
    int pos = 0, neg = 0;
    for (int k = 0; k < n; ++k) {
        if (w(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (w(i, i) != 0) { piv = i; break; }
            if (piv >= 0) {
                for (int j = 0; j < n; ++j) std::swap(w(k, j), w(piv, j));
                for (int i = 0; i < n; ++i) std::swap(w(i, k), w(i, piv));
            } else {
                int off = -1;
                for (int j = k + 1; j < n; ++j)
                    if (w(k, j) != 0) { off = j; break; }
                if (off < 0) throw std::domain_error("signature of a degenerate lattice");
                // row/column addition makes the diagonal entry 2*w(k,off) != 0
                for (int j = 0; j < n; ++j) w(k, j) += w(off, j);
                for (int i = 0; i < n; ++i) w(i, k) += w(i, off);
            }
        }
        (w(k, k) > 0 ? pos : neg)++;
        for (int i = k + 1; i < n; ++i) {
            if (w(i, k) == 0) continue;
            Rat f = w(i, k) / w(k, k);
            for (int j = 0; j < n; ++j) w(i, j) -= f * w(k, j);
            for (int j = 0; j < n; ++j) w(j, i) -= f * w(j, k);
        }
    }
    return {pos, neg};
}

Int determinant(const GramLattice& a) { return det_bareiss(a.gram); }

DiscriminantData discriminant_data(const GramLattice& a) {
    int n = a.rank();
    if (det_bareiss(a.gram) == 0) throw std::domain_error("degenerate lattice has no discriminant form");
    SmithResult s = smith_form(a.gram);
    MatQ ginv = inverse(to_rational(a.gram));
    DiscriminantData d;
    d.to_coords = s.u;
    d.all_orders.resize(n);
    for (int i = 0; i < n; ++i) {
        d.all_orders[i] = s.d(i, i);
        if (s.d(i, i) > 1) d.gen_rows.push_back(i);
    }
    int k = static_cast<int>(d.gen_rows.size());
    // lift of generator i: G^{-1} * uinv * e_{gen_rows[i]}
    MatQ lifts(n, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) {
            Rat acc(0);
            for (int l = 0; l < n; ++l) acc += ginv(i, l) * Rat(s.uinv(l, d.gen_rows[j]));
            lifts(i, j) = acc;
        }
    d.lifts = lifts;
    if (k == 0) {
        d.form = FiniteQuadraticForm{};
        return d;
    }
    std::vector<Int> orders(k);
    std::vector<Rat> q(k);
    MatQ b(k, k);
    MatQ gq = to_rational(a.gram);
    for (int i = 0; i < k; ++i) orders[i] = d.all_orders[d.gen_rows[i]];
    // pairings of the lifts under the ambient form
    MatQ gl = mul(gq, lifts);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            Rat acc(0);
            for (int l = 0; l < n; ++l) acc += lifts(l, i) * gl(l, j);
            if (i == j) q[i] = qmod2(acc);
            b(i, j) = bmod1(acc);
        }
    }
    d.form = make_fqf(std::move(orders), std::move(q), std::move(b));
    return d;
}

FiniteQuadraticForm discriminant_form(const GramLattice& a) { return discriminant_data(a).form; }

VecZ dual_class_coords(const GramLattice& a, const DiscriminantData& d, const std::vector<Rat>& w) {
    int n = a.rank();
    if (static_cast<int>(w.size()) != n) throw std::invalid_argument("dual vector has wrong length");
    VecZ k(n);
    for (int i = 0; i < n; ++i) {
        Rat acc(0);
        for (int j = 0; j < n; ++j) acc += Rat(a.gram(i, j)) * w[j];
        if (acc.get_den() != 1) throw std::invalid_argument("vector is not in the dual lattice");
        k[i] = Int(acc.get_num());
    }
    VecZ t = mul_vec(d.to_coords, k);
    VecZ coords(d.gen_rows.size());
    for (size_t i = 0; i < d.gen_rows.size(); ++i)
        coords[i] = fmod(t[d.gen_rows[i]], d.all_orders[d.gen_rows[i]]);
    return coords;
}

Sublattice orthogonal_complement(const GramLattice& a, const MatZ& vectors) {
    if (vectors.rows != a.rank()) throw std::invalid_argument("orthogonal_complement: vector length mismatch");
    MatZ p = mul(transpose(vectors), a.gram);  // k x n pairing rows
    MatZ basis = kernel_basis(p);
    MatZ gram = mul(mul(transpose(basis), a.gram), basis);
    return Sublattice{GramLattice{std::move(gram)}, std::move(basis)};
}

namespace {

struct VectorSearch {
    int n = 0;
    std::vector<std::vector<long long>> g;
    long long target = 0;
    long bound = 0;
    const std::function<bool(const VecZ&)>* fn = nullptr;
    std::vector<long long> c, cross;
    bool stopped = false;

    void rec(int level, long long square, long long gcdv) {
        if (level == n) {
            if (square == target && gcdv == 1) {
                VecZ v(n);
                for (int i = 0; i < n; ++i) v[i] = Int(static_cast<long>(c[i]));
                if (!(*fn)(v)) stopped = true;
            }
            return;
        }
        for (long k = 0; k <= 2 * bound && !stopped; ++k) {
            long long t = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
            long long sq = square + t * t * g[level][level] + 2 * t * cross[level];
            long long gg = t == 0 ? gcdv : std::gcd(gcdv, t < 0 ? -t : t);
            c[level] = t;
            if (t != 0)
                for (int j = level + 1; j < n; ++j) cross[j] += t * g[level][j];
            rec(level + 1, sq, gg);
            if (t != 0)
                for (int j = level + 1; j < n; ++j) cross[j] -= t * g[level][j];
        }
        c[level] = 0;
    }
};

}  // namespace

void enumerate_primitive_vectors(const GramLattice& a, const Int& square, long bound,
                                 const std::function<bool(const VecZ&)>& fn) {
    if (bound < 0) throw std::invalid_argument("enumerate_primitive_vectors: negative bound");
    VectorSearch vs;
    vs.n = a.rank();
    vs.g.assign(vs.n, std::vector<long long>(vs.n));
    for (int i = 0; i < vs.n; ++i)
        for (int j = 0; j < vs.n; ++j) vs.g[i][j] = to_long(a.gram(i, j));
    vs.target = to_long(square);
    vs.bound = bound;
    vs.fn = &fn;
    vs.c.assign(vs.n, 0);
    vs.cross.assign(vs.n, 0);
    vs.rec(0, 0, 0);
}

std::optional<VecZ> search_primitive_vector(const GramLattice& a, const Int& square, long bound) {
    std::optional<VecZ> found;
    enumerate_primitive_vectors(a, square, bound, [&](const VecZ& v) {
        found = v;
        return false;
    });
    return found;
}

}  // namespace latq
