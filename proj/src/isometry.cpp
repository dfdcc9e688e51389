#include <latq/isometry.hpp>

#include <latq/smith.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace latq {

namespace {

using VecR = std::vector<Rat>;

Rat bilinear(const MatQ& gram, const VecR& x, const VecR& y) {
    VecR gy = mul_vec(gram, y);
    Rat s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * gy[i];
    return s;
}

VecR axpy(const VecR& x, const Rat& c, const VecR& y) {  // x + c*y
    VecR out = x;
    for (size_t i = 0; i < out.size(); ++i) out[i] += c * y[i];
    return out;
}

// Matrix of the reflection in v (square vv != 0): column j is
// e_j - 2 B(e_j, v)/vv * v.
MatQ reflection_matrix(const MatQ& gram, const VecR& v, const Rat& vv) {
    int n = gram.rows;
    VecR gv = mul_vec(gram, v);
    MatQ m(n, n);
    for (int j = 0; j < n; ++j) {
        Rat c = Rat(2) * gv[j] / vv;
        for (int i = 0; i < n; ++i) m(i, j) = (i == j ? Rat(1) : Rat(0)) - c * v[i];
    }
    return m;
}

Sublattice sublattice_from_basis(const GramLattice& ambient, MatZ basis) {
    MatZ gram = mul(mul(transpose(basis), ambient.gram), basis);
    return Sublattice{GramLattice{std::move(gram)}, std::move(basis)};
}

}  // namespace

LatticeIsometry make_isometry(GramLattice lattice, MatZ matrix) {
    int n = lattice.rank();
    if (matrix.rows != matrix.cols)
        throw std::invalid_argument("isometry matrix must be square");
    if (matrix.rows != n) {
        std::ostringstream os;
        os << "isometry matrix is " << matrix.rows << "x" << matrix.cols
           << " but the lattice has rank " << n;
        throw std::invalid_argument(os.str());
    }
    MatZ lhs = mul(mul(transpose(matrix), lattice.gram), matrix);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (lhs(i, j) != lattice.gram(i, j)) {
                std::ostringstream os;
                os << "not an isometry: (M^T G M)(" << i << "," << j << ") = "
                   << lhs(i, j).get_str() << ", expected G(" << i << "," << j
                   << ") = " << lattice.gram(i, j).get_str();
                throw std::invalid_argument(os.str());
            }
    if (n > 0) {
        Int d = det_bareiss(matrix);
        if (d != 1 && d != -1) {
            std::ostringstream os;
            os << "isometry matrix must be unimodular; det = " << d.get_str();
            throw std::invalid_argument(os.str());
        }
    }
    return LatticeIsometry{std::move(lattice), std::move(matrix)};
}

LatticeIsometry identity_isometry(const GramLattice& lattice) {
    return LatticeIsometry{lattice, MatZ::identity(lattice.rank())};
}

LatticeIsometry negation_isometry(const GramLattice& lattice) {
    int n = lattice.rank();
    MatZ m = MatZ::identity(n);
    for (int i = 0; i < n; ++i) m(i, i) = -1;
    return LatticeIsometry{lattice, std::move(m)};
}

std::optional<int> order_of(const LatticeIsometry& f, int cap) {
    if (cap < 1) throw std::invalid_argument("order_of: cap must be >= 1");
    MatZ id = MatZ::identity(f.matrix.rows);
    MatZ power = f.matrix;
    for (int k = 1; k <= cap; ++k) {
        if (power == id) return k;
        power = mul(power, f.matrix);
    }
    return std::nullopt;
}

Sublattice invariant_lattice(const LatticeIsometry& f) {
    MatZ m = f.matrix;
    for (int i = 0; i < m.rows; ++i) m(i, i) -= 1;
    return sublattice_from_basis(f.lattice, kernel_basis(m));
}

Sublattice coinvariant_lattice(const LatticeIsometry& f) {
    return orthogonal_complement(f.lattice, invariant_lattice(f).basis);
}

DiscriminantAction discriminant_action(const LatticeIsometry& f) {
    DiscriminantAction out;
    out.data = discriminant_data(f.lattice);
    out.is_identity = true;
    out.is_minus_identity = true;
    int gens = out.data.form.ngens();
    int n = f.lattice.rank();
    MatQ mq = to_rational(f.matrix);
    for (int i = 0; i < gens; ++i) {
        VecR lift(n);
        for (int r = 0; r < n; ++r) lift[r] = out.data.lifts(r, i);
        VecR image_lift = mul_vec(mq, lift);
        VecZ image = dual_class_coords(f.lattice, out.data, image_lift);
        VecR neg_lift(n);
        for (int r = 0; r < n; ++r) neg_lift[r] = -lift[r];
        VecZ self = dual_class_coords(f.lattice, out.data, lift);
        VecZ neg = dual_class_coords(f.lattice, out.data, neg_lift);
        if (image != self) out.is_identity = false;
        if (image != neg) out.is_minus_identity = false;
        out.images.push_back(std::move(image));
    }
    return out;
}

std::vector<Reflection> reflection_factorization(const LatticeIsometry& f,
                                                 const std::vector<int>& pivot_order) {
    int n = f.lattice.rank();
    if (n > 0 && det_bareiss(f.lattice.gram) == 0)
        throw std::domain_error("reflection factorization requires a non-degenerate lattice");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (!pivot_order.empty()) {
        std::vector<int> sorted = pivot_order;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != order)
            throw std::invalid_argument("pivot_order must be a permutation of 0..rank-1");
        order = pivot_order;
    }

    MatQ gram = to_rational(f.lattice.gram);

    // Orthogonal basis of L ⊗ Q, preferring pool vectors in pivot order.
    // Every chosen vector has nonzero square: if all remaining projected
    // vectors are isotropic, some pair has a nonzero pairing (the form is
    // non-degenerate on the remaining space) and their sum is anisotropic.
    std::vector<VecR> pool;
    for (int idx : order) {
        VecR e(n, Rat(0));
        e[idx] = 1;
        pool.push_back(std::move(e));
    }
    std::vector<VecR> basis;
    while (!pool.empty()) {
        VecR b;
        size_t pick = pool.size();
        for (size_t i = 0; i < pool.size(); ++i)
            if (bilinear(gram, pool[i], pool[i]) != 0) {
                pick = i;
                break;
            }
        if (pick < pool.size()) {
            b = pool[pick];
            pool.erase(pool.begin() + static_cast<long>(pick));
        } else {
            bool found = false;
            for (size_t i = 0; i < pool.size() && !found; ++i)
                for (size_t j = i + 1; j < pool.size() && !found; ++j)
                    if (bilinear(gram, pool[i], pool[j]) != 0) {
                        b = axpy(pool[i], Rat(1), pool[j]);
                        pool.erase(pool.begin() + static_cast<long>(j));
                        found = true;
                    }
            if (!found)
                throw std::logic_error("orthogonal basis: degenerate remainder");
        }
        Rat bb = bilinear(gram, b, b);
        for (VecR& v : pool) v = axpy(v, -bilinear(gram, v, b) / bb, b);
        basis.push_back(std::move(b));
    }

    // Peel off reflections until the remaining map is the identity. After
    // each step the remaining map fixes all processed basis vectors, and all
    // later reflection vectors are orthogonal to them.
    std::vector<Reflection> refs;
    MatQ remaining = to_rational(f.matrix);
    for (const VecR& x : basis) {
        VecR y = mul_vec(remaining, x);
        if (y == x) continue;
        VecR diff = axpy(x, Rat(-1), y);
        Rat qdiff = bilinear(gram, diff, diff);
        if (qdiff != 0) {
            remaining = mul(reflection_matrix(gram, diff, qdiff), remaining);
            refs.push_back(Reflection{std::move(diff), std::move(qdiff)});
        } else {
            // Isotropic displacement: q(x+y) = 4 q(x) != 0. Reflecting in
            // x + y sends y to -x, then reflecting in x restores x.
            VecR sum = axpy(x, Rat(1), y);
            Rat qsum = bilinear(gram, sum, sum);
            Rat qx = bilinear(gram, x, x);
            if (qsum == 0) throw std::logic_error("reflection detour: isotropic pivot sum");
            remaining = mul(reflection_matrix(gram, sum, qsum), remaining);
            refs.push_back(Reflection{std::move(sum), std::move(qsum)});
            remaining = mul(reflection_matrix(gram, x, qx), remaining);
            refs.push_back(Reflection{x, std::move(qx)});
        }
    }
    if (remaining != MatQ::identity(n))
        throw std::logic_error("reflection factorization failed to reconstruct the isometry");
    return refs;
}

int spinor_norm(const LatticeIsometry& f) {
    int sign = 1;
    for (const Reflection& r : reflection_factorization(f))
        if (-r.square / 2 < 0) sign = -sign;
    return sign;
}

LatticeIsometry direct_sum_isometry(const LatticeIsometry& f, const LatticeIsometry& g) {
    GramLattice sum = direct_sum(f.lattice, g.lattice);
    int nf = f.lattice.rank();
    int ng = g.lattice.rank();
    MatZ m(nf + ng, nf + ng);
    for (int i = 0; i < nf; ++i)
        for (int j = 0; j < nf; ++j) m(i, j) = f.matrix(i, j);
    for (int i = 0; i < ng; ++i)
        for (int j = 0; j < ng; ++j) m(nf + i, nf + j) = g.matrix(i, j);
    return LatticeIsometry{std::move(sum), std::move(m)};
}

}  // namespace latq
