// lattice.hpp — even integer lattices given by Gram matrices: catalogue of
// named lattices, sums/rescalings, exact signature and determinant, the
// discriminant group L^∨/L with its quadratic form, orthogonal complements
// and bounded primitive-vector search.
#pragma once

#include "latq/fqf.hpp"
#include "latq/matrix.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace latq {

struct GramLattice {
    MatZ gram;  // symmetric, even diagonal
    int rank() const { return gram.rows; }
    bool operator==(const GramLattice& o) const = default;
};

// Validates symmetry and even diagonal; throws std::invalid_argument.
GramLattice make_lattice(MatZ gram);

// Rank-1 lattice ⟨d⟩ (d even, nonzero).
GramLattice rank_one_lattice(const Int& d);

// Catalogue: "U", "A1".."A22", "E6", "E8" (root lattices negative definite),
// "H5", "K23", "Omega", "E6dual3". Throws std::invalid_argument on unknown
// names.
GramLattice named_lattice(const std::string& name);

GramLattice direct_sum(const GramLattice& a, const GramLattice& b);
// L(t): Gram matrix scaled by an integer t >= 1.
GramLattice rescale(const GramLattice& a, const Int& t);
// L(-1).
GramLattice negate(const GramLattice& a);

// (n_plus, n_minus) by exact symmetric diagonalization; throws
// std::domain_error on degenerate input.
std::pair<int, int> signature(const GramLattice& a);
Int determinant(const GramLattice& a);

// Discriminant group A_L = L^∨/L with its torsion quadratic form, plus the
// data needed to locate classes of explicit dual vectors:
//  - lifts: column i is a rational vector (in the basis of L) representing
//    generator g_i of A_L;
//  - to_coords maps an integer vector k = G·w (w ∈ L^∨ in the L-basis) to
//    the full SNF coordinate tuple; gen_rows selects the entries belonging
//    to the kept (order > 1) generators, with moduli in form.orders.
struct DiscriminantData {
    FiniteQuadraticForm form;
    MatQ lifts;
    MatZ to_coords;
    std::vector<Int> all_orders;
    std::vector<int> gen_rows;
};

DiscriminantData discriminant_data(const GramLattice& a);
FiniteQuadraticForm discriminant_form(const GramLattice& a);

// Class of the dual vector w (rational coordinates in the basis of L; G·w
// must be integral) as coordinates in d.form. Throws if w is not in L^∨.
VecZ dual_class_coords(const GramLattice& a, const DiscriminantData& d, const std::vector<Rat>& w);

// A sublattice presented by an ambient-coordinate basis and its Gram matrix.
struct Sublattice {
    GramLattice lattice;
    MatZ basis;  // columns: ambient coordinates
};

// Orthogonal complement of the span of the given columns (saturated).
Sublattice orthogonal_complement(const GramLattice& a, const MatZ& vectors);

// First primitive v with v·v = square and |coordinates| <= bound, in the
// deterministic per-coordinate value order 0, 1, -1, 2, -2, ...; coordinate 0
// varies slowest. Nullopt when the box holds no such vector.
std::optional<VecZ> search_primitive_vector(const GramLattice& a, const Int& square, long bound);

// Every primitive vector of the given square in the box, same order; fn
// returns false to stop early.
void enumerate_primitive_vectors(const GramLattice& a, const Int& square, long bound,
                                 const std::function<bool(const VecZ&)>& fn);

}  // namespace latq
