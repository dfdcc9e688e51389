// isometry.hpp — explicit integer isometries of Gram lattices: order,
// invariant and co-invariant sublattices, the induced action on the
// discriminant group, and the real spinor norm via constructive reflection
// factorization.
#pragma once

#include "latq/lattice.hpp"

#include <optional>
#include <vector>

namespace latq {

// An isometry f of a Gram lattice, acting on column coordinate vectors;
// column j of matrix is the image of the j-th basis vector.
struct LatticeIsometry {
    GramLattice lattice;
    MatZ matrix;
};

// Validates that the matrix is square of the lattice's rank, unimodular, and
// satisfies matrixᵀ · gram · matrix = gram. The error message of a failed
// isometry condition names the first offending entry with both values.
LatticeIsometry make_isometry(GramLattice lattice, MatZ matrix);

LatticeIsometry identity_isometry(const GramLattice& lattice);
LatticeIsometry negation_isometry(const GramLattice& lattice);

// Smallest k in [1, cap] with f^k = identity, or nullopt when every power up
// to cap differs from the identity.
std::optional<int> order_of(const LatticeIsometry& f, int cap = 60);

// Fixed sublattice ker(matrix - identity), saturated (hence primitive), with
// its induced Gram matrix.
Sublattice invariant_lattice(const LatticeIsometry& f);

// Orthogonal complement of the invariant sublattice, saturated.
Sublattice coinvariant_lattice(const LatticeIsometry& f);

// Induced action on the discriminant group A_L, computed on dual-basis lifts
// of the generators. images[i] holds the coordinates (in the generators of
// data.form, reduced modulo their orders) of the image of generator i.
struct DiscriminantAction {
    DiscriminantData data;
    std::vector<VecZ> images;
    bool is_identity = false;
    bool is_minus_identity = false;  // both flags hold when A_L has exponent <= 2
};

// Requires a non-degenerate lattice.
DiscriminantAction discriminant_action(const LatticeIsometry& f);

// One factor of a reflection factorization: the reflection in a rational
// vector v of nonzero square, x ↦ x − 2 B(x,v)/B(v,v) · v.
struct Reflection {
    std::vector<Rat> vector;
    Rat square;  // B(v, v), never zero
};

// Factors the rational extension of f into reflections: fix, one at a time,
// the vectors of an orthogonal basis of L ⊗ Q (every pivot has nonzero
// square); a vector whose displacement x − f(x) is isotropic is routed
// through a two-reflection detour (reflect in x + f(x), then in x). The
// composition of the returned reflections, in order, equals f exactly; this
// is verified internally and a failure throws std::logic_error.
//
// pivot_order, when non-empty, must be a permutation of 0..rank-1 and sets
// the preference order used to build the orthogonal basis; different orders
// may give different factorizations of the same isometry.
std::vector<Reflection> reflection_factorization(const LatticeIsometry& f,
                                                 const std::vector<int>& pivot_order = {});

// Real spinor norm: the sign of the product of -v²/2 over any reflection
// factorization of f (+1 for the identity's empty product). Requires a
// non-degenerate lattice.
int spinor_norm(const LatticeIsometry& f);

// Block-diagonal isometry f ⊕ g on the direct sum of the two lattices. The
// spinor norm multiplies, the order is the lcm, and the invariant sublattice
// is the direct sum of the invariants.
LatticeIsometry direct_sum_isometry(const LatticeIsometry& f, const LatticeIsometry& g);

}  // namespace latq
