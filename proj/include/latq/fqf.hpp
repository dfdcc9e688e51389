// fqf.hpp — finite quadratic forms (A, q) with A a finite abelian group,
// q: A -> Q/2Z, b: A x A -> Q/Z the associated bilinear pairing.
//
// Representation: independent generators g_i of orders d_i (A = ⊕ Z/d_i),
// q-values stored in [0,2), the full symmetric b-matrix in [0,1) with
// b(i,i) ≡ q_i mod 1. Elements are integer coordinate vectors.
#pragma once

#include "latq/matrix.hpp"
#include "latq/smith.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace latq {

struct FqfError : std::domain_error {
    explicit FqfError(const std::string& what) : std::domain_error(what) {}
};

struct FiniteQuadraticForm {
    std::vector<Int> orders;   // each > 1
    std::vector<Rat> q;        // q(g_i) in [0,2)
    MatQ b;                    // b(g_i,g_j) in [0,1), symmetric

    int ngens() const { return static_cast<int>(orders.size()); }
    Int group_order() const;

    Rat q_of(const VecZ& coords) const;
    Rat b_of(const VecZ& x, const VecZ& y) const;
    Int element_order(const VecZ& coords) const;

    bool operator==(const FiniteQuadraticForm& o) const = default;
};

// Constructors / validation -------------------------------------------------

// Builds and validates: orders > 1, symmetry, b(i,i) ≡ q_i mod 1,
// d_i * b(i,j) ∈ Z, d_i * q_i ∈ Z and d_i² * q_i ∈ 2Z (for odd d_i this is
// the usual "d*q even" condition).
FiniteQuadraticForm make_fqf(std::vector<Int> orders, std::vector<Rat> qvals, MatQ bmat);

// The form on Z/d with q(1) = value. Preconditions per the torsion laws above.
FiniteQuadraticForm cyclic_form(const Int& d, const Rat& value);

// w^eps_{p,alpha}: cyclic of order p^alpha (p odd prime), q(1) = a/p^alpha
// where a is the smallest positive even integer with Legendre (a|p) = eps.
FiniteQuadraticForm w_block(const Int& p, int alpha, int eps);

FiniteQuadraticForm orthogonal_sum(const FiniteQuadraticForm& x, const FiniteQuadraticForm& y);
FiniteQuadraticForm negate(const FiniteQuadraticForm& x);

// Group invariants -----------------------------------------------------------

// Canonical elementary divisor chain d1 | d2 | ... of the underlying group.
std::vector<Int> elementary_divisors(const FiniteQuadraticForm& x);
// Minimal number of generators l(A) (= longest p-length over all primes).
int length_of(const FiniteQuadraticForm& x);
// l(A_p): minimal generator count of the p-Sylow part.
int length_p(const FiniteQuadraticForm& x, const Int& p);
std::vector<Int> prime_support(const FiniteQuadraticForm& x);

bool is_nondegenerate(const FiniteQuadraticForm& x);

// Subgroups ------------------------------------------------------------------

struct Subgroup {
    MatZ gens;                 // columns: ambient coordinates of the subgroup generators
    std::vector<Int> orders;   // their orders (ascending divisor chain, all > 1)
    Int order() const;
};

// Subgroup generated by the given ambient coordinate columns.
Subgroup subgroup_from_generators(const FiniteQuadraticForm& a, const MatZ& gens);
// H^⊥ = { x : b(x,h) = 0 for all h in H }.
Subgroup subgroup_orthogonal(const FiniteQuadraticForm& a, const MatZ& gens);
// The induced form on a subgroup (q restricted).
FiniteQuadraticForm restrict_to(const FiniteQuadraticForm& a, const Subgroup& s);
// Sylow p-part as a standalone form.
FiniteQuadraticForm p_part(const FiniteQuadraticForm& a, const Int& p);

// Γ^⊥/Γ for an isotropic subgroup Γ (q|Γ ≡ 0, b|Γ×Γ ≡ 0); throws FqfError
// otherwise. Well-definedness of q on cosets is asserted on representatives.
FiniteQuadraticForm isotropic_quotient(const FiniteQuadraticForm& a, const MatZ& gamma_gens);

// Milgram / Gauss sum ---------------------------------------------------------

// Signature mod 8 from the Gauss sum Σ exp(iπ q(x)), computed with a
// compensated floating sum over exact integer-scaled phases; throws FqfError
// if |A| exceeds the 10^6 cap, the form is degenerate, or the phase is not
// within 1e-6 of an eighth-root of unity (in units of π/4).
int milgram_signature(const FiniteQuadraticForm& x);

// Normal forms / isometry ------------------------------------------------------

struct WBlockEntry {
    int alpha;
    int eps;  // +1 / -1
    bool operator==(const WBlockEntry&) const = default;
};

// Canonical block decomposition of a homogeneous odd-p form: sorted by alpha,
// at most one eps = -1 block per alpha (pair relation w⁺⊕w⁺ ≅ w⁻⊕w⁻), the
// minus block listed last within its alpha group.
std::vector<WBlockEntry> odd_normal_form(const FiniteQuadraticForm& x, const Int& p);

// Greedy orthogonal splitting into cyclic blocks (order, value); `leftover`
// holds any unsplittable remainder (2-adic u/v-type blocks).
struct CyclicSplit {
    std::vector<std::pair<Int, Rat>> blocks;
    std::optional<FiniteQuadraticForm> leftover;
};
CyclicSplit split_cyclic(const FiniteQuadraticForm& x);

enum class Ternary { No = 0, Yes = 1, Unknown = 2 };

// Isometry decision: group invariants, odd-p normal forms, brute-force search
// on 2-parts up to the 10^4 cap. Unknown only when a cap prevents a decision.
Ternary is_isometric_checked(const FiniteQuadraticForm& x, const FiniteQuadraticForm& y);
// Strict variant: throws FqfError on Unknown.
bool is_isometric(const FiniteQuadraticForm& x, const FiniteQuadraticForm& y);

// Exhaustive generator-mapping isometry search (testing oracle and 2-part
// backend); both groups must have order <= cap.
bool brute_force_isometric(const FiniteQuadraticForm& x, const FiniteQuadraticForm& y, long cap = 10000);

// "3:4/3 + 3:2/3 + 4:-1/4": odd blocks with canonical even numerators in
// (0, 2p^a), 2-adic blocks with representative in (-1, 1]; ordered by prime,
// then block order, plus-type before minus-type for odd p.
std::string canonical_block_string(const FiniteQuadraticForm& x);

// Enumeration helper: calls fn(coords) for every element; fn returns false to stop.
void for_each_element(const std::vector<Int>& orders, const std::function<bool(const VecZ&)>& fn);

}  // namespace latq
