// glue.hpp — gluing data for a primitive embedding of a p-elementary lattice
// S of signature (2, (p−1)m − 2) into an even lattice whose orthogonal
// complement data is carried by the rank-one factor ⟨−2(n−1)⟩: the ambient
// discriminant form and its CRT split, the forced source form q_S, the one or
// two glue cases with their target discriminant forms q_T, and the extreme
// rank-one case (p−1)m = 22.
#pragma once

#include "latq/existence.hpp"
#include "latq/fqf.hpp"
#include "latq/lattice.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace latq {

// Input outside the supported range: p = 2, or p² | 2(n−1).
struct ScopeError : std::domain_error {
    using std::domain_error::domain_error;
};

// Discriminant form of ⟨−2(n−1)⟩: cyclic of order 2(n−1) with
// q(g) = −1/(2(n−1)), split as (p-part) ⊕ (prime-to-p part) via
// 2(n−1) = p^α β, p ∤ β.
struct AmbientForm {
    FiniteQuadraticForm full;
    FiniteQuadraticForm p_block;     // trivial when alpha = 0
    FiniteQuadraticForm beta_block;  // cyclic of order beta
    int alpha = 0;                   // v_p(2(n−1)); only 0 or 1 in scope
    Int beta = 1;
    int eps_p = +1;                  // Legendre (−β | p)
};

// Throws ScopeError when p = 2 or p² | 2(n−1); std::invalid_argument when
// n < 2 or p is not prime.
AmbientForm q_l_of(int n, const Int& p);

// The forced source discriminant form on (Z/p)^k, where k = a when
// m ≡ a (mod 2) and k = a+1 otherwise (the mixed-parity case is only legal
// when alpha = 1). The block pattern — all plus-type versus one minus-type
// block — is the unique one whose signature mod 8 matches (2, (p−1)m − 2).
// Returns nullopt when k = 0 is forced onto the minus pattern (no form of
// length 0 has that signature residue). Throws std::invalid_argument on
// out-of-range input or a parity violation with alpha = 0.
std::optional<FiniteQuadraticForm> q_s_of(const Int& p, int m, int a, int alpha);

struct GlueCase {
    std::string case_tag;  // "trivial-glue" | "cyclic-glue"
    Int x_order = 1;       // 1 for trivial glue, p for cyclic glue
    FiniteQuadraticForm q_t_target;
    // Independent recomputation of the target as Γ^⊥/Γ inside (−q_S) ⊕ q_L
    // (Γ trivial for the trivial case); always isometric to q_t_target — a
    // mismatch aborts enumeration with std::logic_error.
    FiniteQuadraticForm q_t_graph;
    std::pair<int, int> t_signature{0, 0};  // as supplied by the caller
};

// Always emits the trivial case, with target (−q_S) ⊕ q_L. When alpha = 1
// and A_S holds an element x of order p with q_S(x) = q_L(e) — e the order-p
// element β·g of the cyclic ambient form — additionally emits the cyclic
// case. Its target is computed twice: by the closed-form block rules (drop
// one block of the ambient type from q_S, negate the rest, add the β-block)
// and independently as Γ^⊥/Γ for the graph Γ = ⟨(x, e)⟩ inside (−q_S) ⊕ q_L;
// any disagreement throws std::logic_error. q_l must be cyclic (at most one
// generator). t_signature, when given, is copied onto every case.
std::vector<GlueCase> enumerate_glue_cases(
    const FiniteQuadraticForm& q_s, const FiniteQuadraticForm& q_l, const Int& p, int alpha,
    std::optional<std::pair<int, int>> t_signature = std::nullopt);

struct RankOneCase {
    Int p;
    int m = 0;
    int a = 0;
    int alpha = 0;
    Int t_square;        // T = ⟨t_square⟩
    std::string s_expr;  // named representative of S
    Genus s_genus;
    Genus t_genus;
};

// The extreme case (p−1)m = 22, where T has rank one: at most one admissible
// triple for given (n, p), with a = 1 − α, present iff −p is a square modulo
// 4(n−1)/p^α. Empty whenever (p−1) ∤ 22. Throws ScopeError like q_l_of.
std::vector<RankOneCase> rank_one_cases(int n, const Int& p);

}  // namespace latq
