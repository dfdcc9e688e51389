// latexpr.hpp — the lattice-expression notation used in tables, golden files
// and on the command line: sums, integer rescalings, negation, repetition and
// rank-one blocks over the named-lattice catalogue. Examples:
//   "2*U + 2*E8 + A2", "U(3) + Omega", "A2(-1)", "<-6>", "(U + A2)(-1)".
// Unicode aliases are accepted on input (⊕ for +, ⟨⟩ for <>, − for -, and
// superscript or ^k repetition markers); the printer emits canonical ASCII.
#pragma once

#include "latq/arith.hpp"
#include "latq/lattice.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace latq {

struct LatticeExpr {
    enum class Kind { Named, RankOne, Scaled, Negated, Repeat, Sum };
    Kind kind = Kind::Named;
    std::string name;                   // Named: catalogue name
    Int value = 0;                      // RankOne: diagonal entry; Scaled: factor; Repeat: count
    std::vector<LatticeExpr> children;  // Scaled/Negated/Repeat: one; Sum: two or more
    bool operator==(const LatticeExpr& o) const = default;
};

LatticeExpr expr_named(std::string name);
LatticeExpr expr_rank_one(Int d);
LatticeExpr expr_scaled(LatticeExpr e, Int t);
LatticeExpr expr_negated(LatticeExpr e);
LatticeExpr expr_repeat(Int k, LatticeExpr e);
LatticeExpr expr_sum(std::vector<LatticeExpr> terms);

// Parse failure; position is the byte offset into the original input.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, size_t pos);
    size_t position;
};

// Grammar:  EXPR := TERM ("+" TERM)*
//           TERM := [INT "*"] ATOM
//           ATOM := NAME ["(" INT ")"] | "<" INT ">" | "(" EXPR ")" | ATOM "(-1)"
// plus postfix repetition markers (superscript digits, ^k, ^{k}, ^{⊕k}) in
// the lenient layer. NAME(t) needs t >= 1 or t = -1 (negation); the integer
// inside <> must be even and nonzero; repeat counts are >= 1. Parenthesized
// sums used bare as terms are flattened into the enclosing sum, so
// "(A2+U)+U" and "A2+U+U" produce identical trees.
LatticeExpr parse(const std::string& input);

// Canonical ASCII form; parse(print_expr(e)) == e for every parsed e.
std::string print_expr(const LatticeExpr& e);

GramLattice evaluate(const LatticeExpr& e);

// evaluate(parse(input)).
GramLattice lattice_from_expr(const std::string& input);

}  // namespace latq
