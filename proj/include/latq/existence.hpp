#pragma once
// existence.hpp — decide whether an even lattice with prescribed signature and
// discriminant form exists, and whether it is unique in its genus.
//
// The existence test runs a chain of local conditions:
//   1. signature bounds and rank vs. length of the discriminant group,
//   2. the Gauss-sum signature residue mod 8,
//   3. for every odd prime p with l(A_p) equal to the rank, a determinant
//      square-class test over Z_p,
//   4. rank-one genera are decided exactly by comparing against the
//      discriminant form of <d>; a 2-adic length-boundary at rank >= 2 is
//      reported as undecided rather than guessed.
// Each verdict carries the list of checks that ran and the tags of the checks
// that failed (or could not be decided), plus the sign convention used by the
// odd-p boundary test.

#include <latq/fqf.hpp>
#include <latq/lattice.hpp>

#include <string>
#include <vector>

namespace latq {

// Signature plus discriminant form, considered up to isometry of the form.
struct Genus {
    int plus = 0;
    int minus = 0;
    FiniteQuadraticForm form;

    int rank() const { return plus + minus; }
};

// Genus of a concrete non-degenerate even lattice.
Genus genus_of(const GramLattice& l);

// True iff signatures agree and the forms are isometric (throws FqfError when
// the form comparison is undecidable).
bool same_genus(const Genus& x, const Genus& y);

struct ExistenceVerdict {
    Ternary exists = Ternary::Unknown;
    Ternary unique_in_genus = Ternary::Unknown;
    // Tags of conditions that failed (exists == No) or blocked the decision
    // (exists == Unknown): "rank-vs-length", "sign-mod-8",
    // "p-adic-boundary(p)", "special-case".
    std::vector<std::string> reasons;
    // Every condition evaluated, in evaluation order.
    std::vector<std::string> checks_run;
    // Human-readable statement of the determinant sign convention used by the
    // odd-p boundary test.
    std::string convention;
};

// Statement of the determinant sign convention used by the odd-p boundary
// test; copied into ExistenceVerdict::convention by every check.
extern const char* const kBoundaryConvention;

// Decides whether an even lattice with the invariants of g exists.
// Throws FqfError when g.form is degenerate.
ExistenceVerdict even_lattice_exists(const Genus& g);

// Sufficient uniqueness criteria: Yes for rank <= 1, for indefinite genera
// with l(A) <= rank - 2, and for the definite rank-2 determinant-3 genera
// (realized by the rank-2 root lattice and its negation); Unknown otherwise.
Ternary unique_in_genus(const Genus& g);

} // namespace latq
