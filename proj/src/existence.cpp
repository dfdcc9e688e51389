#include <latq/existence.hpp>

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace latq {

const char* const kBoundaryConvention =
    "odd-p length boundary: require legendre((-1)^minus * |A/A_p| * "
    "prod(canonical block numerators of the p-part), p) = +1";

namespace {

// Canonical numerator of a rank-one block of order p^alpha: the block's value
// is a/p^alpha with a the smallest positive even residue in its square class.
Int block_numerator(const Int& p, const WBlockEntry& e) {
    FiniteQuadraticForm w = w_block(p, e.alpha, e.eps);
    Rat scaled = w.q_of({Int(1)}) * Rat(pow_int(p, e.alpha));
    if (scaled.get_den() != 1)
        throw std::logic_error("block value has unexpected denominator");
    return scaled.get_num();
}

// Exact decision for rank-one genera: an even lattice of rank one is <d> with
// d = +-|A| even, so existence reduces to one discriminant-form comparison.
bool rank_one_exists(const Genus& g) {
    Int order = g.form.group_order();
    if (order % 2 != 0)
        return false;
    Int d = (g.plus == 1) ? order : -order;
    FiniteQuadraticForm target = discriminant_form(rank_one_lattice(d));
    return is_isometric(g.form, target);
}

} // namespace

Genus genus_of(const GramLattice& l) {
    auto sig = signature(l);
    return Genus{sig.first, sig.second, discriminant_form(l)};
}

bool same_genus(const Genus& x, const Genus& y) {
    if (x.plus != y.plus || x.minus != y.minus)
        return false;
    return is_isometric(x.form, y.form);
}

ExistenceVerdict even_lattice_exists(const Genus& g) {
    if (!is_nondegenerate(g.form))
        throw FqfError("even_lattice_exists: degenerate discriminant form");

    ExistenceVerdict v;
    v.convention = kBoundaryConvention;
    v.unique_in_genus = unique_in_genus(g);
    const int rank = g.rank();

    // 1. Signature bounds and rank vs. length.
    v.checks_run.push_back("rank-vs-length");
    if (g.plus < 0 || g.minus < 0 || rank < length_of(g.form)) {
        v.exists = Ternary::No;
        v.reasons.push_back("rank-vs-length");
        return v;
    }

    // 2. Gauss-sum residue: sig(q) = plus - minus mod 8.
    v.checks_run.push_back("sign-mod-8");
    int residue = milgram_signature(g.form);
    if (((g.plus - g.minus) % 8 + 8) % 8 != residue) {
        v.exists = Ternary::No;
        v.reasons.push_back("sign-mod-8");
        return v;
    }

    // 3. Odd primes at the length boundary: the determinant of a candidate
    // lattice is forced on both sides, so its square class mod p must match.
    for (const Int& p : prime_support(g.form)) {
        if (p == 2 || length_p(g.form, p) != rank)
            continue;
        std::string tag = "p-adic-boundary(" + p.get_str() + ")";
        v.checks_run.push_back(tag);
        FiniteQuadraticForm pp = p_part(g.form, p);
        Int val = g.form.group_order() / pp.group_order();
        if (g.minus % 2 == 1)
            val = -val;
        for (const WBlockEntry& e : odd_normal_form(pp, p))
            val *= block_numerator(p, e);
        if (legendre(val, p) != 1) {
            v.exists = Ternary::No;
            v.reasons.push_back(tag);
            return v;
        }
    }

    // 4. Rank one is decided exactly; a 2-adic length boundary at higher rank
    // is out of scope for the implemented checks and stays undecided.
    if (rank == 1) {
        v.checks_run.push_back("special-case");
        if (rank_one_exists(g)) {
            v.exists = Ternary::Yes;
        } else {
            v.exists = Ternary::No;
            v.reasons.push_back("special-case");
        }
        return v;
    }
    if (rank >= 2 && length_p(g.form, 2) == rank) {
        v.checks_run.push_back("p-adic-boundary(2)");
        v.exists = Ternary::Unknown;
        v.reasons.push_back("p-adic-boundary(2)");
        return v;
    }

    v.exists = Ternary::Yes;
    return v;
}

Ternary unique_in_genus(const Genus& g) {
    const int rank = g.rank();
    if (g.plus < 0 || g.minus < 0)
        return Ternary::Unknown;
    if (rank <= 1)
        return Ternary::Yes;
    bool indefinite = g.plus >= 1 && g.minus >= 1;
    if (indefinite && length_of(g.form) <= rank - 2)
        return Ternary::Yes;
    // Definite rank-2 determinant-3 genera: the reduced-form count is one,
    // realized by the rank-2 root lattice (negative) and its negation.
    if (!indefinite && rank == 2 && g.form.group_order() == 3) {
        GramLattice a2 = named_lattice("A2");
        const GramLattice& cand = (g.plus == 2) ? negate(a2) : a2;
        if (is_isometric(g.form, discriminant_form(cand)))
            return Ternary::Yes;
    }
    return Ternary::Unknown;
}

} // namespace latq
