#include "latq/glue.hpp"

#include <algorithm>

namespace latq {

namespace {

int mod8(long x) { return static_cast<int>(((x % 8) + 8) % 8); }

void check_odd_prime(const Int& p) {
    if (p == 2) throw ScopeError("p = 2 is out of scope; only odd primes are supported");
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime, got " + p.get_str());
}

// alpha = v_p(2(n-1)), with the scope guard alpha <= 1.
int ambient_valuation(int n, const Int& p) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    check_odd_prime(p);
    Int d = 2 * Int(n - 1);
    int alpha = valuation(d, p);
    if (alpha >= 2)
        throw ScopeError("out of scope: p^2 divides 2(n-1); only p-valuation 0 or 1 is supported");
    return alpha;
}

}  // namespace

AmbientForm q_l_of(int n, const Int& p) {
    int alpha = ambient_valuation(n, p);
    Int d = 2 * Int(n - 1);
    Int beta = d / pow_int(p, static_cast<unsigned long>(alpha));
    AmbientForm out;
    out.full = cyclic_form(d, make_rat(-1, d));
    out.alpha = alpha;
    out.beta = beta;
    // CRT split of Z/d = Z/p^α × Z/β: the p-part is generated by β·g and the
    // complement by p^α·g.
    out.p_block = alpha == 0 ? FiniteQuadraticForm{}
                             : cyclic_form(pow_int(p, static_cast<unsigned long>(alpha)),
                                           out.full.q_of(VecZ{beta}));
    out.beta_block = cyclic_form(beta, out.full.q_of(VecZ{pow_int(p, static_cast<unsigned long>(alpha))}));
    out.eps_p = legendre(-beta, p);
    return out;
}

std::optional<FiniteQuadraticForm> q_s_of(const Int& p, int m, int a, int alpha) {
    check_odd_prime(p);
    if (alpha != 0 && alpha != 1) throw std::invalid_argument("alpha must be 0 or 1");
    if (m < 1 || (p - 1) * m > 22)
        throw std::invalid_argument("m out of range: need m >= 1 and (p-1)m <= 22");
    if (a < 0 || a > m) throw std::invalid_argument("a out of range: need 0 <= a <= m");
    bool same_parity = (m - a) % 2 == 0;
    if (!same_parity && alpha == 0)
        throw std::invalid_argument("parity violation: m and a must have equal parity when alpha = 0");
    int k = same_parity ? a : a + 1;

    // Signature of the source lattice is (2, (p-1)m - 2); pick the block
    // pattern whose signature residue mod 8 matches. Exactly one of the two
    // patterns matches because (p-1)(m-k) is a multiple of 4.
    long pm1 = to_long(p - 1);
    int want = mod8(4 - pm1 * m);
    int all_plus = mod8(-k * pm1);  // k(1-p) mod 8
    FiniteQuadraticForm f;
    if (want == all_plus) {
        for (int i = 0; i < k; ++i) f = orthogonal_sum(f, w_block(p, 1, +1));
        return f;
    }
    if (want == mod8(all_plus + 4)) {
        if (k == 0) return std::nullopt;
        for (int i = 0; i + 1 < k; ++i) f = orthogonal_sum(f, w_block(p, 1, +1));
        return orthogonal_sum(f, w_block(p, 1, -1));
    }
    throw std::logic_error("signature residue matches neither block pattern");
}

std::vector<GlueCase> enumerate_glue_cases(const FiniteQuadraticForm& q_s,
                                           const FiniteQuadraticForm& q_l, const Int& p, int alpha,
                                           std::optional<std::pair<int, int>> t_signature) {
    check_odd_prime(p);
    if (alpha != 0 && alpha != 1) throw std::invalid_argument("alpha must be 0 or 1");
    if (!is_nondegenerate(q_s) || !is_nondegenerate(q_l))
        throw std::invalid_argument("glue enumeration needs non-degenerate forms");
    if (q_l.ngens() > 1) throw std::invalid_argument("the ambient form must be cyclic");
    {
        Int o = q_s.group_order();
        while (fmod(o, p) == 0) o /= p;
        if (o != 1) throw std::invalid_argument("the source form must be p-elementary");
    }

    std::pair<int, int> sig = t_signature.value_or(std::pair<int, int>{0, 0});
    std::vector<GlueCase> out;
    {
        FiniteQuadraticForm direct = orthogonal_sum(negate(q_s), q_l);
        FiniteQuadraticForm via_quotient = isotropic_quotient(direct, MatZ(direct.ngens(), 0));
        if (elementary_divisors(via_quotient) != elementary_divisors(direct))
            throw std::logic_error("trivial glue: quotient by the trivial group changed the group");
        if (!is_isometric(direct, via_quotient))
            throw std::logic_error("trivial glue: quotient by the trivial group changed the form");
        out.push_back(GlueCase{"trivial-glue", 1, std::move(direct), std::move(via_quotient), sig});
    }
    if (alpha == 0) return out;

    Int d = q_l.ngens() == 1 ? q_l.orders[0] : Int(1);
    if (valuation(d, p) != alpha)
        throw std::invalid_argument("the ambient form's order has p-valuation different from alpha");
    Int beta = d / p;
    Rat val_e = q_l.q_of(VecZ{beta});  // value on e = β·g, the order-p element

    // Element search: the first x of order p with q_S(x) = q_L(e).
    std::optional<VecZ> x;
    for_each_element(q_s.orders, [&](const VecZ& c) {
        if (q_s.element_order(c) == p && q_s.q_of(c) == val_e) {
            x = c;
            return false;
        }
        return true;
    });

    // Closed-form existence: at least one block, and a lone block must have
    // the ambient type.
    std::vector<WBlockEntry> blocks = odd_normal_form(q_s, p);
    for (const WBlockEntry& bl : blocks)
        if (bl.alpha != 1) throw std::invalid_argument("the source form must be p-elementary");
    int k = static_cast<int>(blocks.size());
    int eps_l = legendre(-beta, p);
    bool closed_form_exists = k >= 1 && (k >= 2 || blocks[0].eps == eps_l);
    if (closed_form_exists != x.has_value())
        throw std::logic_error("cyclic glue: element search and block rule disagree on existence");
    if (!x) return out;

    // Closed-form target: drop one ambient-type block (trading a pair of
    // opposite-type blocks for ambient-type ones if necessary), negate the
    // remainder, and append the β-block of the ambient form.
    std::vector<WBlockEntry> rem = blocks;
    auto it = std::find_if(rem.begin(), rem.end(),
                           [&](const WBlockEntry& b) { return b.eps == eps_l; });
    if (it != rem.end()) {
        rem.erase(it);
    } else {
        if (k < 2) throw std::logic_error("cyclic glue: lone opposite-type block slipped through");
        rem.erase(rem.begin());
        rem.erase(rem.begin());
        rem.push_back(WBlockEntry{1, eps_l});
    }
    FiniteQuadraticForm remainder;
    for (const WBlockEntry& b : rem) remainder = orthogonal_sum(remainder, w_block(p, 1, b.eps));
    FiniteQuadraticForm beta_block = cyclic_form(beta, q_l.q_of(VecZ{p}));
    FiniteQuadraticForm table_target = orthogonal_sum(negate(remainder), beta_block);

    // Independent route: Γ^⊥/Γ for the graph Γ = ⟨(x, e)⟩ in (−q_S) ⊕ q_L.
    FiniteQuadraticForm big = orthogonal_sum(negate(q_s), q_l);
    MatZ gamma(big.ngens(), 1);
    for (int i = 0; i < q_s.ngens(); ++i) gamma(i, 0) = (*x)[i];
    gamma(q_s.ngens(), 0) = beta;
    FiniteQuadraticForm graph_target = isotropic_quotient(big, gamma);

    if (elementary_divisors(graph_target) != elementary_divisors(table_target))
        throw std::logic_error("cyclic glue: graph quotient and block rule give different groups");
    if (!is_isometric(table_target, graph_target))
        throw std::logic_error("cyclic glue: graph quotient and block rule give different forms");

    out.push_back(GlueCase{"cyclic-glue", p, std::move(table_target), std::move(graph_target), sig});
    return out;
}

std::vector<RankOneCase> rank_one_cases(int n, const Int& p) {
    int alpha = ambient_valuation(n, p);
    if (fmod(Int(22), p - 1) != 0) return {};
    int m = static_cast<int>(to_long(Int(22) / (p - 1)));
    int a = 1 - alpha;
    Int d = 2 * Int(n - 1);
    // The extreme triple is admissible iff −p is a square modulo 4(n−1)/p^α.
    Int modulus = 2 * d / pow_int(p, static_cast<unsigned long>(alpha));
    if (!qr_mod(-p, modulus)) return {};

    RankOneCase c;
    c.p = p;
    c.m = m;
    c.a = a;
    c.alpha = alpha;
    c.t_square = alpha == 0 ? Int(p * d) : Int(d / p);
    c.s_expr = p == 3 ? "2*U + 2*E8 + A2" : "2*U + 2*E8 + K23";
    GramLattice u = named_lattice("U"), e8 = named_lattice("E8");
    GramLattice s = direct_sum(direct_sum(u, u),
                               direct_sum(direct_sum(e8, e8), named_lattice(p == 3 ? "A2" : "K23")));
    c.s_genus = genus_of(s);
    c.t_genus = genus_of(rank_one_lattice(c.t_square));
    return {c};
}

}  // namespace latq
