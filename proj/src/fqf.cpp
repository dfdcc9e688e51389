// fqf.cpp — finite quadratic form arithmetic.
#include "latq/fqf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>

namespace latq {

namespace {

constexpr long kEnumCap = 1000000;   // element-enumeration ceiling (Gauss sums)
constexpr long kSplitCap = 250000;   // cyclic-splitting ceiling
const double kPi = 3.14159265358979323846264338327950288;

// Integer-scaled view: q_i*D mod 2D and 2*b_ij*D mod 2D, so element values
// can be accumulated in machine integers (products via __int128).
struct ScaledForm {
    long two_d = 2;
    long d_scale = 1;
    std::vector<long> ord;
    std::vector<long> qn;
    std::vector<std::vector<long>> tb;
    long total = 1;
};

ScaledForm build_scaled(const FiniteQuadraticForm& x, long total_cap) {
    Int total = x.group_order();
    if (total > total_cap)
        throw FqfError("group order " + total.get_str() + " exceeds enumeration cap " + std::to_string(total_cap));
    Int den(1);
    for (const Rat& v : x.q) den = lcm(den, Int(v.get_den()));
    for (const Rat& v : x.b.a) den = lcm(den, Int(v.get_den()));
    ScaledForm sf;
    if (!fits_long(den) || !fits_long(2 * den)) throw FqfError("scaled denominator overflow");
    sf.d_scale = to_long(den);
    sf.two_d = 2 * sf.d_scale;
    sf.total = to_long(total);
    int r = x.ngens();
    sf.ord.resize(r);
    sf.qn.resize(r);
    sf.tb.assign(r, std::vector<long>(r));
    for (int i = 0; i < r; ++i) {
        sf.ord[i] = to_long(x.orders[i]);
        Rat s = x.q[i] * den;  // integral by construction
        sf.qn[i] = to_long(fmod(Int(s.get_num()), Int(sf.two_d)));
        for (int j = 0; j < r; ++j) {
            Rat t = x.b(i, j) * den * 2;
            sf.tb[i][j] = to_long(fmod(Int(t.get_num()), Int(sf.two_d)));
        }
    }
    return sf;
}

// q(x)*D mod 2D for coordinates c.
long scaled_q(const ScaledForm& sf, const std::vector<long>& c) {
    const long m = sf.two_d;
    __int128 acc = 0;
    int r = static_cast<int>(c.size());
    for (int i = 0; i < r; ++i) {
        if (c[i] == 0) continue;
        acc += static_cast<__int128>(c[i]) % m * (c[i] % m) % m * sf.qn[i];
        for (int j = i + 1; j < r; ++j)
            if (c[j] != 0) acc += static_cast<__int128>(c[i]) % m * (c[j] % m) % m * sf.tb[i][j];
    }
    long v = static_cast<long>(acc % m);
    return v < 0 ? v + m : v;
}

long long gcd_ll(long long a, long long b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) { long long t = a % b; a = b; b = t; }
    return a;
}

long element_order_ll(const std::vector<long>& ord, const std::vector<long>& c) {
    long long o = 1;
    for (size_t i = 0; i < ord.size(); ++i) {
        long long oi = ord[i] / gcd_ll(c[i], ord[i]);
        o = o / gcd_ll(o, oi) * oi;
    }
    return static_cast<long>(o);
}

bool next_tuple(std::vector<long>& c, const std::vector<long>& ord) {
    for (size_t i = 0; i < c.size(); ++i) {
        if (++c[i] < ord[i]) return true;
        c[i] = 0;
    }
    return false;
}

struct Kahan {
    double s = 0, comp = 0;
    void add(double v) {
        double y = v - comp, t = s + y;
        comp = (t - s) - y;
        s = t;
    }
};

std::vector<std::pair<Int, int>> factor(Int n) {
    std::vector<std::pair<Int, int>> f;
    for (Int p = 2; p * p <= n; ++p) {
        if (fmod(n, p) != 0) continue;
        int e = 0;
        while (fmod(n, p) == 0) { n /= p; ++e; }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

MatZ with_relations(const FiniteQuadraticForm& a, const MatZ& gens) {
    int r = a.ngens();
    MatZ m(r, gens.cols + r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < gens.cols; ++j) m(i, j) = gens(i, j);
        m(i, gens.cols + i) = a.orders[i];
    }
    return m;
}

}  // namespace

Int FiniteQuadraticForm::group_order() const {
    Int n(1);
    for (const Int& d : orders) n *= d;
    return n;
}

Rat FiniteQuadraticForm::q_of(const VecZ& c) const {
    if (static_cast<int>(c.size()) != ngens()) throw FqfError("q_of: coordinate size mismatch");
    Rat acc(0);
    for (int i = 0; i < ngens(); ++i) {
        if (c[i] == 0) continue;
        acc += Rat(c[i] * c[i]) * q[i];
        for (int j = i + 1; j < ngens(); ++j)
            if (c[j] != 0) acc += Rat(2 * c[i] * c[j]) * b(i, j);
    }
    return qmod2(acc);
}

Rat FiniteQuadraticForm::b_of(const VecZ& x, const VecZ& y) const {
    if (static_cast<int>(x.size()) != ngens() || static_cast<int>(y.size()) != ngens())
        throw FqfError("b_of: coordinate size mismatch");
    Rat acc(0);
    for (int i = 0; i < ngens(); ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < ngens(); ++j)
            if (y[j] != 0) acc += Rat(x[i] * y[j]) * b(i, j);
    }
    return bmod1(acc);
}

Int FiniteQuadraticForm::element_order(const VecZ& c) const {
    Int o(1);
    for (int i = 0; i < ngens(); ++i) {
        Int g = gcd(fmod(c[i], orders[i]), orders[i]);
        o = lcm(o, orders[i] / g);
    }
    return o;
}

FiniteQuadraticForm make_fqf(std::vector<Int> orders, std::vector<Rat> qvals, MatQ bmat) {
    int r = static_cast<int>(orders.size());
    if (static_cast<int>(qvals.size()) != r || bmat.rows != r || bmat.cols != r)
        throw FqfError("make_fqf: shape mismatch");
    FiniteQuadraticForm f;
    f.orders = std::move(orders);
    f.q.resize(r);
    f.b = MatQ(r, r);
    for (int i = 0; i < r; ++i) {
        if (f.orders[i] < 2) throw FqfError("make_fqf: generator order must be > 1");
        f.q[i] = qmod2(qvals[i]);
        for (int j = 0; j < r; ++j) f.b(i, j) = bmod1(bmat(i, j));
    }
    for (int i = 0; i < r; ++i) {
        if (bmod1(f.q[i] - f.b(i, i)) != 0) throw FqfError("make_fqf: b(i,i) must equal q(i) mod Z");
        Rat dq = Rat(f.orders[i]) * f.q[i];
        if (dq.get_den() != 1) throw FqfError("make_fqf: d*q(i) must be integral");
        Rat d2q = Rat(f.orders[i] * f.orders[i]) * f.q[i];
        if (qmod2(d2q) != 0) throw FqfError("make_fqf: d^2*q(i) must be even");
        for (int j = 0; j < r; ++j) {
            if (f.b(i, j) != f.b(j, i)) throw FqfError("make_fqf: b must be symmetric");
            Rat db = Rat(f.orders[i]) * f.b(i, j);
            if (db.get_den() != 1) throw FqfError("make_fqf: d_i*b(i,j) must be integral");
        }
    }
    return f;
}

FiniteQuadraticForm cyclic_form(const Int& d, const Rat& value) {
    if (d < 1) throw FqfError("cyclic_form: order must be positive");
    if (d == 1) return FiniteQuadraticForm{};
    MatQ b(1, 1);
    b(0, 0) = bmod1(value);
    return make_fqf({d}, {value}, b);
}

FiniteQuadraticForm w_block(const Int& p, int alpha, int eps) {
    if (p < 3 || !is_prime(p)) throw FqfError("w_block: p must be an odd prime");
    if (alpha < 1) throw FqfError("w_block: alpha must be >= 1");
    if (eps != 1 && eps != -1) throw FqfError("w_block: eps must be +1 or -1");
    Int pa = pow_int(p, static_cast<unsigned long>(alpha));
    for (Int a = 2; a < 2 * p; a += 2)
        if (legendre(a, p) == eps) return cyclic_form(pa, make_rat(a, pa));
    throw FqfError("w_block: no residue found");  // unreachable
}

FiniteQuadraticForm orthogonal_sum(const FiniteQuadraticForm& x, const FiniteQuadraticForm& y) {
    int rx = x.ngens(), ry = y.ngens();
    std::vector<Int> orders = x.orders;
    orders.insert(orders.end(), y.orders.begin(), y.orders.end());
    std::vector<Rat> q = x.q;
    q.insert(q.end(), y.q.begin(), y.q.end());
    MatQ b(rx + ry, rx + ry);
    for (int i = 0; i < rx; ++i)
        for (int j = 0; j < rx; ++j) b(i, j) = x.b(i, j);
    for (int i = 0; i < ry; ++i)
        for (int j = 0; j < ry; ++j) b(rx + i, rx + j) = y.b(i, j);
    return make_fqf(std::move(orders), std::move(q), std::move(b));
}

FiniteQuadraticForm negate(const FiniteQuadraticForm& x) {
    std::vector<Rat> q(x.q.size());
    MatQ b(x.b.rows, x.b.cols);
    for (size_t i = 0; i < x.q.size(); ++i) q[i] = qmod2(-x.q[i]);
    for (size_t i = 0; i < x.b.a.size(); ++i) b.a[i] = bmod1(-x.b.a[i]);
    return make_fqf(x.orders, std::move(q), std::move(b));
}

std::vector<Int> elementary_divisors(const FiniteQuadraticForm& x) {
    // exponent lists per prime, largest first; chain entry j multiplies the
    // j-th largest exponent of every prime.
    std::map<Int, std::vector<int>> exps;
    for (const Int& d : x.orders)
        for (auto& [p, e] : factor(d)) exps[p].push_back(e);
    size_t len = 0;
    for (auto& [p, v] : exps) {
        std::sort(v.rbegin(), v.rend());
        len = std::max(len, v.size());
    }
    std::vector<Int> chain(len, Int(1));
    for (auto& [p, v] : exps)
        for (size_t j = 0; j < v.size(); ++j) chain[j] *= pow_int(p, static_cast<unsigned long>(v[j]));
    std::sort(chain.begin(), chain.end());  // ascending divisor chain
    return chain;
}

int length_of(const FiniteQuadraticForm& x) { return static_cast<int>(elementary_divisors(x).size()); }

int length_p(const FiniteQuadraticForm& x, const Int& p) {
    int n = 0;
    for (const Int& d : x.orders)
        if (fmod(d, p) == 0) ++n;
    return n;
}

std::vector<Int> prime_support(const FiniteQuadraticForm& x) {
    std::map<Int, bool> seen;
    for (const Int& d : x.orders)
        for (auto& [p, e] : factor(d)) seen[p] = true;
    std::vector<Int> out;
    for (auto& [p, _] : seen) out.push_back(p);
    return out;
}

Int Subgroup::order() const {
    Int n(1);
    for (const Int& d : orders) n *= d;
    return n;
}

Subgroup subgroup_from_generators(const FiniteQuadraticForm& a, const MatZ& gens) {
    int r = a.ngens();
    if (gens.rows != r) throw FqfError("subgroup_from_generators: coordinate rows mismatch");
    if (r == 0) return Subgroup{MatZ(0, 0), {}};
    MatZ w = column_span_basis(with_relations(a, gens));
    // T = W^{-1} * diag(orders); integral because diag(orders)Z^r ⊆ WZ^r.
    MatQ winv = inverse(to_rational(w));
    MatZ t(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Rat e = winv(i, j) * Rat(a.orders[j]);
            if (e.get_den() != 1) throw FqfError("subgroup_from_generators: internal non-integral relation");
            t(i, j) = Int(e.get_num());
        }
    SmithResult st = smith_form(t);
    MatZ lifts = mul(w, st.uinv);
    Subgroup s;
    std::vector<int> keep;
    for (int i = 0; i < r; ++i)
        if (st.d(i, i) > 1) keep.push_back(i);
    s.gens = MatZ(r, static_cast<int>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) {
        s.orders.push_back(st.d(keep[j], keep[j]));
        for (int i = 0; i < r; ++i) s.gens(i, static_cast<int>(j)) = fmod(lifts(i, keep[j]), a.orders[i]);
    }
    return s;
}

Subgroup subgroup_orthogonal(const FiniteQuadraticForm& a, const MatZ& gens) {
    int r = a.ngens(), k = gens.cols;
    if (gens.rows != r) throw FqfError("subgroup_orthogonal: coordinate rows mismatch");
    if (r == 0) return Subgroup{MatZ(0, 0), {}};
    if (k == 0) return subgroup_from_generators(a, MatZ::identity(r));
    // b(e_i, h_j) as rationals; clear denominators and solve N x ≡ 0 mod Dn.
    MatQ bg(k, r);
    Int den(1);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < r; ++i) {
            Rat acc(0);
            for (int l = 0; l < r; ++l)
                if (gens(l, j) != 0) acc += Rat(gens(l, j)) * a.b(i, l);
            bg(j, i) = bmod1(acc);
            den = lcm(den, Int(bg(j, i).get_den()));
        }
    MatZ sys(k, r + k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < r; ++i) {
            Rat e = bg(j, i) * Rat(den);
            sys(j, i) = Int(e.get_num());
        }
        sys(j, r + j) = -den;
    }
    MatZ ker = kernel_basis(sys);
    MatZ sol(r, ker.cols);
    for (int j = 0; j < ker.cols; ++j)
        for (int i = 0; i < r; ++i) sol(i, j) = ker(i, j);
    return subgroup_from_generators(a, sol);
}

FiniteQuadraticForm restrict_to(const FiniteQuadraticForm& a, const Subgroup& s) {
    int k = static_cast<int>(s.orders.size());
    std::vector<Rat> q(k);
    MatQ b(k, k);
    std::vector<VecZ> cols(k, VecZ(a.ngens()));
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < a.ngens(); ++i) cols[j][i] = s.gens(i, j);
    for (int i = 0; i < k; ++i) {
        q[i] = a.q_of(cols[i]);
        for (int j = 0; j < k; ++j) b(i, j) = a.b_of(cols[i], cols[j]);
    }
    return make_fqf(s.orders, std::move(q), std::move(b));
}

FiniteQuadraticForm p_part(const FiniteQuadraticForm& a, const Int& p) {
    int r = a.ngens();
    MatZ gens(r, r);
    for (int i = 0; i < r; ++i) {
        Int d = a.orders[i], co = d;
        while (fmod(co, p) == 0) co /= p;
        gens(i, i) = co;  // (d_i / p-power-part) * g_i has p-power order
    }
    return restrict_to(a, subgroup_from_generators(a, gens));
}

bool is_nondegenerate(const FiniteQuadraticForm& x) {
    if (x.ngens() == 0) return true;
    Subgroup radical = subgroup_orthogonal(x, MatZ::identity(x.ngens()));
    return radical.order() == 1;
}

FiniteQuadraticForm isotropic_quotient(const FiniteQuadraticForm& a, const MatZ& gamma) {
    int r = a.ngens(), k = gamma.cols;
    if (gamma.rows != r) throw FqfError("isotropic_quotient: coordinate rows mismatch");
    std::vector<VecZ> gcols(k, VecZ(r));
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < r; ++i) gcols[j][i] = gamma(i, j);
    for (int i = 0; i < k; ++i) {
        if (a.q_of(gcols[i]) != 0)
            throw FqfError("isotropic_quotient: generator " + std::to_string(i) + " has q != 0");
        for (int j = 0; j < k; ++j)
            if (a.b_of(gcols[i], gcols[j]) != 0)
                throw FqfError("isotropic_quotient: generators " + std::to_string(i) + "," + std::to_string(j) +
                               " pair non-integrally");
    }

    Subgroup perp = subgroup_orthogonal(a, gamma);
    FiniteQuadraticForm qp = restrict_to(a, perp);
    int np = static_cast<int>(perp.orders.size());

    // Γ in the coordinates of Γ^⊥ (solvable since Γ ⊆ Γ^⊥).
    MatZ sys = with_relations(a, perp.gens);
    MatZ gp(np, k);
    for (int j = 0; j < k; ++j) {
        auto sol = solve(sys, gcols[j]);
        if (!sol) throw FqfError("isotropic_quotient: internal — Γ not inside Γ^⊥");
        for (int i = 0; i < np; ++i) gp(i, j) = (*sol)[i];
    }

    // Quotient (Γ^⊥)/Γ.
    if (np == 0) return FiniteQuadraticForm{};
    MatZ w2 = column_span_basis(with_relations(qp, gp));
    SmithResult sw = smith_form(w2);
    std::vector<int> keep;
    for (int i = 0; i < np; ++i)
        if (sw.d(i, i) > 1) keep.push_back(i);
    int m = static_cast<int>(keep.size());
    std::vector<Int> orders(m);
    std::vector<VecZ> lifts(m, VecZ(np));
    for (int j = 0; j < m; ++j) {
        orders[j] = sw.d(keep[j], keep[j]);
        for (int i = 0; i < np; ++i) lifts[j][i] = sw.uinv(i, keep[j]);
    }
    // Well-definedness of q on cosets, checked on representatives.
    for (int j = 0; j < m; ++j)
        for (int c = 0; c < k; ++c) {
            VecZ gcol(np);
            for (int i = 0; i < np; ++i) gcol[i] = gp(i, c);
            if (qp.b_of(lifts[j], gcol) != 0)
                throw FqfError("isotropic_quotient: representative pairs non-integrally with Γ");
        }
    std::vector<Rat> q(m);
    MatQ b(m, m);
    for (int i = 0; i < m; ++i) {
        q[i] = qp.q_of(lifts[i]);
        for (int j = 0; j < m; ++j) b(i, j) = qp.b_of(lifts[i], lifts[j]);
    }
    return make_fqf(std::move(orders), std::move(q), std::move(b));
}

int milgram_signature(const FiniteQuadraticForm& x) {
    if (!is_nondegenerate(x)) throw FqfError("milgram_signature: degenerate form");
    if (x.ngens() == 0) return 0;
    ScaledForm sf = build_scaled(x, kEnumCap);
    std::vector<std::complex<double>> table(sf.two_d);
    for (long t = 0; t < sf.two_d; ++t)
        table[t] = std::polar(1.0, kPi * static_cast<double>(t) / static_cast<double>(sf.d_scale));
    Kahan re, im;
    int r = x.ngens();
    // Depth-first walk: entering level i with digit c adds q_i(2c-1)+cross_i
    // relative to digit c-1, where cross_i = 2 b(prefix, g_i).
    std::vector<long> cross(r, 0);
    std::function<void(int, long, std::vector<long>&)> rec = [&](int lvl, long qacc, std::vector<long>& cr) {
        if (lvl == r) {
            re.add(table[qacc].real());
            im.add(table[qacc].imag());
            return;
        }
        long qcur = qacc;
        std::vector<long> crcur = cr;
        for (long c = 0; c < sf.ord[lvl]; ++c) {
            if (c > 0) {
                qcur = (qcur + (sf.qn[lvl] % sf.two_d * ((2 * c - 1) % sf.two_d) + crcur[lvl]) % sf.two_d) % sf.two_d;
                // digit just moved from c-1 to c: update cross terms for deeper levels
                for (int j = lvl + 1; j < r; ++j) crcur[j] = (crcur[j] + sf.tb[lvl][j]) % sf.two_d;
            }
            rec(lvl + 1, qcur, crcur);
        }
    };
    rec(0, 0, cross);

    double n = static_cast<double>(sf.total);
    double mag2 = re.s * re.s + im.s * im.s;
    if (std::abs(mag2 - n) / n > 1e-6)
        throw FqfError("milgram_signature: Gauss sum magnitude check failed");
    double s_real = std::atan2(im.s, re.s) / (kPi / 4.0);
    long s = std::lround(s_real);
    if (std::abs(s_real - static_cast<double>(s)) > 1e-6)
        throw FqfError("milgram_signature: Gauss sum phase is not an eighth root of unity");
    return static_cast<int>(((s % 8) + 8) % 8);
}

CyclicSplit split_cyclic(const FiniteQuadraticForm& x) {
    CyclicSplit out;
    FiniteQuadraticForm cur = x;
    while (cur.ngens() > 0) {
        ScaledForm sf = build_scaled(cur, kSplitCap);
        int r = cur.ngens();
        // Pivot: maximal order o with den(b(v,v)) = o; b(v,v)*D = q(v)*D mod D.
        std::vector<long> c(r, 0), best;
        long best_ord = 0, best_q = 0;
        do {
            long o = element_order_ll(sf.ord, c);
            if (o < 2 || o <= best_ord) continue;
            long qb = scaled_q(sf, c) % sf.d_scale;              // b(v,v)*D mod D
            long den = sf.d_scale / gcd_ll(qb, sf.d_scale);      // denominator of b(v,v)
            if (den == o) { best = c; best_ord = o; best_q = qb; }
        } while (next_tuple(c, sf.ord));
        if (best_ord == 0) {
            out.leftover = cur;
            return out;
        }
        VecZ piv(r);
        MatZ pivcol(r, 1);
        for (int i = 0; i < r; ++i) pivcol(i, 0) = piv[i] = best[i];
        out.blocks.emplace_back(Int(best_ord), cur.q_of(piv));
        Subgroup comp = subgroup_orthogonal(cur, pivcol);
        if (comp.order() * best_ord != cur.group_order())
            throw FqfError("split_cyclic: complement size mismatch (degenerate form?)");
        cur = restrict_to(cur, comp);
    }
    return out;
}

std::vector<WBlockEntry> odd_normal_form(const FiniteQuadraticForm& x, const Int& p) {
    if (p < 3 || !is_prime(p)) throw FqfError("odd_normal_form: p must be an odd prime");
    for (const Int& d : x.orders) {
        Int t = d;
        while (fmod(t, p) == 0) t /= p;
        if (t != 1) throw FqfError("odd_normal_form: form is not homogeneous at p = " + p.get_str());
    }
    CyclicSplit cs = split_cyclic(x);
    if (cs.leftover)
        throw FqfError("odd_normal_form: form did not split into cyclic blocks (degenerate?)");
    std::map<int, std::pair<int, int>> per_alpha;  // alpha -> (#plus, #minus)
    for (auto& [ord, val] : cs.blocks) {
        int alpha = valuation(ord, p);
        Rat v = qmod2(val);
        // v = a / p^alpha with gcd(a,p) = 1; eps is the Legendre class of a.
        if (Int(v.get_den()) != ord) throw FqfError("odd_normal_form: internal block denominator mismatch");
        int eps = legendre(Int(v.get_num()), p);
        if (eps == 0) throw FqfError("odd_normal_form: internal unit expected");
        auto& [np, nm] = per_alpha[alpha];
        (eps == 1 ? np : nm)++;
    }
    std::vector<WBlockEntry> nf;
    for (auto& [alpha, counts] : per_alpha) {
        auto [np, nm] = counts;
        int minus = nm % 2;  // w⁻⊕w⁻ ≅ w⁺⊕w⁺ within a scale level
        int plus = np + nm - minus;
        for (int i = 0; i < plus; ++i) nf.push_back({alpha, 1});
        if (minus) nf.push_back({alpha, -1});
    }
    return nf;
}

namespace {

// DFS generator-mapping search used by brute_force_isometric.
struct BruteContext {
    const FiniteQuadraticForm& x;
    const FiniteQuadraticForm& y;
    ScaledForm sx, sy;
    std::vector<std::vector<long>> elems;  // all elements of y
    std::vector<long> elem_order;
    std::vector<long> elem_q;  // q*D mod 2D (common scale)
    std::vector<std::vector<long>> imgs;

    bool match(int i) {
        if (i == x.ngens()) {
            MatZ g(y.ngens(), x.ngens());
            for (int a = 0; a < x.ngens(); ++a)
                for (int bidx = 0; bidx < y.ngens(); ++bidx) g(bidx, a) = imgs[a][bidx];
            return subgroup_from_generators(y, g).order() == y.group_order();
        }
        long want_ord = sx.ord[i];
        std::vector<long> ci(x.ngens(), 0);
        ci[i] = 1;
        long want_q = scaled_q(sx, ci);
        for (size_t e = 0; e < elems.size(); ++e) {
            if (elem_order[e] != want_ord || elem_q[e] != want_q) continue;
            bool ok = true;
            for (int j = 0; j < i && ok; ++j) {
                // compare b(g_i, g_j) with b(img_i, img_j): use 2b scaled mod 2D
                std::vector<long> cj(x.ngens(), 0);
                cj[j] = 1;
                long lhs = pair_x(ci, cj), rhs = pair_y(elems[e], imgs[j]);
                ok = lhs == rhs;
            }
            if (!ok) continue;
            imgs[i] = elems[e];
            if (match(i + 1)) return true;
        }
        return false;
    }

    long pair_x(const std::vector<long>& u, const std::vector<long>& v) { return pair_gen(sx, u, v); }
    long pair_y(const std::vector<long>& u, const std::vector<long>& v) { return pair_gen(sy, u, v); }

    static long pair_gen(const ScaledForm& sf, const std::vector<long>& u, const std::vector<long>& v) {
        __int128 acc = 0;
        long m = sf.two_d;
        for (size_t i = 0; i < u.size(); ++i) {
            if (u[i] == 0) continue;
            for (size_t j = 0; j < v.size(); ++j)
                if (v[j] != 0) acc += static_cast<__int128>(u[i]) % m * (v[j] % m) % m * sf.tb[i][j];
        }
        long r = static_cast<long>(acc % m);
        return r < 0 ? r + m : r;
    }
};

}  // namespace

bool brute_force_isometric(const FiniteQuadraticForm& x, const FiniteQuadraticForm& y, long cap) {
    if (x.group_order() != y.group_order()) return false;
    if (x.group_order() > cap) throw FqfError("brute_force_isometric: cap exceeded");
    if (x.ngens() == 0) return true;
    if (elementary_divisors(x) != elementary_divisors(y)) return false;
    // Rebuild both scaled forms over a common denominator so q/b integers
    // are directly comparable between the two forms.
    BruteContext ctx{x, y};
    ctx.sx = build_scaled(x, cap);
    ctx.sy = build_scaled(y, cap);
    long common = to_long(lcm(Int(ctx.sx.d_scale), Int(ctx.sy.d_scale)));
    auto rescale = [&](ScaledForm& sf) {
        long f = common / sf.d_scale;
        if (f == 1) return;
        sf.d_scale = common;
        sf.two_d = 2 * common;
        for (auto& v : sf.qn) v *= f;
        for (auto& row : sf.tb)
            for (auto& v : row) v *= f;
    };
    rescale(ctx.sx);
    rescale(ctx.sy);
    std::vector<long> c(y.ngens(), 0);
    do {
        ctx.elems.push_back(c);
        ctx.elem_order.push_back(element_order_ll(ctx.sy.ord, c));
        ctx.elem_q.push_back(scaled_q(ctx.sy, c));
    } while (next_tuple(c, ctx.sy.ord));
    ctx.imgs.assign(x.ngens(), {});
    return ctx.match(0);
}

Ternary is_isometric_checked(const FiniteQuadraticForm& x, const FiniteQuadraticForm& y) {
    if (!is_nondegenerate(x) || !is_nondegenerate(y)) throw FqfError("is_isometric: degenerate input");
    if (elementary_divisors(x) != elementary_divisors(y)) return Ternary::No;
    std::vector<Int> primes = prime_support(x);
    for (const Int& p : primes) {
        FiniteQuadraticForm xp = p_part(x, p), yp = p_part(y, p);
        if (p == 2) {
            if (xp.group_order() > 10000) return Ternary::Unknown;
            if (!brute_force_isometric(xp, yp)) return Ternary::No;
        } else {
            if (odd_normal_form(xp, p) != odd_normal_form(yp, p)) return Ternary::No;
        }
    }
    return Ternary::Yes;
}

bool is_isometric(const FiniteQuadraticForm& x, const FiniteQuadraticForm& y) {
    Ternary t = is_isometric_checked(x, y);
    if (t == Ternary::Unknown)
        throw FqfError("is_isometric: undecidable within caps (2-part too large for brute force)");
    return t == Ternary::Yes;
}

std::string canonical_block_string(const FiniteQuadraticForm& x) {
    if (x.ngens() == 0) return "1";
    std::vector<std::string> parts;
    std::vector<Int> primes = prime_support(x);
    for (const Int& p : primes) {
        if (p == 2) continue;
        FiniteQuadraticForm xp = p_part(x, p);
        auto nf = odd_normal_form(xp, p);
        std::stable_sort(nf.begin(), nf.end(), [](const WBlockEntry& a, const WBlockEntry& b) {
            return a.alpha < b.alpha || (a.alpha == b.alpha && a.eps > b.eps);
        });
        for (const auto& blk : nf) {
            FiniteQuadraticForm w = w_block(p, blk.alpha, blk.eps);
            std::ostringstream os;
            os << w.orders[0].get_str() << ":" << w.q[0].get_num().get_str() << "/" << w.q[0].get_den().get_str();
            parts.push_back(os.str());
        }
    }
    for (const Int& p : primes) {
        if (p != 2) continue;
        FiniteQuadraticForm x2 = p_part(x, 2);
        CyclicSplit cs = split_cyclic(x2);
        std::sort(cs.blocks.begin(), cs.blocks.end());
        for (auto& [ord, val] : cs.blocks) {
            Rat v = qmod2(val);
            if (v > 1) v -= 2;  // representative in (-1, 1]
            std::ostringstream os;
            os << ord.get_str() << ":" << v.get_num().get_str();
            if (v.get_den() != 1) os << "/" << v.get_den().get_str();
            parts.push_back(os.str());
        }
        if (cs.leftover) {
            std::ostringstream os;
            os << "2-adic[";
            for (int i = 0; i < cs.leftover->ngens(); ++i)
                os << (i ? "," : "") << cs.leftover->orders[i].get_str();
            os << "; q=(";
            for (int i = 0; i < cs.leftover->ngens(); ++i)
                os << (i ? "," : "") << cs.leftover->q[i].get_str();
            os << ")]";
            parts.push_back(os.str());
        }
    }
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
    return out;
}

void for_each_element(const std::vector<Int>& orders, const std::function<bool(const VecZ&)>& fn) {
    VecZ c(orders.size(), Int(0));
    for (;;) {
        if (!fn(c)) return;
        size_t i = 0;
        for (; i < c.size(); ++i) {
            if (++c[i] < orders[i]) break;
            c[i] = 0;
        }
        if (i == c.size()) return;
    }
}

}  // namespace latq
