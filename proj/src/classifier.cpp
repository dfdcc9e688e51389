#include "latq/classifier.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace latq {

namespace {

using nlohmann::json;

const std::vector<Int>& candidate_primes() {
    static const std::vector<Int> ps = {3, 5, 7, 11, 13, 17, 19, 23};
    return ps;
}

bool in_range(const Int& p, int m, int a) {
    if (m < 1) return false;
    Int pm = (p - 1) * m;
    if (pm > 22) return false;
    if (a < 0 || a > m) return false;
    return Int(a) <= 23 - pm;
}

Ternary combine(Ternary x, Ternary y) {
    if (x == Ternary::No || y == Ternary::No) return Ternary::No;
    if (x == Ternary::Yes && y == Ternary::Yes) return Ternary::Yes;
    return Ternary::Unknown;
}

std::string triple_label(const Int& p, int m, int a) {
    return "(" + p.get_str() + "," + std::to_string(m) + "," + std::to_string(a) + ")";
}

}  // namespace

AdmissibleTriple is_admissible(int n, const Int& p, int m, int a) {
    AmbientForm amb = q_l_of(n, p);  // validates n and p; throws when p^2 | 2(n-1)

    AdmissibleTriple t;
    t.p = p;
    t.m = m;
    t.a = a;
    t.alpha = amb.alpha;
    t.beta = amb.beta;
    t.uncorroborated = p >= 5 && p <= 19;
    t.verdict.convention = kBoundaryConvention;

    auto fail = [&t](const std::string& tag) -> AdmissibleTriple& {
        t.verdict.exists = Ternary::No;
        t.verdict.reasons.push_back(tag);
        return t;
    };

    t.verdict.checks_run.push_back("range-screen");
    if (!in_range(p, m, a)) return fail("range");

    t.verdict.checks_run.push_back("parity-screen");
    bool same_parity = (m - a) % 2 == 0;
    if (amb.alpha == 0 && !same_parity) return fail("parity-vs-alpha");
    t.glue_case = same_parity ? "trivial-glue" : "cyclic-glue";

    t.verdict.checks_run.push_back("source-form");
    std::optional<FiniteQuadraticForm> q_s = q_s_of(p, m, a, amb.alpha);
    if (!q_s) return fail("sign-mod-8");
    int pm = static_cast<int>(to_long((p - 1) * m));
    t.s_genus = Genus{2, pm - 2, *q_s};

    t.verdict.checks_run.push_back("s-existence");
    ExistenceVerdict vs = even_lattice_exists(t.s_genus);
    if (vs.exists != Ternary::Yes) {
        t.verdict.exists = vs.exists;
        t.verdict.reasons = vs.reasons;
        return t;
    }

    if (pm == 22) {
        // The complement has rank one; decided by the quadratic-residue
        // criterion instead of the generic existence machinery.
        t.verdict.checks_run.push_back("rank-one-criterion");
        std::vector<RankOneCase> rows = rank_one_cases(n, p);
        bool right_a = a == 1 - amb.alpha;
        if (!right_a) {
            // Any other glue length forces a discriminant group longer than
            // a rank-one lattice can carry.
            t.verdict.reasons.push_back("rank-vs-length");
        }
        if (rows.empty()) t.verdict.reasons.push_back("quadratic-residue");
        if (!right_a || rows.empty()) {
            t.verdict.exists = Ternary::No;
            return t;
        }
        t.t_genus_options = {rows[0].t_genus};
        t.s_expr = rows[0].s_expr;
        t.t_expr = "<" + rows[0].t_square.get_str() + ">";
        t.verdict.exists = Ternary::Yes;
        t.verdict.unique_in_genus = combine(vs.unique_in_genus, Ternary::Yes);
        t.assumptions.push_back(
            "assumes every isometry of the source discriminant form extends to the source lattice"
            " (recorded, not verified)");
        return t;
    }

    t.verdict.checks_run.push_back("glue-cases");
    int t_minus = 22 - pm;
    std::vector<GlueCase> cases =
        enumerate_glue_cases(*q_s, amb.full, p, amb.alpha, {{1, t_minus}});
    const GlueCase* chosen = nullptr;
    for (const GlueCase& c : cases)
        if (c.case_tag == t.glue_case) chosen = &c;
    if (!chosen) return fail("no-glue-case");

    t.verdict.checks_run.push_back("t-existence");
    Genus t_genus{1, t_minus, chosen->q_t_target};
    t.t_genus_options = {t_genus};
    ExistenceVerdict vt = even_lattice_exists(t_genus);
    if (vt.exists != Ternary::Yes) {
        t.verdict.exists = vt.exists;
        t.verdict.reasons = vt.reasons;
        return t;
    }

    t.verdict.exists = Ternary::Yes;
    t.verdict.unique_in_genus = combine(vs.unique_in_genus, vt.unique_in_genus);
    t.assumptions.push_back(
        "assumes every isometry of the source discriminant form extends to the source lattice"
        " (recorded, not verified)");
    return t;
}

ClassificationTable enumerate_triples(int n, std::optional<Int> p) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    ClassificationTable table;
    table.n = n;
    table.p = p;

    std::vector<Int> primes;
    if (p) {
        q_l_of(n, *p);  // a requested out-of-scope prime throws here
        primes = {*p};
    } else {
        for (const Int& q : candidate_primes()) {
            if (valuation(2 * Int(n - 1), q) >= 2)
                table.skipped_primes.push_back(q);
            else
                primes.push_back(q);
        }
    }

    for (const Int& q : primes) {
        int mmax = static_cast<int>(to_long(Int(22) / (q - 1)));
        for (int m = mmax; m >= 1; --m) {
            Int pm = (q - 1) * m;
            int amax = std::min(m, static_cast<int>(to_long(Int(23) - pm)));
            for (int a = 0; a <= amax; ++a) {
                AdmissibleTriple t = is_admissible(n, q, m, a);
                if (admissible(t)) table.rows.push_back(std::move(t));
            }
        }
    }

    std::sort(table.rows.begin(), table.rows.end(),
              [](const AdmissibleTriple& x, const AdmissibleTriple& y) {
                  if (x.p != y.p) return x.p > y.p;
                  if (x.m != y.m) return x.m > y.m;
                  return x.a < y.a;
              });

    std::map<std::string, std::optional<GoldenTable>> golden_cache;
    for (AdmissibleTriple& row : table.rows) {
        std::string key = row.p.get_str();
        auto it = golden_cache.find(key);
        if (it == golden_cache.end())
            it = golden_cache.emplace(key, bundled_golden_table(n, row.p)).first;
        if (!it->second) continue;
        for (const GoldenRow& g : it->second->rows) {
            if (g.p == row.p && g.m == row.m && g.a == row.a) {
                row.s_expr = g.s_expr;
                row.t_expr = g.t_expr;
                row.marker = g.marker;
                break;
            }
        }
    }
    return table;
}

bool verify_representative(const LatticeExpr& expr, const Genus& g) {
    GramLattice l = evaluate(expr);
    std::pair<int, int> sig = signature(l);
    if (sig.first != g.plus || sig.second != g.minus) return false;
    return is_isometric(discriminant_form(l), g.form);
}

bool verify_representative(const std::string& expr, const Genus& g) {
    return verify_representative(parse(expr), g);
}

bool natural_split_check(const Genus& t_genus, const Genus& s_genus, int n,
                         const std::pair<Genus, Genus>& k3_pair) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    const Genus& t_k3 = k3_pair.first;
    const Genus& s_k3 = k3_pair.second;
    FiniteQuadraticForm delta = discriminant_form(rank_one_lattice(-2 * Int(n - 1)));
    Genus split{t_k3.plus, t_k3.minus + 1, orthogonal_sum(t_k3.form, delta)};
    return same_genus(t_genus, split) && same_genus(s_genus, s_k3);
}

std::optional<VecZ> induced_split_vector(const Genus& t_genus, int n, const GramLattice& t_k3,
                                         long bound) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (t_genus.rank() + 1 != t_k3.rank()) return std::nullopt;
    std::optional<VecZ> witness;
    enumerate_primitive_vectors(t_k3, 2 * Int(n - 1), bound, [&](const VecZ& v) {
        MatZ col(t_k3.rank(), 1);
        for (int i = 0; i < t_k3.rank(); ++i) col(i, 0) = v[i];
        Sublattice comp = orthogonal_complement(t_k3, col);
        if (determinant(comp.lattice) != 0 && same_genus(genus_of(comp.lattice), t_genus)) {
            witness = v;
            return false;
        }
        return true;
    });
    return witness;
}

std::string default_data_dir() {
    if (const char* env = std::getenv("LATQ_DATA_DIR")) return env;
#ifdef LATQ_DATA_DIR
    return LATQ_DATA_DIR;
#else
    return "data";
#endif
}

GoldenTable load_golden_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file: " + path);
    json j = json::parse(in);
    GoldenTable g;
    g.n = j.at("n").get<int>();
    g.p = Int(j.at("p").get<long>());
    for (const json& r : j.at("rows")) {
        GoldenRow row;
        row.p = Int(r.at("p").get<long>());
        row.m = r.at("m").get<int>();
        row.a = r.at("a").get<int>();
        row.s_expr = r.at("S").get<std::string>();
        row.t_expr = r.at("T").get<std::string>();
        row.marker = r.value("marker", "none");
        g.rows.push_back(std::move(row));
    }
    return g;
}

std::optional<GoldenTable> bundled_golden_table(int n, const Int& p) {
    std::ostringstream path;
    path << default_data_dir() << "/golden/n" << n << "_p" << p.get_str() << ".json";
    std::ifstream probe(path.str());
    if (!probe) return std::nullopt;
    probe.close();
    return load_golden_table(path.str());
}

std::vector<std::string> diff_against_golden(ClassificationTable& table, const GoldenTable& golden) {
    std::vector<std::string> out;
    if (table.n != golden.n)
        out.push_back("table is for n=" + std::to_string(table.n) + ", reference is for n=" +
                      std::to_string(golden.n));

    for (const GoldenRow& g : golden.rows) {
        AdmissibleTriple* hit = nullptr;
        for (AdmissibleTriple& row : table.rows)
            if (row.p == g.p && row.m == g.m && row.a == g.a) hit = &row;
        if (!hit) {
            out.push_back("missing computed row " + triple_label(g.p, g.m, g.a));
            continue;
        }
        hit->s_expr = g.s_expr;
        hit->t_expr = g.t_expr;
        hit->marker = g.marker;
        if (!verify_representative(g.s_expr, hit->s_genus))
            out.push_back("row " + triple_label(g.p, g.m, g.a) + ": listed S \"" + g.s_expr +
                          "\" does not match the computed source genus");
        bool t_ok = false;
        for (const Genus& tg : hit->t_genus_options)
            if (verify_representative(g.t_expr, tg)) t_ok = true;
        if (!t_ok)
            out.push_back("row " + triple_label(g.p, g.m, g.a) + ": listed T \"" + g.t_expr +
                          "\" does not match any computed complement genus");
    }

    for (const AdmissibleTriple& row : table.rows) {
        if (row.p != golden.p) continue;
        bool found = false;
        for (const GoldenRow& g : golden.rows)
            if (g.p == row.p && g.m == row.m && g.a == row.a) found = true;
        if (!found)
            out.push_back("unexpected computed row " + triple_label(row.p, row.m, row.a));
    }
    return out;
}

std::vector<K3Pair> load_k3_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open K3 pair file: " + path);
    json j = json::parse(in);
    std::vector<K3Pair> out;
    for (const json& r : j.at("rows")) {
        K3Pair k;
        k.m = r.at("m").get<int>();
        k.a = r.at("a").get<int>();
        k.t_expr = r.at("T").get<std::string>();
        k.s_expr = r.at("S").get<std::string>();
        k.t_genus = genus_of(lattice_from_expr(k.t_expr));
        k.s_genus = genus_of(lattice_from_expr(k.s_expr));
        out.push_back(std::move(k));
    }
    return out;
}

}  // namespace latq
