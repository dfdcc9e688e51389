// latq_cli.cpp — command-line front end for the lattice/quadratic-form library.
//
// Subcommands:
//   classify         admissible triples (p, m, a) for a given n, with optional
//                    reference-table verification (--golden) and realization
//                    corroboration against K3 pair data (--k3-data).
//   genus            rank, signature, determinant, elementary divisors,
//                    discriminant form, and Milgram residue of an expression.
//   glue             the glue cases for (n, p, m, a), with the target form
//                    computed both by the closed-form rules and as a quotient.
//   verify-isometry  order, invariant/co-invariant data, discriminant action,
//                    and spinor norm of an integer matrix on a Gram lattice.
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage or scope error.
// All numeric output is exact: integers and reduced fractions only.

#include <CLI11.hpp>
#include <json.hpp>

#include "latq/classifier.hpp"
#include "latq/isometry.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using latq::Int;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Report plumbing

struct Report {
    std::string command;  // echo of the invocation
    std::string format = "text";
    int status = 0;
    // Key/value preamble shown before the row table (text) or under "header"
    // (json); values are preformatted exact strings.
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<std::string> columns;  // column order for text/csv tables
    std::vector<ojson> rows;           // objects keyed by column name
    std::vector<std::string> notes;
};

std::string cell_text(const ojson& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

void emit_text(const Report& r, std::ostream& os) {
    os << "command: " << r.command << "\n";
    for (const auto& [k, v] : r.header) os << k << ": " << v << "\n";
    if (!r.rows.empty()) {
        std::vector<size_t> w(r.columns.size());
        for (size_t j = 0; j < r.columns.size(); ++j) w[j] = r.columns[j].size();
        std::vector<std::vector<std::string>> cells;
        for (const ojson& row : r.rows) {
            std::vector<std::string> line;
            for (size_t j = 0; j < r.columns.size(); ++j) {
                std::string s = row.contains(r.columns[j]) ? cell_text(row[r.columns[j]]) : "";
                w[j] = std::max(w[j], s.size());
                line.push_back(std::move(s));
            }
            cells.push_back(std::move(line));
        }
        os << "rows: " << r.rows.size() << "\n";
        auto pad = [&](const std::string& s, size_t j) {
            std::string out = s;
            if (j + 1 < w.size()) out.append(w[j] - s.size(), ' ');
            return out;
        };
        os << "  ";
        for (size_t j = 0; j < r.columns.size(); ++j) os << (j ? "  " : "") << pad(r.columns[j], j);
        os << "\n";
        for (const auto& line : cells) {
            os << "  ";
            for (size_t j = 0; j < line.size(); ++j) os << (j ? "  " : "") << pad(line[j], j);
            os << "\n";
        }
    }
    for (const std::string& n : r.notes) os << "note: " << n << "\n";
    os << "status: " << r.status << "\n";
}

void emit_json(const Report& r, std::ostream& os) {
    ojson doc;
    doc["command"] = r.command;
    doc["format"] = r.format;
    doc["status"] = r.status;
    ojson hdr = ojson::object();
    for (const auto& [k, v] : r.header) hdr[k] = v;
    doc["header"] = hdr;
    doc["columns"] = r.columns;
    doc["rows"] = r.rows;
    doc["notes"] = r.notes;
    os << doc.dump(2) << "\n";
}

void emit_csv(const Report& r, std::ostream& os) {
    // Cells never contain commas (exact integers, fractions, and the
    // space-separated block notation); quoting is therefore unnecessary,
    // and any stray comma is made visible instead of corrupting a column.
    auto safe = [](std::string s) {
        std::replace(s.begin(), s.end(), ',', ';');
        return s;
    };
    for (size_t j = 0; j < r.columns.size(); ++j) os << (j ? "," : "") << safe(r.columns[j]);
    os << "\n";
    for (const ojson& row : r.rows) {
        for (size_t j = 0; j < r.columns.size(); ++j) {
            std::string s = row.contains(r.columns[j]) ? cell_text(row[r.columns[j]]) : "";
            os << (j ? "," : "") << safe(s);
        }
        os << "\n";
    }
    for (const std::string& n : r.notes) std::cerr << "note: " << n << "\n";
}

int emit(const Report& r) {
    if (r.format == "json")
        emit_json(r, std::cout);
    else if (r.format == "csv")
        emit_csv(r, std::cout);
    else
        emit_text(r, std::cout);
    return r.status;
}

int usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

// ---------------------------------------------------------------------------
// Exact-value formatting

std::string sig_str(std::pair<int, int> s) {
    return "(" + std::to_string(s.first) + " " + std::to_string(s.second) + ")";
}

std::string divisors_str(const std::vector<Int>& d) {
    if (d.empty()) return "1";
    std::string out;
    for (size_t i = 0; i < d.size(); ++i) out += (i ? " " : "") + d[i].get_str();
    return out;
}

// Signature + determinant + discriminant form: the genus data, printed
// without needing a named representative.
std::string describe_genus(const latq::Genus& g) {
    Int det = g.form.group_order();
    if (g.minus % 2 == 1) det = -det;
    return "sig " + sig_str({g.plus, g.minus}) + " det " + det.get_str() + " disc " +
           latq::canonical_block_string(g.form);
}

std::string ternary_str(latq::Ternary t) {
    switch (t) {
        case latq::Ternary::Yes: return "yes";
        case latq::Ternary::No: return "no";
        default: return "unknown";
    }
}

std::string vec_str(const latq::VecZ& v) {
    std::string out = "(";
    for (size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i].get_str();
    return out + ")";
}

constexpr const char* kUncorroboratedLabel = "computed, externally uncorroborated";

// ---------------------------------------------------------------------------
// classify

struct ClassifyOpts {
    int n = 0;
    std::optional<long> p;
    std::optional<int> m, a;
    bool golden = false;
    std::string k3_path;
    long bound = 5;
    std::string format = "text";
};

int run_classify(const ClassifyOpts& o, const std::string& command) {
    Report rep;
    rep.command = command;
    rep.format = o.format;

    latq::ClassificationTable table;
    try {
        std::optional<Int> p;
        if (o.p) p = Int(*o.p);
        table = latq::enumerate_triples(o.n, p);
    } catch (const latq::ScopeError& e) {
        return usage_error(e.what());
    } catch (const std::invalid_argument& e) {
        return usage_error(e.what());
    }

    if (o.golden) {
        if (!o.p) return usage_error("--golden needs --p: reference tables are per (n, p)");
        auto ref = latq::bundled_golden_table(o.n, Int(*o.p));
        if (!ref)
            return usage_error("no bundled reference table for n = " + std::to_string(o.n) +
                               ", p = " + std::to_string(*o.p));
        std::vector<std::string> diffs = latq::diff_against_golden(table, *ref);
        if (diffs.empty()) {
            rep.notes.push_back("table matches the bundled reference (" +
                                std::to_string(ref->rows.size()) + " rows, every representative verified)");
        } else {
            for (const std::string& d : diffs) rep.notes.push_back("mismatch: " + d);
            rep.status = 1;
        }
    }

    std::vector<latq::K3Pair> pairs;
    bool k3 = !o.k3_path.empty();
    if (k3) {
        try {
            pairs = latq::load_k3_pairs(o.k3_path);
        } catch (const std::exception& e) {
            return usage_error(std::string("cannot load K3 pair data: ") + e.what());
        }
    }

    bool row_filter = o.m.has_value();
    bool skipped_natural = false;
    rep.columns = {"p", "m", "a", "alpha", "glue", "S", "T", "marker", "unique", "label"};
    if (k3) rep.columns.push_back("corroboration");

    for (const latq::AdmissibleTriple& t : table.rows) {
        if (o.m && t.m != *o.m) continue;
        if (o.a && t.a != *o.a) continue;
        ojson row;
        row["p"] = static_cast<long>(t.p.get_si());
        row["m"] = t.m;
        row["a"] = t.a;
        row["alpha"] = t.alpha;
        row["glue"] = t.glue_case;
        row["S"] = t.s_expr.empty() ? describe_genus(t.s_genus) : t.s_expr;
        row["T"] = t.t_expr.empty() ? describe_genus(t.t_genus_options.at(0)) : t.t_expr;
        row["marker"] = t.marker;
        row["unique"] = ternary_str(t.verdict.unique_in_genus);
        row["label"] = t.uncorroborated ? kUncorroboratedLabel : "";

        if (k3) {
            const latq::Genus& tg = t.t_genus_options.at(0);
            std::string corr = "marker only";
            if (t.marker == "club") {
                auto match = std::find_if(pairs.begin(), pairs.end(), [&](const latq::K3Pair& q) {
                    return q.m == t.m && q.a == t.a;
                });
                if (match == pairs.end()) {
                    corr = "FAILED: no K3 pair with (m a) = (" + std::to_string(t.m) + " " +
                           std::to_string(t.a) + ")";
                    rep.status = 1;
                } else if (latq::natural_split_check(tg, t.s_genus, o.n,
                                                     {match->t_genus, match->s_genus})) {
                    corr = "natural split of K3 pair (" + std::to_string(match->m) + " " +
                           std::to_string(match->a) + ")";
                } else {
                    corr = "FAILED: natural split check against K3 pair (" + std::to_string(match->m) +
                           " " + std::to_string(match->a) + ")";
                    rep.status = 1;
                }
            } else if (t.marker == "natural") {
                if (!row_filter) {
                    corr = "not searched (rerun with --m/--a to search for an induced vector)";
                    skipped_natural = true;
                } else {
                    corr = "FAILED: no induced vector within bound " + std::to_string(o.bound);
                    bool found = false;
                    for (const latq::K3Pair& q : pairs) {
                        if (q.m != t.m) continue;
                        latq::GramLattice ambient = latq::lattice_from_expr("U + " + q.t_expr);
                        if (ambient.rank() != tg.rank() + 1) continue;
                        auto v = latq::induced_split_vector(tg, o.n, ambient, o.bound);
                        if (v) {
                            corr = "induced vector " + vec_str(*v) + " in U + " + q.t_expr +
                                   " from K3 pair (" + std::to_string(q.m) + " " +
                                   std::to_string(q.a) + ")";
                            found = true;
                            break;
                        }
                    }
                    if (!found) rep.status = 1;
                }
            }
            row["corroboration"] = corr;
        }
        rep.rows.push_back(std::move(row));
    }

    rep.header.emplace_back("n", std::to_string(o.n));
    rep.header.emplace_back("p", o.p ? std::to_string(*o.p) : "all odd primes <= 23 in scope");
    if (!table.skipped_primes.empty()) {
        std::string s;
        for (size_t i = 0; i < table.skipped_primes.size(); ++i)
            s += (i ? " " : "") + table.skipped_primes[i].get_str();
        rep.notes.push_back("primes skipped as out of scope for this n: " + s);
    }
    bool any_uncorroborated = std::any_of(rep.rows.begin(), rep.rows.end(), [](const ojson& r) {
        return r["label"] == kUncorroboratedLabel;
    });
    if (any_uncorroborated)
        rep.notes.push_back(std::string("rows labeled \"") + kUncorroboratedLabel +
                            "\" have no bundled reference table");
    if (skipped_natural)
        rep.notes.push_back(
            "induced-vector searches run only on rows selected with --m/--a; other natural-marker "
            "rows were not searched");
    return emit(rep);
}

// ---------------------------------------------------------------------------
// genus

int run_genus(const std::string& expr, const std::string& format, const std::string& command) {
    latq::GramLattice l;
    try {
        l = latq::lattice_from_expr(expr);
    } catch (const latq::ParseError& e) {
        return usage_error(std::string("cannot parse lattice expression: ") + e.what());
    } catch (const std::invalid_argument& e) {
        return usage_error(e.what());
    }
    Int det = latq::determinant(l);
    if (det == 0) return usage_error("degenerate lattice: determinant 0 has no genus");

    latq::Genus g = latq::genus_of(l);
    Report rep;
    rep.command = command;
    rep.format = format;
    rep.columns = {"expr", "rank", "signature", "det", "elementary_divisors", "disc_form", "milgram"};
    ojson row;
    row["expr"] = latq::print_expr(latq::parse(expr));
    row["rank"] = l.rank();
    row["signature"] = sig_str({g.plus, g.minus});
    row["det"] = det.get_str();
    row["elementary_divisors"] = divisors_str(latq::elementary_divisors(g.form));
    row["disc_form"] = latq::canonical_block_string(g.form);
    row["milgram"] = latq::milgram_signature(g.form);
    rep.rows.push_back(std::move(row));
    if (det == 1 || det == -1) rep.notes.push_back("unimodular: trivial discriminant group");
    return emit(rep);
}

// ---------------------------------------------------------------------------
// glue

int run_glue(int n, long p, int m, int a, const std::string& format, const std::string& command) {
    Report rep;
    rep.command = command;
    rep.format = format;
    try {
        latq::AmbientForm amb = latq::q_l_of(n, Int(p));
        int s_minus = static_cast<int>((p - 1)) * m - 2;
        int t_minus = 22 - static_cast<int>((p - 1)) * m;
        if (s_minus < 0 || t_minus < 0)
            return usage_error("m out of range: need 2 <= (p-1)m <= 22");
        std::optional<latq::FiniteQuadraticForm> qs = latq::q_s_of(Int(p), m, a, amb.alpha);

        rep.header.emplace_back("n", std::to_string(n));
        rep.header.emplace_back("p", std::to_string(p));
        rep.header.emplace_back("m", std::to_string(m));
        rep.header.emplace_back("a", std::to_string(a));
        rep.header.emplace_back("alpha", std::to_string(amb.alpha));
        rep.header.emplace_back("beta", amb.beta.get_str());
        rep.header.emplace_back("q_L", latq::canonical_block_string(amb.full));
        rep.header.emplace_back("S_signature", sig_str({2, s_minus}));
        rep.header.emplace_back("T_signature", sig_str({1, t_minus}));

        if (!qs) {
            rep.notes.push_back(
                "no source form: length 0 cannot carry the required signature residue; zero glue "
                "cases");
            return emit(rep);
        }
        rep.header.emplace_back("q_S", latq::canonical_block_string(*qs));

        std::vector<latq::GlueCase> cases =
            latq::enumerate_glue_cases(*qs, amb.full, Int(p), amb.alpha, {{1, t_minus}});
        rep.columns = {"case", "x_order", "q_T_blocks", "q_T_quotient", "agree", "milgram", "T_signature"};
        for (const latq::GlueCase& c : cases) {
            ojson row;
            row["case"] = c.case_tag;
            row["x_order"] = c.x_order.get_str();
            row["q_T_blocks"] = latq::canonical_block_string(c.q_t_target);
            row["q_T_quotient"] = latq::canonical_block_string(c.q_t_graph);
            row["agree"] = latq::is_isometric(c.q_t_target, c.q_t_graph) ? "yes" : "NO";
            row["milgram"] = latq::milgram_signature(c.q_t_target);
            row["T_signature"] = sig_str(c.t_signature);
            rep.rows.push_back(std::move(row));
        }
        rep.notes.push_back(
            "q_T_blocks is the closed-form block computation; q_T_quotient recomputes it as the "
            "quotient of the glue group's orthogonal complement");
    } catch (const latq::ScopeError& e) {
        return usage_error(e.what());
    } catch (const std::invalid_argument& e) {
        return usage_error(e.what());
    }
    return emit(rep);
}

// ---------------------------------------------------------------------------
// verify-isometry

// Argument resolution: a value that names a readable file is replaced by the
// file's contents; the result is parsed as a JSON integer matrix when it
// starts with '[', otherwise as a lattice expression (lattice argument only).
std::string slurp_if_file(const std::string& arg) {
    std::ifstream in(arg);
    if (!in.good()) return arg;
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
}

std::optional<latq::MatZ> parse_matrix_json(const std::string& text, std::string& err) {
    ojson j = ojson::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array() || j.empty()) {
        err = "expected a JSON array of arrays of integers";
        return std::nullopt;
    }
    size_t cols = 0;
    std::vector<std::vector<long long>> data;
    for (const auto& r : j) {
        if (!r.is_array() || (cols && r.size() != cols)) {
            err = "matrix rows must be arrays of equal length";
            return std::nullopt;
        }
        cols = r.size();
        std::vector<long long> line;
        for (const auto& v : r) {
            if (!v.is_number_integer()) {
                err = "matrix entries must be integers";
                return std::nullopt;
            }
            line.push_back(v.get<long long>());
        }
        data.push_back(std::move(line));
    }
    latq::MatZ m(static_cast<int>(data.size()), static_cast<int>(cols));
    for (int i = 0; i < m.rows; ++i)
        for (int j2 = 0; j2 < m.cols; ++j2) m(i, j2) = Int(static_cast<long>(data[i][j2]));
    return m;
}

int run_verify_isometry(const std::string& lattice_arg, const std::string& matrix_arg,
                        const std::string& format, const std::string& command) {
    std::string err;
    std::string ltext = slurp_if_file(lattice_arg);
    latq::GramLattice lat;
    try {
        if (!ltext.empty() && ltext[0] == '[') {
            auto g = parse_matrix_json(ltext, err);
            if (!g) return usage_error("lattice: " + err);
            if (g->rows != g->cols) return usage_error("lattice: Gram matrix must be square");
            lat = latq::make_lattice(*g);
        } else {
            lat = latq::lattice_from_expr(ltext);
        }
    } catch (const std::exception& e) {
        return usage_error(std::string("lattice: ") + e.what());
    }
    if (latq::determinant(lat) == 0) return usage_error("lattice: degenerate Gram matrix");

    std::string mtext = slurp_if_file(matrix_arg);
    auto mat = parse_matrix_json(mtext, err);
    if (!mat) return usage_error("matrix: " + err);

    Report rep;
    rep.command = command;
    rep.format = format;

    latq::LatticeIsometry f;
    try {
        f = latq::make_isometry(lat, *mat);
    } catch (const std::invalid_argument& e) {
        std::string what = e.what();
        if (what.find("not an isometry") == std::string::npos) return usage_error("matrix: " + what);
        rep.columns = {"valid", "violation"};
        ojson row;
        row["valid"] = "no";
        row["violation"] = what;
        rep.rows.push_back(std::move(row));
        rep.notes.push_back("the matrix does not preserve the Gram pairing: " + what);
        rep.status = 1;
        return emit(rep);
    }

    auto order = latq::order_of(f, 60);
    latq::Sublattice inv = latq::invariant_lattice(f);
    latq::Sublattice coi = latq::coinvariant_lattice(f);
    auto genus_text = [](const latq::GramLattice& l) -> std::string {
        if (l.rank() == 0) return "rank 0";
        if (latq::determinant(l) == 0) return "degenerate";
        return describe_genus(latq::genus_of(l));
    };

    latq::DiscriminantAction act = latq::discriminant_action(f);
    std::string cls;
    if (act.is_identity && act.is_minus_identity)
        cls = "identity = -identity (2-elementary group)";
    else if (act.is_identity)
        cls = "identity";
    else if (act.is_minus_identity)
        cls = "-identity";
    else
        cls = "neither identity nor -identity";

    int sn = latq::spinor_norm(f);

    rep.columns = {"valid", "order", "invariant_rank", "invariant_genus", "coinvariant_rank",
                   "coinvariant_genus", "disc_action", "spinor_norm"};
    ojson row;
    row["valid"] = "yes";
    row["order"] = order ? std::to_string(*order) : "exceeds cap 60";
    row["invariant_rank"] = inv.lattice.rank();
    row["invariant_genus"] = genus_text(inv.lattice);
    row["coinvariant_rank"] = coi.lattice.rank();
    row["coinvariant_genus"] = genus_text(coi.lattice);
    row["disc_action"] = cls;
    row["spinor_norm"] = sn > 0 ? "+1" : "-1";
    rep.rows.push_back(std::move(row));
    return emit(rep);
}

}  // namespace

int main(int argc, char** argv) {
    std::string command;
    for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);

    CLI::App app{"exact lattice computations: classification, genera, glue, isometries"};
    app.require_subcommand(1);
    const std::vector<std::string> formats = {"text", "json", "csv"};

    ClassifyOpts co;
    CLI::App* classify = app.add_subcommand("classify", "admissible triples (p, m, a) for a given n");
    classify->add_option("--n", co.n, "invariant 2(n-1) selector, n >= 2")->required();
    long co_p = 0;
    CLI::Option* co_p_opt = classify->add_option("--p", co_p, "restrict to one odd prime");
    int co_m = 0, co_a = 0;
    CLI::Option* co_m_opt = classify->add_option("--m", co_m, "restrict rows to this m");
    CLI::Option* co_a_opt = classify->add_option("--a", co_a, "restrict rows to this a");
    classify->add_flag("--golden", co.golden, "verify against the bundled reference table");
    classify->add_option("--k3-data", co.k3_path, "K3 pair file for realization corroboration");
    classify->add_option("--bound", co.bound, "coordinate box bound for induced-vector searches");
    classify->add_option("--format", co.format, "text | json | csv")
        ->check(CLI::IsMember(formats));

    std::string genus_expr, genus_format = "text";
    CLI::App* genus = app.add_subcommand("genus", "invariants of a lattice expression");
    genus->add_option("expr", genus_expr, "lattice expression, e.g. \"U + 2*E8\"")->required();
    genus->add_option("--format", genus_format, "text | json | csv")->check(CLI::IsMember(formats));

    int gl_n = 0, gl_m = 0, gl_a = 0;
    long gl_p = 0;
    std::string gl_format = "text";
    CLI::App* glue = app.add_subcommand("glue", "glue cases and target forms for (n, p, m, a)");
    glue->add_option("--n", gl_n, "n >= 2")->required();
    glue->add_option("--p", gl_p, "odd prime")->required();
    glue->add_option("--m", gl_m, "m with 2 <= (p-1)m <= 22")->required();
    glue->add_option("--a", gl_a, "length of the source discriminant group")->required();
    glue->add_option("--format", gl_format, "text | json | csv")->check(CLI::IsMember(formats));

    std::string vi_lattice, vi_matrix, vi_format = "text";
    CLI::App* verify = app.add_subcommand("verify-isometry", "check a matrix against a Gram lattice");
    verify->add_option("lattice", vi_lattice, "lattice expression, or file/inline JSON Gram matrix")
        ->required();
    verify->add_option("matrix", vi_matrix, "inline JSON integer matrix, or a file holding one")
        ->required();
    verify->add_option("--format", vi_format, "text | json | csv")->check(CLI::IsMember(formats));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (classify->parsed()) {
            if (*co_p_opt) co.p = co_p;
            if (*co_m_opt) co.m = co_m;
            if (*co_a_opt) co.a = co_a;
            return run_classify(co, command);
        }
        if (genus->parsed()) return run_genus(genus_expr, genus_format, command);
        if (glue->parsed()) return run_glue(gl_n, gl_p, gl_m, gl_a, gl_format, command);
        if (verify->parsed())
            return run_verify_isometry(vi_lattice, vi_matrix, vi_format, command);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return usage_error("no subcommand given");
}
