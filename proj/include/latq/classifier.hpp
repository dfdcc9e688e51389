// classifier.hpp — admissibility decisions for triples (p, m, a) and table
// generation: which invariant/co-invariant lattice pairs (T, S) exist inside
// the rank-23 ambient lattice for a given n, with certificates.
#pragma once

#include "latq/existence.hpp"
#include "latq/glue.hpp"
#include "latq/latexpr.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace latq {

// One candidate triple with its certificate: the source genus (signature
// (2, (p-1)m - 2)), the complement genus targets (signature (1, 22-(p-1)m)),
// the glue case that produced them, and the verdict with reason tags.
struct AdmissibleTriple {
    Int p = 3;
    int m = 1;
    int a = 0;
    int alpha = 0;
    Int beta = 1;
    Genus s_genus;
    std::vector<Genus> t_genus_options;
    ExistenceVerdict verdict;  // exists == Yes means the triple is admissible
    std::string glue_case;     // "trivial-glue" | "cyclic-glue"
    std::vector<std::string> assumptions;
    bool uncorroborated = false;  // true for primes 5..19: computed, externally uncorroborated
    // Presentation data attached from bundled table metadata when available.
    std::string s_expr, t_expr;
    std::string marker = "none";  // club | natural | diamond | star | none
};

inline bool admissible(const AdmissibleTriple& t) { return t.verdict.exists == Ternary::Yes; }

struct ClassificationTable {
    int n = 2;
    std::optional<Int> p;                 // the requested prime, if any
    std::vector<AdmissibleTriple> rows;   // admissible rows, (p desc, m desc, a asc)
    std::vector<Int> skipped_primes;      // primes left out of a full scan as out of scope
};

// Decide one triple. Pipeline: range and parity screens; rank-one shortcut
// when (p-1)m = 22; otherwise source form + source existence, glue-case
// selection by the parity of m - a, and complement existence. Throws
// ScopeError when p = 2 or p^2 | 2(n-1).
AdmissibleTriple is_admissible(int n, const Int& p, int m, int a);

// Scan all triples for n (one prime, or all odd primes up to 23). When no
// prime is requested, out-of-scope primes are skipped and recorded; a
// requested out-of-scope prime throws. Attaches bundled table metadata.
ClassificationTable enumerate_triples(int n, std::optional<Int> p = std::nullopt);

// True iff the expression's lattice has the genus: signature equal and
// discriminant forms isometric.
bool verify_representative(const LatticeExpr& expr, const Genus& g);
bool verify_representative(const std::string& expr, const Genus& g);

// True iff t_genus is (K3 invariant) + <-2(n-1)> and s_genus matches the K3
// co-invariant: the split that a natural induced action produces.
bool natural_split_check(const Genus& t_genus, const Genus& s_genus, int n,
                         const std::pair<Genus, Genus>& k3_pair);

// Searches the coordinate box |c_i| <= bound of t_k3 for a primitive vector
// of square 2(n-1) whose orthogonal complement has genus t_genus; returns the
// first witness in the deterministic search order, or nullopt if the box
// holds none.
std::optional<VecZ> induced_split_vector(const Genus& t_genus, int n, const GramLattice& t_k3,
                                         long bound = 5);

struct GoldenRow {
    Int p = 3;
    int m = 1;
    int a = 0;
    std::string s_expr, t_expr;
    std::string marker = "none";
};

struct GoldenTable {
    int n = 2;
    Int p = 3;
    std::vector<GoldenRow> rows;
};

// Bundled reference data directory: LATQ_DATA_DIR environment variable if
// set, else the compile-time default.
std::string default_data_dir();

GoldenTable load_golden_table(const std::string& path);
std::optional<GoldenTable> bundled_golden_table(int n, const Int& p);

// Compare a computed table against a reference table: triple sets must agree
// exactly and every listed representative must have the computed genus.
// Attaches the reference expressions and markers onto matching rows. Returns
// human-readable mismatch descriptions; empty means a perfect match.
std::vector<std::string> diff_against_golden(ClassificationTable& table, const GoldenTable& golden);

// A K3 invariant/co-invariant pair, for natural-split corroboration.
struct K3Pair {
    int m = 1;
    int a = 0;
    std::string t_expr, s_expr;
    Genus t_genus, s_genus;
};

std::vector<K3Pair> load_k3_pairs(const std::string& path);

}  // namespace latq
