#include <doctest.h>

#include "latq/glue.hpp"
#include "latq/latexpr.hpp"

#include <string>
#include <vector>

using namespace latq;

namespace {

FiniteQuadraticForm disc_of(const std::string& expr) {
    return discriminant_form(lattice_from_expr(expr));
}

FiniteQuadraticForm w_pow(const Int& p, int plus_count, int minus_count) {
    FiniteQuadraticForm f;
    for (int i = 0; i < plus_count; ++i) f = orthogonal_sum(f, w_block(p, 1, +1));
    for (int i = 0; i < minus_count; ++i) f = orthogonal_sum(f, w_block(p, 1, -1));
    return f;
}

}  // namespace

TEST_CASE("ambient cyclic form: order, p-valuation, and CRT split") {
    AmbientForm a43 = q_l_of(4, 3);
    CHECK(a43.alpha == 1);
    CHECK(a43.beta == 2);
    CHECK(a43.eps_p == 1);  // (-2 | 3) = (1 | 3) = +1
    CHECK(a43.full == cyclic_form(6, make_rat(-1, 6)));
    CHECK(is_isometric(a43.p_block, w_block(3, 1, +1)));
    CHECK(is_isometric(a43.beta_block, cyclic_form(2, make_rat(1, 2))));
    CHECK(is_isometric(a43.full, orthogonal_sum(a43.p_block, a43.beta_block)));

    AmbientForm a33 = q_l_of(3, 3);
    CHECK(a33.alpha == 0);
    CHECK(a33.beta == 4);
    CHECK(a33.p_block.ngens() == 0);
    CHECK(a33.beta_block == a33.full);
    CHECK(is_isometric(a33.full, cyclic_form(4, make_rat(-1, 4))));
    CHECK(a33.eps_p == -1);  // (-4 | 3) = (2 | 3) = -1

    AmbientForm a2423 = q_l_of(24, 23);
    CHECK(a2423.alpha == 1);
    CHECK(a2423.beta == 2);
    CHECK(a2423.eps_p == -1);  // (-2 | 23) = -1
    CHECK(is_isometric(a2423.p_block, w_block(23, 1, -1)));
    CHECK(is_isometric(a2423.full, orthogonal_sum(a2423.p_block, a2423.beta_block)));

    // The p-block's type always equals eps_p.
    for (int n = 2; n <= 30; ++n) {
        for (Int p : {Int(3), Int(5), Int(7), Int(23)}) {
            if (valuation(2 * Int(n - 1), p) >= 2) {
                CHECK_THROWS_AS(q_l_of(n, p), ScopeError);
                continue;
            }
            AmbientForm amb = q_l_of(n, p);
            CHECK(is_isometric(amb.full, orthogonal_sum(amb.p_block, amb.beta_block)));
            if (amb.alpha == 1) {
                std::vector<WBlockEntry> nf = odd_normal_form(amb.p_block, p);
                REQUIRE(nf.size() == 1);
                CHECK(nf[0].eps == amb.eps_p);
            }
        }
    }
}

TEST_CASE("ambient cyclic form: rejected inputs") {
    CHECK_THROWS_AS(q_l_of(10, 3), ScopeError);   // 2*9 = 18 = 2*3^2
    CHECK_THROWS_AS(q_l_of(4, 2), ScopeError);    // only odd p supported
    CHECK_THROWS_AS(q_l_of(1, 3), std::invalid_argument);
    CHECK_THROWS_AS(q_l_of(4, 9), std::invalid_argument);
    CHECK_THROWS_AS(q_l_of(4, -3), std::invalid_argument);
}

TEST_CASE("source form: block pattern matches discriminants of table representatives") {
    struct Row {
        Int p;
        int m, a, alpha;
        std::string s_expr;
    };
    std::vector<Row> rows = {
        {3, 11, 1, 0, "2*U + 2*E8 + A2"},
        {3, 11, 0, 1, "2*U + 2*E8 + A2"},
        {3, 10, 2, 0, "U + U(3) + 2*E8"},
        {3, 10, 1, 1, "U + U(3) + 2*E8"},
        {3, 9, 5, 0, "2*U(3) + E6 + E8"},
        {3, 7, 7, 0, "U + U(3) + 5*A2"},
        {3, 7, 4, 1, "2*U + 5*A2"},
        {3, 6, 6, 0, "U + U(3) + 4*A2"},
        {3, 2, 0, 0, "2*U"},
        {23, 1, 1, 0, "2*U + 2*E8 + K23"},
        {23, 1, 0, 1, "2*U + 2*E8 + K23"},
        {5, 3, 1, 0, "2*U + H5"},
    };
    for (const Row& r : rows) {
        CAPTURE(r.s_expr);
        std::optional<FiniteQuadraticForm> q = q_s_of(r.p, r.m, r.a, r.alpha);
        REQUIRE(q.has_value());
        CHECK(is_isometric(*q, disc_of(r.s_expr)));
    }
}

TEST_CASE("source form: explicit small patterns") {
    CHECK(q_s_of(3, 10, 0, 0).value().ngens() == 0);
    CHECK(is_isometric(q_s_of(3, 10, 2, 0).value(), w_pow(3, 1, 1)));
    CHECK(is_isometric(q_s_of(3, 9, 5, 0).value(), w_pow(3, 4, 1)));
    CHECK(is_isometric(q_s_of(3, 11, 1, 0).value(), w_pow(3, 1, 0)));
    CHECK(is_isometric(q_s_of(23, 1, 1, 0).value(), w_pow(23, 0, 1)));
    CHECK(is_isometric(q_s_of(23, 1, 0, 1).value(), w_pow(23, 0, 1)));
    CHECK(is_isometric(q_s_of(3, 9, 0, 1).value(), w_pow(3, 0, 1)));
    // The length-zero slot of the minus pattern has no representative.
    CHECK(!q_s_of(3, 4, 0, 0).has_value());
    CHECK(!q_s_of(3, 8, 0, 0).has_value());
}

TEST_CASE("source form: rejected inputs") {
    CHECK_THROWS_AS(q_s_of(3, 11, 0, 0), std::invalid_argument);  // parity needs alpha = 1
    CHECK_THROWS_AS(q_s_of(3, 12, 0, 0), std::invalid_argument);  // (p-1)m > 22
    CHECK_THROWS_AS(q_s_of(13, 2, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(q_s_of(5, 5, 6, 0), std::invalid_argument);   // a > m
    CHECK_THROWS_AS(q_s_of(3, 5, -1, 0), std::invalid_argument);
    CHECK_THROWS_AS(q_s_of(3, 5, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(q_s_of(2, 5, 1, 0), ScopeError);
    CHECK_THROWS_AS(q_s_of(9, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("glue cases: valuation-zero ambient gives the direct-sum case only") {
    AmbientForm amb = q_l_of(3, 3);
    FiniteQuadraticForm q_s = q_s_of(3, 9, 3, 0).value();
    std::vector<GlueCase> cases = enumerate_glue_cases(q_s, amb.full, 3, 0, {{1, 4}});
    REQUIRE(cases.size() == 1);
    CHECK(cases[0].case_tag == "trivial-glue");
    CHECK(cases[0].x_order == 1);
    CHECK(cases[0].t_signature == std::pair<int, int>{1, 4});
    CHECK(is_isometric(cases[0].q_t_target, disc_of("U(3) + A2 + <-4>")));
}

TEST_CASE("glue cases: order-p graph drops one ambient-type block") {
    AmbientForm amb = q_l_of(4, 3);

    SUBCASE("two blocks, a = 1 and a = 2 share the source form") {
        FiniteQuadraticForm q_s = q_s_of(3, 10, 1, 1).value();
        CHECK(q_s == q_s_of(3, 10, 2, 1).value());
        std::vector<GlueCase> cases = enumerate_glue_cases(q_s, amb.full, 3, 1, {{1, 2}});
        REQUIRE(cases.size() == 2);
        CHECK(cases[0].case_tag == "trivial-glue");
        CHECK(is_isometric(cases[0].q_t_target, disc_of("U(3) + <-6>")));
        CHECK(cases[1].case_tag == "cyclic-glue");
        CHECK(cases[1].x_order == 3);
        CHECK(cases[1].t_signature == std::pair<int, int>{1, 2});
        CHECK(is_isometric(cases[1].q_t_target, disc_of("U + <-6>")));
    }

    SUBCASE("length one, matching type: the graph case reaches a unimodular complement") {
        FiniteQuadraticForm q_s = q_s_of(3, 11, 0, 1).value();
        std::vector<GlueCase> cases = enumerate_glue_cases(q_s, amb.full, 3, 1, {{1, 0}});
        REQUIRE(cases.size() == 2);
        CHECK(is_isometric(cases[1].q_t_target, disc_of("<2>")));
    }

    SUBCASE("length one, opposite type: no graph case") {
        FiniteQuadraticForm q_s = q_s_of(3, 9, 0, 1).value();  // lone minus block
        std::vector<GlueCase> cases = enumerate_glue_cases(q_s, amb.full, 3, 1);
        REQUIRE(cases.size() == 1);
        CHECK(cases[0].case_tag == "trivial-glue");
        CHECK(cases[0].t_signature == std::pair<int, int>{0, 0});
    }

    SUBCASE("five plus blocks") {
        FiniteQuadraticForm q_s = q_s_of(3, 7, 4, 1).value();
        std::vector<GlueCase> cases = enumerate_glue_cases(q_s, amb.full, 3, 1);
        REQUIRE(cases.size() == 2);
        CHECK(is_isometric(cases[1].q_t_target, disc_of("U + 3*A2 + <-6>")));
    }

    SUBCASE("all-plus source with minus-type ambient block trades a pair") {
        AmbientForm amb5 = q_l_of(6, 5);  // d = 10, beta = 2, (-2 | 5) = -1
        CHECK(amb5.alpha == 1);
        CHECK(amb5.eps_p == -1);
        FiniteQuadraticForm q_s = w_pow(5, 2, 0);
        std::vector<GlueCase> cases = enumerate_glue_cases(q_s, amb5.full, 5, 1);
        REQUIRE(cases.size() == 2);
        // Remainder after the trade: one plus block becomes a minus block.
        FiniteQuadraticForm expect =
            orthogonal_sum(negate(w_block(5, 1, -1)), cyclic_form(2, make_rat(3, 2)));
        CHECK(is_isometric(cases[1].q_t_target, expect));
    }
}

TEST_CASE("glue cases: twenty-three adic extreme rows") {
    AmbientForm amb = q_l_of(24, 23);
    FiniteQuadraticForm q_s = q_s_of(23, 1, 0, 1).value();
    std::vector<GlueCase> cases = enumerate_glue_cases(q_s, amb.full, 23, 1);
    REQUIRE(cases.size() == 2);  // lone minus block, ambient type minus
    CHECK(is_isometric(cases[1].q_t_target, disc_of("<2>")));

    AmbientForm amb3 = q_l_of(3, 23);
    FiniteQuadraticForm q_s3 = q_s_of(23, 1, 1, 0).value();
    std::vector<GlueCase> cases3 = enumerate_glue_cases(q_s3, amb3.full, 23, 0);
    REQUIRE(cases3.size() == 1);
    CHECK(is_isometric(cases3[0].q_t_target, disc_of("<92>")));
}

TEST_CASE("glue cases: discriminant bookkeeping on every emitted case") {
    struct Fixture {
        Int p;
        int m, a, alpha, n;
    };
    std::vector<Fixture> fx = {
        {3, 10, 1, 1, 4}, {3, 9, 2, 1, 4}, {3, 7, 4, 1, 4}, {3, 5, 2, 1, 4},
        {3, 9, 3, 0, 3},  {3, 6, 4, 0, 3}, {23, 1, 0, 1, 24}, {23, 1, 1, 0, 2},
    };
    for (const Fixture& f : fx) {
        CAPTURE(f.m);
        CAPTURE(f.a);
        AmbientForm amb = q_l_of(f.n, f.p);
        FiniteQuadraticForm q_s = q_s_of(f.p, f.m, f.a, f.alpha).value();
        std::vector<GlueCase> cases = enumerate_glue_cases(q_s, amb.full, f.p, f.alpha);
        for (const GlueCase& c : cases) {
            // |A_T| * |glue|^2 = |A_S| * |A_L|
            CHECK(c.q_t_target.group_order() * c.x_order * c.x_order ==
                  q_s.group_order() * amb.full.group_order());
            // Signature additivity mod 8 survives the graph quotient.
            int want = static_cast<int>(
                ((milgram_signature(amb.full) - milgram_signature(q_s)) % 8 + 8) % 8);
            CHECK(milgram_signature(c.q_t_target) == want);
            CHECK(is_nondegenerate(c.q_t_target));
        }
    }
}

TEST_CASE("glue cases: rejected inputs") {
    FiniteQuadraticForm q_s = w_pow(3, 2, 0);
    FiniteQuadraticForm q_l = cyclic_form(6, make_rat(-1, 6));
    CHECK_THROWS_AS(enumerate_glue_cases(q_s, orthogonal_sum(q_l, q_l), 3, 1),
                    std::invalid_argument);  // ambient not cyclic
    CHECK_THROWS_AS(enumerate_glue_cases(disc_of("U(3) + <-4>"), q_l, 3, 1),
                    std::invalid_argument);  // source not p-elementary
    CHECK_THROWS_AS(enumerate_glue_cases(q_s, cyclic_form(4, make_rat(-1, 4)), 3, 1),
                    std::invalid_argument);  // ambient valuation is 0, not 1
    CHECK_THROWS_AS(enumerate_glue_cases(q_s, q_l, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_glue_cases(q_s, q_l, 2, 1), ScopeError);
}

TEST_CASE("isotropic graph quotient: rank-one source against two plus blocks") {
    // A cyclic order-6 form glued along an order-3 graph into two plus blocks
    // leaves a cyclic order-6 quotient.
    FiniteQuadraticForm a6 = discriminant_form(rank_one_lattice(6));
    CHECK(a6 == cyclic_form(6, make_rat(1, 6)));
    FiniteQuadraticForm big = orthogonal_sum(negate(a6), w_pow(3, 2, 0));
    MatZ gamma(3, 1);
    gamma(0, 0) = 2;
    gamma(1, 0) = 1;
    gamma(2, 0) = 1;
    FiniteQuadraticForm quot = isotropic_quotient(big, gamma);
    CHECK(is_isometric(quot, cyclic_form(6, make_rat(7, 6))));
}

TEST_CASE("rank-one rows: the four populated corners") {
    SUBCASE("n = 2, p = 3") {
        std::vector<RankOneCase> rows = rank_one_cases(2, 3);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].p == 3);
        CHECK(rows[0].m == 11);
        CHECK(rows[0].a == 1);
        CHECK(rows[0].alpha == 0);
        CHECK(rows[0].t_square == 6);
        CHECK(rows[0].s_expr == "2*U + 2*E8 + A2");
        CHECK(same_genus(rows[0].t_genus, genus_of(rank_one_lattice(6))));
        CHECK(same_genus(rows[0].s_genus, genus_of(lattice_from_expr(rows[0].s_expr))));
        CHECK(rows[0].s_genus.plus == 2);
        CHECK(rows[0].s_genus.minus == 20);
    }
    SUBCASE("n = 3, p = 3 is empty") { CHECK(rank_one_cases(3, 3).empty()); }
    SUBCASE("n = 5, p = 3 is empty") { CHECK(rank_one_cases(5, 3).empty()); }
    SUBCASE("n = 4, p = 3") {
        std::vector<RankOneCase> rows = rank_one_cases(4, 3);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].a == 0);
        CHECK(rows[0].alpha == 1);
        CHECK(rows[0].t_square == 2);
        CHECK(same_genus(rows[0].t_genus, genus_of(rank_one_lattice(2))));
    }
    SUBCASE("p = 23 across n") {
        CHECK(rank_one_cases(2, 23).at(0).t_square == 46);
        CHECK(rank_one_cases(3, 23).at(0).t_square == 92);
        CHECK(rank_one_cases(4, 23).at(0).t_square == 138);
        std::vector<RankOneCase> far = rank_one_cases(24, 23);
        REQUIRE(far.size() == 1);
        CHECK(far[0].a == 0);
        CHECK(far[0].alpha == 1);
        CHECK(far[0].t_square == 2);
        CHECK(far[0].s_expr == "2*U + 2*E8 + K23");
        CHECK(far[0].m == 1);
    }
    SUBCASE("other primes never qualify") {
        CHECK(rank_one_cases(2, 5).empty());
        CHECK(rank_one_cases(2, 7).empty());
        CHECK(rank_one_cases(2, 11).empty());
        CHECK(rank_one_cases(2, 13).empty());
    }
    SUBCASE("scope and argument errors") {
        CHECK_THROWS_AS(rank_one_cases(10, 3), ScopeError);  // 2*9 has 3-valuation 2
        CHECK_THROWS_AS(rank_one_cases(4, 2), ScopeError);
        CHECK_THROWS_AS(rank_one_cases(4, 9), std::invalid_argument);
        CHECK_THROWS_AS(rank_one_cases(1, 3), std::invalid_argument);
    }
}

TEST_CASE("rank-one rows: emitted genera are realizable") {
    for (int n : {2, 4, 6, 7, 8, 12, 14, 24}) {
        for (Int p : {Int(3), Int(23)}) {
            if (valuation(2 * Int(n - 1), p) >= 2) continue;
            for (const RankOneCase& row : rank_one_cases(n, p)) {
                CAPTURE(n);
                CAPTURE(row.t_square.get_str());
                ExistenceVerdict vt = even_lattice_exists(row.t_genus);
                CHECK(vt.exists == Ternary::Yes);
                ExistenceVerdict vs = even_lattice_exists(row.s_genus);
                CHECK(vs.exists == Ternary::Yes);
                CHECK(row.t_square > 0);
                CHECK(fmod(row.t_square, 2) == 0);
            }
        }
    }
}
