#include <doctest.h>

#include "latq/existence.hpp"
#include "latq/isometry.hpp"
#include "latq/latexpr.hpp"

#include <numeric>
#include <random>
#include <string>
#include <vector>

using namespace latq;

namespace {

LatticeIsometry rho0() {
    return make_isometry(named_lattice("A2"), MatZ{{0, -1}, {1, -1}});
}

// Reflection in the i-th basis vector of a root lattice (diagonal -2):
// integer matrix with column j equal to e_j + G(i,j) e_i.
LatticeIsometry basis_root_reflection(const GramLattice& l, int i) {
    int n = l.rank();
    REQUIRE(l.gram(i, i) == -2);
    MatZ m = MatZ::identity(n);
    for (int j = 0; j < n; ++j) m(i, j) += l.gram(i, j);
    return make_isometry(l, std::move(m));
}

LatticeIsometry compose(const LatticeIsometry& f, const LatticeIsometry& g) {
    return make_isometry(f.lattice, mul(f.matrix, g.matrix));
}

// Matrix of the reflection in r.vector, rebuilt independently of the library
// internals: x ↦ x − 2 B(x,v)/B(v,v) · v.
MatQ reflection_as_matrix(const GramLattice& l, const Reflection& r) {
    int n = l.rank();
    MatQ gram = to_rational(l.gram);
    std::vector<Rat> gv = mul_vec(gram, r.vector);
    MatQ m(n, n);
    for (int j = 0; j < n; ++j) {
        Rat c = Rat(2) * gv[j] / r.square;
        for (int i = 0; i < n; ++i) m(i, j) = (i == j ? Rat(1) : Rat(0)) - c * r.vector[i];
    }
    return m;
}

MatQ compose_reflections(const GramLattice& l, const std::vector<Reflection>& refs) {
    MatQ prod = MatQ::identity(l.rank());
    for (const Reflection& r : refs) prod = mul(prod, reflection_as_matrix(l, r));
    return prod;
}

bool orthogonal_sublattices(const GramLattice& ambient, const Sublattice& s,
                            const Sublattice& t) {
    MatZ pairing = mul(mul(transpose(s.basis), ambient.gram), t.basis);
    for (int i = 0; i < pairing.rows; ++i)
        for (int j = 0; j < pairing.cols; ++j)
            if (pairing(i, j) != 0) return false;
    return true;
}

}  // namespace

TEST_CASE("construction validates the isometry condition entrywise") {
    CHECK_NOTHROW(rho0());
    CHECK_NOTHROW(make_isometry(named_lattice("U"), MatZ{{0, 1}, {1, 0}}));

    try {
        make_isometry(named_lattice("U"), MatZ{{1, 0}, {0, 2}});
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        CHECK(msg.find("(0,1)") != std::string::npos);
        CHECK(msg.find("= 2") != std::string::npos);
        CHECK(msg.find("expected") != std::string::npos);
    }

    CHECK_THROWS_AS(make_isometry(named_lattice("U"), MatZ{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}),
                    std::invalid_argument);
    MatZ wide(2, 3);
    CHECK_THROWS_AS(make_isometry(named_lattice("U"), wide), std::invalid_argument);
    CHECK_THROWS_AS(make_isometry(named_lattice("A2"), MatZ{{1, 1}, {0, 1}}),
                    std::invalid_argument);
}

TEST_CASE("order computation with cap") {
    CHECK(order_of(rho0()) == 3);
    CHECK(order_of(identity_isometry(named_lattice("E8"))) == 1);
    CHECK(order_of(negation_isometry(named_lattice("U"))) == 2);
    CHECK(order_of(rho0(), 2) == std::nullopt);
    CHECK(order_of(rho0(), 3) == 3);

    // -rho0 has order lcm(2,3) = 6.
    LatticeIsometry six = compose(negation_isometry(named_lattice("A2")), rho0());
    CHECK(order_of(six) == 6);
    CHECK(order_of(six, 5) == std::nullopt);
    CHECK_THROWS_AS(order_of(rho0(), 0), std::invalid_argument);
}

TEST_CASE("invariant and co-invariant sublattices") {
    LatticeIsometry r = rho0();
    CHECK(invariant_lattice(r).lattice.rank() == 0);
    Sublattice co = coinvariant_lattice(r);
    CHECK(co.lattice.rank() == 2);
    CHECK(determinant(co.lattice) == 3);
    CHECK(same_genus(genus_of(co.lattice), genus_of(named_lattice("A2"))));

    LatticeIsometry id8 = identity_isometry(named_lattice("E8"));
    CHECK(invariant_lattice(id8).lattice.gram == named_lattice("E8").gram);
    CHECK(coinvariant_lattice(id8).lattice.rank() == 0);

    // Block isometry: the fixed part of id ⊕ rho0 is the rank-one summand.
    LatticeIsometry block =
        direct_sum_isometry(identity_isometry(rank_one_lattice(2)), rho0());
    Sublattice inv = invariant_lattice(block);
    CHECK(inv.lattice.rank() == 1);
    CHECK(determinant(inv.lattice) == 2);
    Sublattice coinv = coinvariant_lattice(block);
    CHECK(same_genus(genus_of(coinv.lattice), genus_of(named_lattice("A2"))));
    CHECK(orthogonal_sublattices(block.lattice, inv, coinv));
    CHECK(inv.lattice.rank() + coinv.lattice.rank() == block.lattice.rank());

    // Swapping the two summands of U ⊕ U fixes the diagonal copy U(2).
    GramLattice uu = direct_sum(named_lattice("U"), named_lattice("U"));
    MatZ swap(4, 4);
    swap(0, 2) = swap(2, 0) = swap(1, 3) = swap(3, 1) = 1;
    LatticeIsometry s = make_isometry(uu, swap);
    Sublattice sinv = invariant_lattice(s);
    Sublattice sco = coinvariant_lattice(s);
    CHECK(sinv.lattice.rank() == 2);
    CHECK(same_genus(genus_of(sinv.lattice), genus_of(lattice_from_expr("U(2)"))));
    CHECK(same_genus(genus_of(sco.lattice), genus_of(lattice_from_expr("U(2)"))));
    CHECK(orthogonal_sublattices(uu, sinv, sco));

    CHECK(invariant_lattice(negation_isometry(named_lattice("E6"))).lattice.rank() == 0);
    CHECK(coinvariant_lattice(negation_isometry(named_lattice("E6"))).lattice.gram ==
          named_lattice("E6").gram);
}

TEST_CASE("induced action on the discriminant group") {
    DiscriminantAction a = discriminant_action(rho0());
    CHECK(a.is_identity);
    CHECK(!a.is_minus_identity);  // -id differs from id on Z/3

    DiscriminantAction b = discriminant_action(negation_isometry(rank_one_lattice(-6)));
    CHECK(!b.is_identity);
    CHECK(b.is_minus_identity);
    REQUIRE(b.images.size() == 1);
    CHECK(b.images[0] == VecZ{Int(5)});

    // E8 is unimodular: every isometry acts as the identity on the trivial group.
    DiscriminantAction c = discriminant_action(basis_root_reflection(named_lattice("E8"), 0));
    CHECK(c.is_identity);
    CHECK(c.is_minus_identity);
    CHECK(c.images.empty());

    // On a 2-elementary group the two flags coincide.
    DiscriminantAction d = discriminant_action(negation_isometry(named_lattice("U")));
    CHECK(d.is_identity);
    CHECK(d.is_minus_identity);

    // Swapping the hyperbolic basis of U(3) is neither +id nor -id on (Z/3)^2.
    LatticeIsometry sw = make_isometry(lattice_from_expr("U(3)"), MatZ{{0, 1}, {1, 0}});
    DiscriminantAction e = discriminant_action(sw);
    CHECK(!e.is_identity);
    CHECK(!e.is_minus_identity);
}

TEST_CASE("odd order with trivial fixed part never induces minus the identity") {
    std::vector<LatticeIsometry> fixtures;
    fixtures.push_back(rho0());
    fixtures.push_back(direct_sum_isometry(rho0(), rho0()));
    LatticeIsometry rr = compose(rho0(), rho0());  // order 3 again
    fixtures.push_back(rr);
    for (const LatticeIsometry& f : fixtures) {
        std::optional<int> k = order_of(f);
        REQUIRE(k.has_value());
        REQUIRE(*k % 2 == 1);
        REQUIRE(invariant_lattice(f).lattice.rank() == 0);
        DiscriminantAction act = discriminant_action(f);
        CHECK(!(act.is_minus_identity && !act.is_identity));
    }
}

TEST_CASE("spinor norms of the named fixtures") {
    CHECK(spinor_norm(rho0()) == 1);
    CHECK(spinor_norm(identity_isometry(named_lattice("U"))) == 1);
    CHECK(spinor_norm(negation_isometry(named_lattice("U"))) == -1);
    CHECK(spinor_norm(negation_isometry(rank_one_lattice(-2))) == 1);
    CHECK(spinor_norm(negation_isometry(rank_one_lattice(2))) == -1);
    CHECK(spinor_norm(make_isometry(named_lattice("U"), MatZ{{0, 1}, {1, 0}})) == 1);

    // Negation has spinor norm (-1)^(positive part of the signature).
    for (const char* name : {"A2", "E6", "E8", "U", "H5", "K23", "Omega"}) {
        CAPTURE(name);
        GramLattice l = named_lattice(name);
        int plus = signature(l).first;
        CHECK(spinor_norm(negation_isometry(l)) == (plus % 2 == 1 ? -1 : 1));
    }

    // Every isometry of a negative definite lattice has spinor norm +1.
    for (const char* name : {"A2", "A3", "E6", "E8"}) {
        CAPTURE(name);
        GramLattice l = named_lattice(name);
        LatticeIsometry w = basis_root_reflection(l, 0);
        w = compose(w, basis_root_reflection(l, l.rank() - 1));
        w = compose(w, basis_root_reflection(l, 1));
        CHECK(spinor_norm(w) == 1);
        CHECK(spinor_norm(negation_isometry(l)) == 1);
        CHECK(spinor_norm(compose(negation_isometry(l), w)) == 1);
    }

    CHECK_THROWS_AS(spinor_norm(make_isometry(make_lattice(MatZ{{0}}), MatZ{{1}})),
                    std::domain_error);
}

TEST_CASE("reflection factorizations reconstruct the isometry for any pivot order") {
    std::vector<LatticeIsometry> fixtures;
    fixtures.push_back(rho0());
    fixtures.push_back(negation_isometry(named_lattice("U")));
    fixtures.push_back(make_isometry(lattice_from_expr("U(3)"), MatZ{{0, 1}, {1, 0}}));
    fixtures.push_back(compose(basis_root_reflection(named_lattice("E8"), 0),
                               basis_root_reflection(named_lattice("E8"), 3)));
    fixtures.push_back(negation_isometry(lattice_from_expr("U + A2")));
    fixtures.push_back(identity_isometry(named_lattice("H5")));

    for (const LatticeIsometry& f : fixtures) {
        int n = f.lattice.rank();
        std::vector<int> forward(n), backward(n);
        std::iota(forward.begin(), forward.end(), 0);
        backward = forward;
        std::reverse(backward.begin(), backward.end());

        std::vector<Reflection> r1 = reflection_factorization(f, forward);
        std::vector<Reflection> r2 = reflection_factorization(f, backward);
        for (const Reflection& r : r1) CHECK(r.square != 0);
        for (const Reflection& r : r2) CHECK(r.square != 0);
        CHECK(compose_reflections(f.lattice, r1) == to_rational(f.matrix));
        CHECK(compose_reflections(f.lattice, r2) == to_rational(f.matrix));
        CHECK(r1.size() % 2 == r2.size() % 2);  // parity = det sign, order-independent

        int s1 = 1, s2 = 1;
        for (const Reflection& r : r1)
            if (-r.square / 2 < 0) s1 = -s1;
        for (const Reflection& r : r2)
            if (-r.square / 2 < 0) s2 = -s2;
        CHECK(s1 == s2);
        CHECK(s1 == spinor_norm(f));
    }

    CHECK(reflection_factorization(identity_isometry(named_lattice("E8"))).empty());
    CHECK_THROWS_AS(reflection_factorization(rho0(), {0, 0}), std::invalid_argument);
}

TEST_CASE("direct sums: spinor norm multiplies, order is the lcm, invariants add") {
    std::mt19937 rng(20250819);
    struct Entry {
        std::string name;
        LatticeIsometry f;
    };
    std::vector<Entry> pool;
    for (const char* name : {"A2", "A3", "E6"}) {
        GramLattice l = named_lattice(name);
        std::uniform_int_distribution<int> pick(0, l.rank() - 1);
        for (int copy = 0; copy < 3; ++copy) {
            LatticeIsometry w = identity_isometry(l);
            int len = 1 + static_cast<int>(rng() % 3);
            for (int t = 0; t < len; ++t) w = compose(w, basis_root_reflection(l, pick(rng)));
            if (rng() % 2 == 0) w = compose(negation_isometry(l), w);
            pool.push_back({name, w});
        }
    }
    pool.push_back({"U", negation_isometry(named_lattice("U"))});
    pool.push_back({"U", make_isometry(named_lattice("U"), MatZ{{0, 1}, {1, 0}})});
    pool.push_back({"U", make_isometry(named_lattice("U"), MatZ{{0, -1}, {-1, 0}})});
    pool.push_back({"<2>", negation_isometry(rank_one_lattice(2))});
    pool.push_back({"<-6>", negation_isometry(rank_one_lattice(-6))});
    pool.push_back({"H5", negation_isometry(named_lattice("H5"))});
    pool.push_back({"A2", rho0()});

    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    for (int trial = 0; trial < 20; ++trial) {
        const Entry& a = pool[pick(rng)];
        const Entry& b = pool[pick(rng)];
        CAPTURE(trial);
        CAPTURE(a.name);
        CAPTURE(b.name);
        LatticeIsometry sum = direct_sum_isometry(a.f, b.f);
        CHECK(spinor_norm(sum) == spinor_norm(a.f) * spinor_norm(b.f));

        std::optional<int> oa = order_of(a.f, 3600);
        std::optional<int> ob = order_of(b.f, 3600);
        REQUIRE(oa.has_value());
        REQUIRE(ob.has_value());
        CHECK(order_of(sum, 3600) == std::lcm(*oa, *ob));

        Sublattice ia = invariant_lattice(a.f);
        Sublattice ib = invariant_lattice(b.f);
        Sublattice is = invariant_lattice(sum);
        CHECK(is.lattice.rank() == ia.lattice.rank() + ib.lattice.rank());
        CHECK(determinant(is.lattice) == determinant(ia.lattice) * determinant(ib.lattice));
        Sublattice cs = coinvariant_lattice(sum);
        CHECK(orthogonal_sublattices(sum.lattice, is, cs));
        CHECK(is.lattice.rank() + cs.lattice.rank() == sum.lattice.rank());
    }
}
