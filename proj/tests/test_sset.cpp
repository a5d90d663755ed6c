#include <catch2/catch_amalgamated.hpp>

#include "kanforge/oracle.hpp"
#include "kanforge/sset.hpp"

using namespace kanforge;

TEST_CASE("standard simplex level sizes match the closed formulas") {
    for (int n = 0; n <= 3; ++n) {
        SSetPtr dn = standard_simplex(n, 3);
        for (int m = 0; m <= 3; ++m) {
            CHECK(dn->size(m) == oracle::standard_simplex_level_count(n, m));
            long long nd = static_cast<long long>(dn->nondegenerate_ids(m).size());
            CHECK(nd == oracle::standard_simplex_nondeg_count(n, m));
        }
    }

    SECTION("frozen values") {
        SSetPtr d1 = standard_simplex(1, 3);
        CHECK(d1->size(0) == 2);
        CHECK(d1->size(1) == 3);
        CHECK(d1->size(2) == 4);
        CHECK(d1->size(3) == 5);
        SSetPtr d2 = standard_simplex(2, 3);
        CHECK(d2->nondegenerate_ids(0).size() == 3);
        CHECK(d2->nondegenerate_ids(1).size() == 3);
        CHECK(d2->nondegenerate_ids(2).size() == 1);
        CHECK(d2->nondegenerate_ids(3).size() == 0);
    }
}

TEST_CASE("simplex ids are ranks of their vertex sequences") {
    SSetPtr d2 = standard_simplex(2, 3);
    CHECK(standard_simplex_seq(2, 1, 0) == MonotoneMap{0, 0});
    CHECK(standard_simplex_seq(2, 1, 1) == MonotoneMap{0, 1});
    CHECK(standard_simplex_seq(2, 1, 5) == MonotoneMap{2, 2});
    CHECK(standard_simplex_id(2, {0, 1, 2}) == 4);
    // d_i drops vertex i of the sequence
    int top = standard_simplex_id(2, {0, 1, 2});
    CHECK(d2->face(2, 0, top) == standard_simplex_id(2, {1, 2}));
    CHECK(d2->face(2, 1, top) == standard_simplex_id(2, {0, 2}));
    CHECK(d2->face(2, 2, top) == standard_simplex_id(2, {0, 1}));
}

TEST_CASE("Eilenberg-Zilber normal forms are computed") {
    SSetPtr d1 = standard_simplex(1, 3);
    const int v0 = standard_simplex_id(1, {0});
    const int v1 = standard_simplex_id(1, {1});
    const int e01 = standard_simplex_id(1, {0, 1});

    const EzForm& e000 = d1->ez(2, standard_simplex_id(1, {0, 0, 0}));
    CHECK(e000.base_level == 0);
    CHECK(e000.base_id == v0);
    CHECK(e000.word == std::vector<int>{1, 0});

    const EzForm& e001 = d1->ez(2, standard_simplex_id(1, {0, 0, 1}));
    CHECK(e001.base_level == 1);
    CHECK(e001.base_id == e01);
    CHECK(e001.word == std::vector<int>{0});

    const EzForm& e011 = d1->ez(2, standard_simplex_id(1, {0, 1, 1}));
    CHECK(e011.base_level == 1);
    CHECK(e011.base_id == e01);
    CHECK(e011.word == std::vector<int>{1});

    const EzForm& e111 = d1->ez(2, standard_simplex_id(1, {1, 1, 1}));
    CHECK(e111.base_level == 0);
    CHECK(e111.base_id == v1);
    CHECK(e111.word == std::vector<int>{1, 0});

    SECTION("words are strictly decreasing and reproduce the simplex") {
        for (int n = 0; n <= 3; ++n)
            for (int id = 0; id < d1->size(n); ++id) {
                const EzForm& e = d1->ez(n, id);
                CHECK(d1->is_nondegenerate(e.base_level, e.base_id));
                for (std::size_t i = 0; i + 1 < e.word.size(); ++i)
                    CHECK(e.word[i] > e.word[i + 1]);
                int cur = e.base_id, lvl = e.base_level;
                for (auto it = e.word.rbegin(); it != e.word.rend(); ++it) {
                    cur = d1->degen(lvl, *it, cur);
                    ++lvl;
                }
                CHECK(lvl == n);
                CHECK(cur == id);
            }
    }
}

TEST_CASE("operator action agrees with sequence composition on Delta[n]") {
    for (int n = 1; n <= 3; ++n) {
        SSetPtr dn = standard_simplex(n, 3);
        for (int lvl = 0; lvl <= 3; ++lvl)
            for (int id = 0; id < dn->size(lvl); ++id) {
                MonotoneMap seq = standard_simplex_seq(n, lvl, id);
                for (int m = 0; m <= 3; ++m)
                    for (const MonotoneMap& op : enumerate_monotone(m, lvl)) {
                        int got = dn->apply_operator(lvl, id, op);
                        MonotoneMap expect = compose_monotone(seq, op);
                        CHECK(got == standard_simplex_id(n, expect));
                    }
            }
    }
}

TEST_CASE("validation reports broken identities") {
    SSetPtr d1 = standard_simplex(1, 2);
    SimplicialSetData d = d1->data();
    CHECK(validate(d).ok());
    d.face[1][0][standard_simplex_id(1, {0, 1})] = standard_simplex_id(1, {0});
    ValidationReport rep = validate(d);
    CHECK_FALSE(rep.ok());
    CHECK(rep.summary() != "valid");

    SECTION("build rejects invalid data") {
        CHECK_THROWS_AS(SimplicialSet::build(d), InternalError);
    }
}

TEST_CASE("horns and boundaries") {
    SECTION("low dimensional shapes") {
        Subcomplex l01 = horn(1, 0, 3);
        CHECK(l01.set->size(0) == 1);
        CHECK(l01.set->nondegenerate_count() == 1);
        CHECK(l01.old_of_new[0][0] == standard_simplex_id(1, {0}));

        Subcomplex l11 = horn(1, 1, 3);
        CHECK(l11.old_of_new[0][0] == standard_simplex_id(1, {1}));

        Subcomplex b1 = boundary(1, 3);
        CHECK(b1.set->size(0) == 2);
        CHECK(b1.set->nondegenerate_ids(1).empty());

        Subcomplex b0 = boundary(0, 3);
        CHECK(b0.set->total_size() == 0);
    }

    SECTION("horn of the triangle misses one face") {
        Subcomplex l12 = horn(2, 1, 3);
        CHECK(l12.set->nondegenerate_ids(0).size() == 3);
        CHECK(l12.set->nondegenerate_ids(1).size() == 2);
        CHECK(l12.set->nondegenerate_ids(2).empty());
        // the missing edge is d_1 = [02]
        SSetPtr d2 = standard_simplex(2, 3);
        int missing = standard_simplex_id(2, {0, 2});
        CHECK(l12.new_of_old[1][missing] == -1);
    }

    SECTION("boundary of the triangle is the edge cycle") {
        Subcomplex b2 = boundary(2, 3);
        CHECK(b2.set->nondegenerate_ids(0).size() == 3);
        CHECK(b2.set->nondegenerate_ids(1).size() == 3);
        CHECK(b2.set->nondegenerate_ids(2).empty());
    }
}

TEST_CASE("generated subcomplex closes under faces and degeneracies") {
    SSetPtr d2 = standard_simplex(2, 3);
    int e02 = standard_simplex_id(2, {0, 2});
    Subcomplex sub = generated_subcomplex(d2, {{1, e02}});
    CHECK(sub.set->nondegenerate_ids(0).size() == 2);
    CHECK(sub.set->nondegenerate_ids(1).size() == 1);
    CHECK(is_isomorphic(sub.set, standard_simplex(1, 3), 100000));
}

TEST_CASE("products match the shuffle count and project correctly") {
    SSetPtr d1 = standard_simplex(1, 3);
    Product sq = product(d1, d1);
    for (int m = 0; m <= 3; ++m) {
        long long nd = static_cast<long long>(sq.set->nondegenerate_ids(m).size());
        CHECK(nd == oracle::product_nondeg_count(d1, d1, m));
    }
    CHECK(sq.set->nondegenerate_ids(2).size() == 2);  // two triangles fill the square

    SSetPtr two = discrete_sset(2, 3);
    Product cyl = product(two, d1);
    CHECK(cyl.set->nondegenerate_ids(0).size() == 4);
    CHECK(cyl.set->nondegenerate_ids(1).size() == 2);
    for (int m = 0; m <= 3; ++m) {
        long long nd = static_cast<long long>(cyl.set->nondegenerate_ids(m).size());
        CHECK(nd == oracle::product_nondeg_count(two, d1, m));
    }

    SECTION("projections and pairing indices agree") {
        for (int n = 0; n <= 3; ++n)
            for (int a = 0; a < d1->size(n); ++a)
                for (int b = 0; b < d1->size(n); ++b) {
                    int id = sq.index(n, a, b);
                    CHECK(sq.proj_left.apply(n, id) == a);
                    CHECK(sq.proj_right.apply(n, id) == b);
                    CHECK(sq.decode(n, id) == std::pair<int, int>{a, b});
                }
    }

    SECTION("product with a point is isomorphic to the factor") {
        Product p = product(d1, standard_simplex(0, 3));
        CHECK(is_isomorphic(p.set, d1, 100000));
    }
}

TEST_CASE("pullbacks are fiber products") {
    SSetPtr two = discrete_sset(2, 2);
    SSetPtr pt = standard_simplex(0, 2);
    SimplicialMap cover = terminal_map(two, 2);

    SECTION("pullback along the identity recovers the source") {
        PullbackSet pb = pullback(cover, identity_map(pt));
        CHECK(is_isomorphic(pb.set, two, 100000));
        CHECK(compose(cover, pb.proj_left) == compose(identity_map(pt), pb.proj_right));
    }

    SECTION("pullback of two projections is the product") {
        SSetPtr d1 = standard_simplex(1, 2);
        PullbackSet pb = pullback(terminal_map(d1, 2), terminal_map(d1, 2));
        Product pr = product(d1, d1);
        CHECK(is_isomorphic(pb.set, pr.set, 1000000));
    }
}

TEST_CASE("coproduct and pushout glue as expected") {
    SSetPtr d1 = standard_simplex(1, 2);

    SECTION("coproduct sizes add") {
        Coproduct cp = coproduct(d1, d1);
        for (int n = 0; n <= 2; ++n) CHECK(cp.set->size(n) == 2 * d1->size(n));
        CHECK(cp.inject_left.is_mono());
        CHECK(cp.inject_right.is_mono());
    }

    SECTION("wedge of two intervals at a shared endpoint") {
        SimplicialMap at_one = vertex_map(d1, standard_simplex_id(1, {1}));
        SimplicialMap at_zero = vertex_map(d1, standard_simplex_id(1, {0}));
        PushoutSet wedge = pushout_mono(at_one, at_zero);
        CHECK(wedge.set->size(0) == 3);
        CHECK(wedge.set->size(1) == 5);
        CHECK(wedge.set->size(2) == 7);
        CHECK(wedge.set->nondegenerate_ids(1).size() == 2);
        CHECK(wedge.set->nondegenerate_ids(2).empty());
        // both legs agree on the shared vertex
        CHECK(wedge.from_ambient.apply(0, standard_simplex_id(1, {1})) ==
              wedge.from_attached.apply(0, standard_simplex_id(1, {0})));
    }
}

TEST_CASE("representable maps") {
    SSetPtr d2 = standard_simplex(2, 3);
    int e12 = standard_simplex_id(2, {1, 2});
    SimplicialMap m = yoneda_map(d2, 1, e12);
    CHECK(*m.source() == *standard_simplex(1, 3));
    CHECK(m.apply(0, standard_simplex_id(1, {0})) == standard_simplex_id(2, {1}));
    CHECK(m.apply(0, standard_simplex_id(1, {1})) == standard_simplex_id(2, {2}));
    CHECK(m.apply(1, standard_simplex_id(1, {0, 1})) == e12);

    SECTION("terminal map hits the unique point simplex") {
        SimplicialMap t = terminal_map(d2, 3);
        for (int n = 0; n <= 3; ++n)
            for (int id = 0; id < d2->size(n); ++id) CHECK(t.apply(n, id) == 0);
    }
}

TEST_CASE("map enumeration agrees with the brute force count") {
    SSetPtr pt = standard_simplex(0, 2);
    SSetPtr d1 = standard_simplex(1, 2);
    SSetPtr d2 = standard_simplex(2, 2);
    SSetPtr two = discrete_sset(2, 2);

    CHECK(enumerate_maps(pt, d1, 100000).size() == 2);
    CHECK(enumerate_maps(d1, d1, 100000).size() == 3);
    CHECK(enumerate_maps(two, d1, 100000).size() == 4);
    CHECK(enumerate_maps(d1, d2, 1000000).size() == 6);

    CHECK(oracle::count_maps(pt, d1, 1000000) == 2);
    CHECK(oracle::count_maps(d1, d1, 1000000) == 3);
    CHECK(oracle::count_maps(two, d1, 1000000) == 4);
    CHECK(oracle::count_maps(d1, d2, 100000000) == 6);

    SECTION("maps into a simplex correspond to its simplices") {
        for (int n = 1; n <= 2; ++n)
            for (int m = 1; m <= 2; ++m) {
                auto maps = enumerate_maps(standard_simplex(n, 2), standard_simplex(m, 2), 10000000);
                CHECK(static_cast<long long>(maps.size()) ==
                      oracle::standard_simplex_level_count(m, n));
            }
    }

    SECTION("budget exhaustion throws instead of truncating") {
        CHECK_THROWS_AS(enumerate_maps(d1, d2, 3), BudgetError);
    }
}

TEST_CASE("isomorphism search finds relabelings") {
    SSetPtr d1 = standard_simplex(1, 2);
    Product p = product(standard_simplex(0, 2), d1);
    CHECK(is_isomorphic(p.set, d1, 100000));
    CHECK_FALSE(is_isomorphic(d1, discrete_sset(2, 2), 100000));
    SimplicialMap wit;
    REQUIRE(is_isomorphic(p.set, d1, 100000, &wit));
    CHECK(wit.is_iso());
}
