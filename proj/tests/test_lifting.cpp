#include <catch2/catch_amalgamated.hpp>

#include "kanforge/fixtures.hpp"
#include "kanforge/lifting.hpp"
#include "kanforge/oracle.hpp"

using namespace kanforge;

namespace {

Config small_cfg(int max_dim = 2) {
    Config cfg;
    cfg.max_dim = max_dim;
    return cfg;
}

}  // namespace

TEST_CASE("horn fillers in the nerve of the pair groupoid") {
    SSetPtr nerve = pair_groupoid_nerve(2, 2);
    Subcomplex l = horn(2, 1, 2);

    // top sends the two horn edges to ab and ba, asking to compose them
    std::vector<SimplicialMap> tops = enumerate_maps(l.set, nerve, 100000);
    bool checked_one = false;
    for (const SimplicialMap& top : tops) {
        LiftingProblem square{l.inclusion, top, terminal_map(nerve, 2),
                              terminal_map(l.inclusion.target(), 2)};
        LiftResult res = solve_lifting(square, 100000);
        REQUIRE(has_filler(res));
        const auto& fill = std::get<Filler>(res);
        // diagonal restricted along the inclusion equals the top
        for (int n = 0; n <= 2; ++n)
            for (int id = 0; id < l.set->size(n); ++id)
                CHECK(fill.diagonal.apply(n, l.inclusion.apply(n, id)) == top.apply(n, id));
        checked_one = true;
    }
    CHECK(checked_one);
}

TEST_CASE("the interval is not a Kan complex") {
    SSetPtr d1 = standard_simplex(1, 2);
    RlpReport rep = is_kan(d1, small_cfg());
    CHECK(rep.status == RlpStatus::FailsLift);
    REQUIRE_FALSE(rep.failures.empty());
    // the refutation is complete, not a budget artifact
    for (const auto& f : rep.failures) CHECK(std::holds_alternative<Refuted>(f.result));

    SECTION("the point and the pair groupoid nerve are Kan") {
        CHECK(is_kan(standard_simplex(0, 2), small_cfg()).ok());
        CHECK(is_kan(pair_groupoid_nerve(2, 2), small_cfg()).ok());
    }
}

TEST_CASE("polygon covers are fibrations but not trivial ones") {
    SimplicialMap cover = polygon_cover(2, 2, 2);
    CHECK(cover.source()->size(0) == 4);
    CHECK(cover.target()->size(0) == 2);

    RlpReport fib = is_fibration(cover, small_cfg());
    CHECK(fib.ok());
    CHECK(fib.squares_checked > 0);

    RlpReport triv = is_trivial_fibration(cover, small_cfg());
    CHECK(triv.status == RlpStatus::FailsLift);
    REQUIRE_FALSE(triv.failures.empty());
    // a sphere violation: two total vertices over the ends of a base edge
    // that are not joined over it
    CHECK(triv.failures.front().n >= 1);
}

TEST_CASE("identity and projection trivial fibrations") {
    SSetPtr nerve = pair_groupoid_nerve(2, 2);
    CHECK(is_trivial_fibration(identity_map(nerve), small_cfg()).ok());
    CHECK(is_trivial_fibration(terminal_map(nerve, 2), small_cfg()).ok());

    SECTION("vertex surjectivity is the dimension zero case") {
        SSetPtr pt = standard_simplex(0, 2);
        SSetPtr two = discrete_sset(2, 2);
        SimplicialMap v0 = vertex_map(two, 0);
        RlpReport rep = is_trivial_fibration(v0, small_cfg());
        CHECK(rep.status == RlpStatus::FailsLift);
        REQUIRE_FALSE(rep.failures.empty());
        CHECK(rep.failures.front().n == 0);
        CHECK(rep.failures.front().k == -1);
        (void)pt;
    }
}

TEST_CASE("the wedge projection to the interval is not a fibration") {
    // glue two intervals at their endpoint 1 and project to one of them
    SSetPtr d1 = standard_simplex(1, 2);
    SimplicialMap at_one = vertex_map(d1, standard_simplex_id(1, {1}));
    PushoutSet wedge = pushout_mono(at_one, at_one);

    // both arms map onto the base interval, joint vertex over 1
    std::vector<std::vector<int>> lv(3);
    const SSetPtr& w = wedge.set;
    for (int n = 0; n <= 2; ++n) {
        lv[n].resize(w->size(n));
        for (int id = 0; id < d1->size(n); ++id) {
            lv[n][wedge.from_ambient.apply(n, id)] = id;
            lv[n][wedge.from_attached.apply(n, id)] = id;
        }
    }
    SimplicialMap p(w, d1, std::move(lv));

    RlpReport rep = is_fibration(p, small_cfg());
    CHECK(rep.status == RlpStatus::FailsLift);
    REQUIRE_FALSE(rep.failures.empty());
    CHECK(rep.failures.front().n == 2);
    for (const auto& f : rep.failures) CHECK(std::holds_alternative<Refuted>(f.result));
}

TEST_CASE("solver outcomes agree with the brute force oracle") {
    SSetPtr d1 = standard_simplex(1, 2);
    SSetPtr nerve = pair_groupoid_nerve(2, 2);
    Subcomplex l = horn(2, 0, 2);

    std::vector<std::pair<SSetPtr, SSetPtr>> shapes = {{l.set, d1}, {l.set, nerve}};
    for (auto& [shape, target] : shapes) {
        Subcomplex shape_in = l;
        std::vector<SimplicialMap> tops = enumerate_maps(shape, target, 1000000);
        for (std::size_t t = 0; t < tops.size() && t < 6; ++t) {
            LiftingProblem square{shape_in.inclusion, tops[t], terminal_map(target, 2),
                                  terminal_map(shape_in.inclusion.target(), 2)};
            LiftResult res = solve_lifting(square, 1000000);
            bool oracle_says = oracle::square_has_filler(
                shape_in.inclusion, terminal_map(target, 2), tops[t],
                terminal_map(shape_in.inclusion.target(), 2), 200000000);
            CHECK(has_filler(res) == oracle_says);
        }
    }
}

TEST_CASE("lift enumeration is complete and deterministic") {
    // fillers of a horn square into the pair groupoid nerve are unique
    SSetPtr nerve = pair_groupoid_nerve(2, 2);
    Subcomplex l = horn(2, 1, 2);
    std::vector<SimplicialMap> tops = enumerate_maps(l.set, nerve, 100000);
    REQUIRE_FALSE(tops.empty());
    LiftingProblem square{l.inclusion, tops.front(), terminal_map(nerve, 2),
                          terminal_map(l.inclusion.target(), 2)};
    std::vector<SimplicialMap> lifts = enumerate_lifts(square, 1000000);
    CHECK(lifts.size() == 1);  // faces determine a nerve simplex

    std::vector<SimplicialMap> again = enumerate_lifts(square, 1000000);
    REQUIRE(lifts.size() == again.size());
    for (std::size_t i = 0; i < lifts.size(); ++i)
        CHECK(maps_equal_pointwise(lifts[i], again[i]));

    SECTION("empty lift sets for the refuted square") {
        SSetPtr d1 = standard_simplex(1, 2);
        RlpReport rep = is_kan(d1, small_cfg());
        REQUIRE_FALSE(rep.failures.empty());
        const auto& f = rep.failures.front();
        Subcomplex shape = horn(f.n, f.k, 2);
        LiftingProblem bad{shape.inclusion, f.top, terminal_map(d1, 2), f.bottom};
        CHECK(enumerate_lifts(bad, 1000000).empty());
    }
}

TEST_CASE("budget exhaustion is reported, never silent") {
    SSetPtr nerve = pair_groupoid_nerve(2, 2);
    Subcomplex l = horn(2, 1, 2);
    std::vector<SimplicialMap> tops = enumerate_maps(l.set, nerve, 100000);
    LiftingProblem square{l.inclusion, tops.front(), terminal_map(nerve, 2),
                          terminal_map(l.inclusion.target(), 2)};
    LiftResult res = solve_lifting(square, 1);
    REQUIRE(std::holds_alternative<Exhausted>(res));
    CHECK(std::get<Exhausted>(res).budget == 1);
    CHECK_THROWS_AS(enumerate_lifts(square, 1), BudgetError);
}

TEST_CASE("refutations report the explored space") {
    SSetPtr d1 = standard_simplex(1, 2);
    RlpReport rep = is_kan(d1, small_cfg());
    REQUIRE_FALSE(rep.failures.empty());
    const auto& refut = std::get<Refuted>(rep.failures.front().result);
    CHECK(refut.space_size >= 1);
}
