#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "kanforge/fixtures.hpp"
#include "kanforge/univalence.hpp"

using namespace kanforge;

namespace {

Config cfg_at(int max_dim, int cap = 8, long long budget = 1'000'000) {
    Config cfg;
    cfg.max_dim = max_dim;
    cfg.fiber_cap = cap;
    cfg.search_budget = budget;
    return cfg;
}

SliceObject over_point(const SSetPtr& x) {
    return make_slice(terminal_map(x, x->max_dim()));
}

/// Re-derives the restriction comparison from outside: the iso is over the
/// small base, and carries the restricted extension map to the input
/// equivalence through the supplied identification.
void check_exact_restriction(const UnivalentLift& out, const SimplicialMap& i,
                             const SimplicialMap& w, const SliceObject& e1,
                             const SliceObject& ebar2, const SimplicialMap& phi) {
    CHECK(out.restriction_iso.is_iso());
    CHECK(maps_equal_pointwise(compose(e1.proj, out.restriction_iso),
                               out.restricted.object.proj));
    PullbackAlong ra2 = pullback_along(i, ebar2);
    int nd = out.restricted.object.total->max_dim();
    for (int n = 0; n <= nd; ++n)
        for (int id = 0; id < out.restricted.object.total->size(n); ++id) {
            auto [a, x] = out.restricted.raw.pairs[n][id];
            int pid = ra2.raw.find(n, a, out.wbar.apply(n, x));
            REQUIRE(pid >= 0);
            CHECK(phi.apply(n, pid) == w.apply(n, out.restriction_iso.apply(n, id)));
        }
}

/// The extension is a well-ordered fibration over the big base and the
/// route-specific equivalence certificate verifies.
void check_extension_certificates(const UnivalentLift& out, const SliceObject& ebar2) {
    CHECK(out.ebar1_fibration.ok());
    CHECK_NOTHROW(validate_wom(out.ebar1_wom));
    CHECK(maps_equal_pointwise(out.ebar1_wom.map, out.ebar1.proj));
    CHECK(maps_equal_pointwise(compose(ebar2.proj, out.wbar), out.ebar1.proj));
    switch (out.route) {
        case FactorKind::TrivialFibration:
            REQUIRE(out.wbar_tf);
            CHECK(out.wbar_tf->ok());
            break;
        case FactorKind::TrivialCofibration:
            REQUIRE(out.wbar_dr);
            CHECK(out.wbar.is_mono());
            CHECK(verify_deformation_retraction(out.wbar, out.ebar1, ebar2, *out.wbar_dr));
            break;
        case FactorKind::Factored:
            REQUIRE(out.mid);
            REQUIRE(out.collapse_tf);
            CHECK(out.collapse_tf->ok());
            REQUIRE(out.into_dr);
            break;
    }
}

/// A map over the point whose only data is the vertex images.
SimplicialMap constant_collapse(const SSetPtr& x, int vertex) {
    int nd = x->max_dim();
    std::vector<std::vector<int>> lv(nd + 1);
    for (int n = 0; n <= nd; ++n) lv[n].assign(x->size(n), vertex);
    return SimplicialMap(x, x, std::move(lv));
}

}  // namespace

TEST_CASE("equivalence objects keep exactly the invertible members") {
    Config cfg = cfg_at(2);
    SSetPtr pt = standard_simplex(0, 2);
    SSetPtr two = discrete_sset(2, 2);

    SECTION("two points against themselves: the two bijections") {
        EqObject eq = eq_object(over_point(two), over_point(two), cfg);
        for (int n = 0; n <= 2; ++n) {
            CHECK(eq.hom.object.total->size(n) == 4);
            CHECK(eq.carrier.total->size(n) == 2);
        }
        CHECK(eq.carrier_in_hom.inclusion.is_mono());
        // Both kept vertices carry a certified equivalence that permutes the
        // fiber; the two dropped hom-vertices are the constants.
        std::set<std::pair<int, int>> images;
        for (int id = 0; id < 2; ++id) {
            CHECK(eq.verdicts[0][id].verdict == Tri::Yes);
            const SimplicialMap& u = eq.member(0, id);
            images.insert({u.apply(0, 0), u.apply(0, 1)});
        }
        CHECK(images == std::set<std::pair<int, int>>{{0, 1}, {1, 0}});
        CHECK(is_fibration(eq.carrier.proj, cfg).ok());
    }

    SECTION("a point against itself: the whole hom") {
        EqObject eq = eq_object(over_point(pt), over_point(pt), cfg);
        for (int n = 0; n <= 2; ++n) CHECK(eq.carrier.total->size(n) == 1);
        CHECK(is_isomorphic(eq.carrier.total, pt, cfg.search_budget, nullptr));
    }

    SECTION("a point against two points: every member fails on components") {
        EqObject eq = eq_object(over_point(pt), over_point(two), cfg);
        for (int n = 0; n <= 2; ++n) CHECK(eq.carrier.total->size(n) == 0);
        CHECK(eq.hom.object.total->size(0) == 2);
    }
}

TEST_CASE("self-equivalence carries the diagonal and its exact retractions") {
    Config cfg = cfg_at(2);
    SSetPtr pt = standard_simplex(0, 2);
    SSetPtr two = discrete_sset(2, 2);

    auto check_retraction_laws = [](const EqSelf& es, const SSetPtr& base) {
        CHECK(es.delta.is_mono());
        SimplicialMap id_base = identity_map(base);
        CHECK(maps_equal_pointwise(compose(es.source_map, es.delta), id_base));
        CHECK(maps_equal_pointwise(compose(es.target_map, es.delta), id_base));
    };

    SECTION("the point: everything is an isomorphism") {
        EqSelf es = eq_self(make_slice(identity_map(pt)), cfg);
        check_retraction_laws(es, pt);
        for (int n = 0; n <= 2; ++n) CHECK(es.eq.carrier.total->size(n) == 1);
        CHECK(es.delta.is_iso());
    }

    SECTION("two points over the point: identity and swap") {
        EqSelf es = eq_self(over_point(two), cfg);
        check_retraction_laws(es, pt);
        for (int n = 0; n <= 2; ++n) CHECK(es.eq.carrier.total->size(n) == 2);
        // The diagonal hits the identity member; its companion is the swap.
        CHECK(es.delta.apply(0, 0) == 0);
        CHECK(es.eq.member(0, 0).apply(0, 0) == 0);
        CHECK(es.eq.member(0, 0).apply(0, 1) == 1);
        CHECK(es.eq.member(0, 1).apply(0, 0) == 1);
        CHECK(es.eq.member(0, 1).apply(0, 1) == 0);
    }

    SECTION("fibers empty and singleton over two points: only the diagonal") {
        EqSelf es = eq_self(make_slice(vertex_map(two, 1)), cfg);
        check_retraction_laws(es, two);
        for (int n = 0; n <= 2; ++n) CHECK(es.eq.carrier.total->size(n) == 2);
        CHECK(es.delta.is_iso());
        // The mixed fibers admit no member in either direction, so the
        // carrier sits over the diagonal of the square.
        for (int id = 0; id < 2; ++id) {
            auto [l, r] = es.square.decode(0, es.eq.carrier.proj.apply(0, id));
            CHECK(l == r);
        }
    }
}

TEST_CASE("univalence verdicts on the three basic bundles") {
    Config cfg = cfg_at(2);
    SSetPtr pt = standard_simplex(0, 2);
    SSetPtr two = discrete_sset(2, 2);

    SECTION("the identity bundle is univalent") {
        UnivalenceVerdict v = is_univalent(make_slice(identity_map(pt)), cfg);
        CHECK(v.status == UnivalenceStatus::Univalent);
        CHECK(v.reason == "the diagonal into the self-equivalence object is an equivalence");
        CHECK(v.delta_verdict.verdict == Tri::Yes);
    }

    SECTION("two points over the point fail on components") {
        UnivalenceVerdict v = is_univalent(over_point(two), cfg);
        CHECK(v.status == UnivalenceStatus::NotUnivalent);
        CHECK(v.reason == "the diagonal into the self-equivalence object is not an equivalence");
        REQUIRE(v.pi0);
        CHECK(v.pi0->source_components == 1);
        CHECK(v.pi0->target_components == 2);
    }

    SECTION("empty and singleton fibers over two points are univalent") {
        UnivalenceVerdict v = is_univalent(make_slice(vertex_map(two, 1)), cfg);
        CHECK(v.status == UnivalenceStatus::Univalent);
        CHECK(v.delta_verdict.verdict == Tri::Yes);
    }

    SECTION("a positive verdict never contradicts the diagonal route") {
        for (const SliceObject& e :
             {make_slice(identity_map(pt)), over_point(two), make_slice(vertex_map(two, 1))}) {
            UnivalenceVerdict v = is_univalent(e, cfg);
            if (v.status == UnivalenceStatus::Univalent)
                CHECK(v.delta_verdict.verdict != Tri::No);
        }
    }
}

TEST_CASE("equivalence extension over a fresh point") {
    int nd = 2;
    Config cfg = cfg_at(nd);
    SSetPtr two = discrete_sset(2, nd);
    SimplicialMap i = vertex_map(two, 0);
    SliceObject e1 = make_slice(identity_map(i.source()));
    SliceObject ebar2 = make_slice(identity_map(two));
    PullbackAlong ra2 = pullback_along(i, ebar2);
    std::vector<std::vector<int>> zl(nd + 1);
    for (int n = 0; n <= nd; ++n) zl[n].assign(ra2.object.total->size(n), 0);
    SimplicialMap phi(ra2.object.total, e1.total, std::move(zl));
    SimplicialMap w = identity_map(e1.total);

    UnivalentLift out = univalent_lift(i, w, e1, e1, ebar2, phi, cfg);
    // The fiber over the added point is the single map out of the empty
    // restriction, so the extension is the big base itself.
    for (int n = 0; n <= nd; ++n) CHECK(out.ebar1.total->size(n) == 2);
    CHECK(is_isomorphic(out.ebar1.total, two, cfg.search_budget, nullptr));
    CHECK(out.route == FactorKind::TrivialFibration);
    CHECK(out.max_fiber == 1);
    CHECK(out.small);
    check_exact_restriction(out, i, w, e1, ebar2, phi);
    check_extension_certificates(out, ebar2);
}

TEST_CASE("equivalence extension along the identity is the unit isomorphism") {
    int nd = 2;
    Config cfg = cfg_at(nd);
    SSetPtr pt = standard_simplex(0, nd);
    SSetPtr two = discrete_sset(2, nd);
    SimplicialMap i = identity_map(pt);
    SliceObject e = over_point(two);
    std::vector<std::vector<int>> sw(nd + 1);
    for (int n = 0; n <= nd; ++n) sw[n] = {1, 0};
    SimplicialMap w(two, two, std::move(sw));
    PullbackAlong ra2 = pullback_along(i, e);

    UnivalentLift out = univalent_lift(i, w, e, e, e, ra2.cartesian, cfg);
    for (int n = 0; n <= nd; ++n) CHECK(out.ebar1.total->size(n) == 2);
    CHECK(is_isomorphic(out.ebar1.total, two, cfg.search_budget, nullptr));
    CHECK(out.route == FactorKind::TrivialFibration);
    CHECK(out.max_fiber == 2);
    check_exact_restriction(out, i, w, e, e, ra2.cartesian);
    check_extension_certificates(out, e);
}

TEST_CASE("equivalence extension along a vertex of the interval") {
    int nd = 2;
    Config cfg = cfg_at(nd);
    SSetPtr interval = standard_simplex(1, nd);
    SimplicialMap i = vertex_map(interval, 0);
    SliceObject e1 = make_slice(identity_map(i.source()));
    SliceObject ebar2 = make_slice(identity_map(interval));
    PullbackAlong ra2 = pullback_along(i, ebar2);
    std::vector<std::vector<int>> zl(nd + 1);
    for (int n = 0; n <= nd; ++n) zl[n].assign(ra2.object.total->size(n), 0);
    SimplicialMap phi(ra2.object.total, e1.total, std::move(zl));
    SimplicialMap w = identity_map(e1.total);

    UnivalentLift out = univalent_lift(i, w, e1, e1, ebar2, phi, cfg);
    // Pointwise the direct image has one simplex per simplex of the base.
    CHECK(out.ebar1.total->size(0) == 2);
    CHECK(out.ebar1.total->size(1) == 3);
    CHECK(out.ebar1.total->size(2) == 4);
    CHECK(is_isomorphic(out.ebar1.total, interval, cfg.search_budget, nullptr));
    CHECK(out.route == FactorKind::TrivialFibration);
    check_exact_restriction(out, i, w, e1, ebar2, phi);
    check_extension_certificates(out, ebar2);
}

TEST_CASE("equivalence extension by deformation retraction") {
    int nd = 2;
    Config cfg = cfg_at(nd);
    SSetPtr interval = standard_simplex(1, nd);
    SSetPtr nerve = pair_groupoid_nerve(2, nd);
    SimplicialMap i = vertex_map(interval, 0);
    SliceObject e1 = make_slice(identity_map(i.source()));
    // w includes the basepoint into a contractible fiber.
    SimplicialMap w = vertex_map(nerve, 0);
    SliceObject e2{nerve, terminal_map(nerve, nd)};
    Product prod = product(interval, nerve);
    SliceObject ebar2{prod.set, prod.proj_left};
    PullbackAlong ra2 = pullback_along(i, ebar2);
    SimplicialMap phi = compose(prod.proj_right, ra2.cartesian);

    UnivalentLift out = univalent_lift(i, w, e1, e2, ebar2, phi, cfg);
    CHECK(out.ebar1.total->size(0) == 3);
    CHECK(out.ebar1.total->size(1) == 7);
    CHECK(out.ebar1.total->size(2) == 15);
    CHECK(out.route == FactorKind::TrivialCofibration);
    CHECK(out.max_fiber == 8);
    CHECK(out.small);
    check_exact_restriction(out, i, w, e1, ebar2, phi);
    check_extension_certificates(out, ebar2);
}

TEST_CASE("equivalence extension rejects bad input and uncertified factorizations") {
    int nd = 2;
    Config cfg = cfg_at(nd);
    SSetPtr pt = standard_simplex(0, nd);
    SSetPtr two = discrete_sset(2, nd);
    SSetPtr interval = standard_simplex(1, nd);
    SSetPtr nerve = pair_groupoid_nerve(2, nd);

    SECTION("the map must be an equivalence") {
        SliceObject e = over_point(two);
        PullbackAlong ra2 = pullback_along(identity_map(pt), e);
        CHECK_THROWS_AS(univalent_lift(identity_map(pt), constant_collapse(two, 0), e, e, e,
                                       ra2.cartesian, cfg),
                        InputError);
    }

    SECTION("the base map must be a monomorphism") {
        SliceObject e = over_point(two);
        SliceObject e_pt{pt, terminal_map(pt, nd)};
        SimplicialMap fold = terminal_map(two, nd);
        PullbackAlong ra2 = pullback_along(fold, e_pt);
        CHECK_THROWS_AS(
            univalent_lift(fold, identity_map(two), e, e, e_pt, ra2.cartesian, cfg),
            InputError);
    }

    SECTION("a general equivalence whose factorization resists certification") {
        // The edge joining the two vertices of the contractible nerve is an
        // equivalence but neither a trivial fibration nor pinned by a
        // one-step retraction, and the cylinder legs cannot be certified
        // within the bound; the failure names both missing certificates.
        std::vector<std::vector<int>> el(nd + 1);
        el[0] = {nerve_id(2, {0}), nerve_id(2, {1})};
        el[1].assign(interval->size(1), 0);
        el[1][standard_simplex_id(1, MonotoneMap{0, 1})] = nerve_id(2, {0, 1});
        el[1][standard_simplex_id(1, MonotoneMap{0, 0})] = nerve_id(2, {0, 0});
        el[1][standard_simplex_id(1, MonotoneMap{1, 1})] = nerve_id(2, {1, 1});
        el[2].resize(interval->size(2));
        for (int id = 0; id < interval->size(2); ++id)
            el[2][id] = nerve_id(2, standard_simplex_seq(1, 2, id));
        SimplicialMap w(interval, nerve, std::move(el));
        SliceObject e1 = over_point(interval);
        SliceObject e2 = over_point(nerve);
        PullbackAlong ra2 = pullback_along(identity_map(pt), e2);
        try {
            univalent_lift(identity_map(pt), w, e1, e2, e2, ra2.cartesian, cfg);
            FAIL("factorization unexpectedly certified");
        } catch (const BudgetError& e) {
            std::string what = e.what();
            CHECK(what.find("factorization leg uncertified") != std::string::npos);
            CHECK(what.find("collapse") != std::string::npos);
            CHECK(what.find("deformation retraction") != std::string::npos);
        }
    }
}

TEST_CASE("replacement levels at cap one are singletons") {
    int nd = 2;
    Config cfg = cfg_at(nd, 1);
    SSetPtr pt = standard_simplex(0, nd);
    SliceObject p_id = make_slice(identity_map(pt));
    SliceObject p_empty = make_slice(terminal_map(empty_sset(nd), nd));

    SECTION("identity bundle: only the singleton fiber admits an equivalence") {
        std::vector<ReplacementLevel> levels;
        for (int n = 0; n <= nd; ++n) {
            levels.push_back(replacement_level(p_id, n, cfg));
            const ReplacementLevel& lv = levels.back();
            REQUIRE(lv.elements.size() == 1);
            const SmallReplacement& el = lv.elements[0];
            CHECK(el.bundle_fibration.ok());
            CHECK(el.weq_verdict.verdict == Tri::Yes);
            CHECK_NOTHROW(validate_wom(el.bundle));
            for (int m = 0; m <= nd; ++m)
                CHECK(el.bundle.map.source()->size(m) == lv.frame.set->size(m));
        }

        SECTION("the operator action is consistent across levels") {
            for (int i = 0; i <= 1; ++i)
                CHECK(replacement_restrict(levels[1], 0, coface(1, i), levels[0]) == 0);
            CHECK(replacement_restrict(levels[0], 0, MonotoneMap{0, 0}, levels[1]) == 0);
            CHECK_THROWS_AS(replacement_restrict(levels[1], 1, coface(1, 0), levels[0]),
                            InputError);
            CHECK_THROWS_AS(replacement_restrict(levels[1], 0, coface(1, 0), levels[1]),
                            InputError);
        }
    }

    SECTION("empty bundle: the empty map is the unique equivalence") {
        for (int n = 0; n <= nd; ++n) {
            ReplacementLevel lv = replacement_level(p_empty, n, cfg);
            REQUIRE(lv.elements.size() == 1);
            CHECK(lv.elements[0].bundle.map.source()->total_size() == 0);
            CHECK(lv.elements[0].weq.source()->total_size() == 0);
        }
    }

    SECTION("non-fibrations are refused up front") {
        SliceObject slope = make_slice(terminal_map(standard_simplex(1, nd), nd));
        CHECK_THROWS_AS(replacement_level(slope, 0, cfg), InputError);
    }
}

TEST_CASE("replacement levels of the two-point bundle count order variants") {
    int nd = 2;
    Config cfg = cfg_at(nd, 2, 50'000'000);
    SSetPtr two = discrete_sset(2, nd);
    SliceObject p = over_point(two);

    // A well-order is independent data at every level: once the vertex
    // order of the discrete two-point fiber is normalized, the orders of
    // the degenerate edge and triangle fibers remain free, giving four
    // distinct well-ordered bundles with two equivalences each.
    ReplacementLevel lv0 = replacement_level(p, 0, cfg);
    REQUIRE(lv0.elements.size() == 8);
    std::set<std::pair<int, int>> vertex_images;
    for (const SmallReplacement& el : lv0.elements) {
        for (int m = 0; m <= nd; ++m) {
            CHECK(el.bundle.map.source()->size(m) == 2);
            CHECK(el.bundle.map.source()->nondegenerate_ids(m).size() == (m == 0 ? 2 : 0));
        }
        vertex_images.insert({el.weq.apply(0, 0), el.weq.apply(0, 1)});
    }
    CHECK(vertex_images == std::set<std::pair<int, int>>{{0, 1}, {1, 0}});

    ReplacementLevel lv1 = replacement_level(p, 1, cfg);
    CHECK(lv1.elements.size() == 512);

    SECTION("every face and degeneracy lands back in the enumerated lists") {
        for (int idx = 0; idx < static_cast<int>(lv1.elements.size()); ++idx)
            for (int i = 0; i <= 1; ++i) {
                int down = replacement_restrict(lv1, idx, coface(1, i), lv0);
                CHECK(down >= 0);
                CHECK(down < 8);
            }
        std::set<int> degenerate;
        for (int idx = 0; idx < 8; ++idx)
            degenerate.insert(replacement_restrict(lv0, idx, MonotoneMap{0, 0}, lv1));
        CHECK(degenerate.size() == 8);
    }
}

TEST_CASE("contractibility probe at cap one") {
    int nd = 2;
    Config cfg = cfg_at(nd, 1);
    SSetPtr pt = standard_simplex(0, nd);

    SECTION("identity bundle") {
        ReplacementContractibility pr =
            check_replacements_contractible(make_slice(identity_map(pt)), cfg);
        for (int n = 0; n <= nd; ++n) CHECK(pr.complex->size(n) == 1);
        CHECK(pr.boundary_rlp.ok());
        CHECK(pr.routes_agree);
        CHECK(pr.instances == 3);
        CHECK(pr.contractible());
    }

    SECTION("empty bundle") {
        ReplacementContractibility pr = check_replacements_contractible(
            make_slice(terminal_map(empty_sset(nd), nd)), cfg);
        for (int n = 0; n <= nd; ++n) CHECK(pr.complex->size(n) == 1);
        CHECK(pr.contractible());
    }
}
