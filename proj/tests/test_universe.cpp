#include <catch2/catch_amalgamated.hpp>

#include "kanforge/fixtures.hpp"
#include "kanforge/oracle.hpp"
#include "kanforge/universe.hpp"

using namespace kanforge;

namespace {

Config cfg_at(int max_dim, long long budget = 1'000'000, int cap = 3) {
    Config cfg;
    cfg.max_dim = max_dim;
    cfg.search_budget = budget;
    cfg.fiber_cap = cap;
    return cfg;
}

/// The relabelled morphism with its orders transported through the renaming.
WellOrderedMorphism transport_orders(const WellOrderedMorphism& wom, const Relabeled& rel) {
    WellOrderedMorphism out;
    out.map = compose(wom.map, rel.from_new);
    out.orders = wom.orders;
    for (std::size_t n = 0; n < out.orders.size(); ++n)
        for (auto& fiber : out.orders[n])
            for (int& id : fiber) id = rel.to_new.apply(static_cast<int>(n), id);
    return out;
}

/// The map sending each vertex of a discrete set to the same-numbered vertex
/// of the target, with towers above.
SimplicialMap vertices_into(const SSetPtr& points, const SSetPtr& target) {
    int nd = points->max_dim();
    std::vector<std::vector<int>> lv(nd + 1);
    lv[0].resize(points->size(0));
    for (int v = 0; v < points->size(0); ++v) lv[0][v] = v;
    for (int n = 1; n <= nd; ++n) {
        lv[n].resize(points->size(n));
        for (int v = 0; v < points->size(n); ++v) lv[n][v] = target->degen(n - 1, 0, lv[n - 1][v]);
    }
    return SimplicialMap(points, target, std::move(lv));
}

}  // namespace

TEST_CASE("well orders partition fibers and respect the cap") {
    Config cfg = cfg_at(2);
    WellOrderedMorphism w = make_wom(polygon_cover(2, 3, 2));
    CHECK_NOTHROW(validate_wom(w));
    CHECK_NOTHROW(check_small(w, cfg));

    SECTION("tampered orders are rejected") {
        WellOrderedMorphism wrong = w;
        wrong.orders[0][0][0] = wrong.orders[0][1][0];
        CHECK_THROWS_AS(validate_wom(wrong), InputError);

        WellOrderedMorphism missing = w;
        missing.orders[1][0].pop_back();
        CHECK_THROWS_AS(validate_wom(missing), InputError);

        WellOrderedMorphism doubled = w;
        doubled.orders[0][0].push_back(doubled.orders[0][0][0]);
        CHECK_THROWS_AS(validate_wom(doubled), InputError);
    }

    SECTION("fibers beyond the cap raise CapError") {
        WellOrderedMorphism fat = make_wom(terminal_map(discrete_sset(4, 2), 2));
        try {
            check_small(fat, cfg);
            FAIL("cap violation not reported");
        } catch (const CapError& e) {
            CHECK(e.level() == 0);
            CHECK(e.base_id() == 0);
            CHECK(e.fiber_size() == 4);
        }
    }

    SECTION("membership report") {
        UniverseReport in = in_universe(w, cfg);
        CHECK(in.ok());
        CHECK(in.well_formed);
        CHECK(in.small);
        CHECK(in.fibration.ok());

        // Delta[1] over the point: small for cap 4 but not Kan.
        UniverseReport out =
            in_universe(make_wom(terminal_map(standard_simplex(1, 2), 2)), cfg_at(2, 1'000'000, 4));
        CHECK_FALSE(out.ok());
        CHECK(out.well_formed);
        CHECK(out.small);
        CHECK(out.fibration.status == RlpStatus::FailsLift);

        UniverseReport fat = in_universe(make_wom(terminal_map(discrete_sset(4, 2), 2)), cfg);
        CHECK_FALSE(fat.ok());
        CHECK(fat.well_formed);
        CHECK_FALSE(fat.small);
    }
}

TEST_CASE("canonical names are invariant under relabelling") {
    WellOrderedMorphism w = make_wom(polygon_cover(2, 3, 2));
    const SSetPtr& base = w.map.target();

    SECTION("names only depend on the order data") {
        std::mt19937_64 rng(7);
        Relabeled rel = relabel(w.map.source(), rng);
        WellOrderedMorphism w2 = transport_orders(w, rel);
        CHECK_NOTHROW(validate_wom(w2));
        for (int n = 0; n <= 2; ++n)
            for (int id = 0; id < base->size(n); ++id)
                CHECK(classify(w, n, id) == classify(w2, n, id));
        SimplicialMap iso = wom_order_iso(w, w2);
        CHECK(maps_equal_pointwise(iso, rel.to_new));
    }

    SECTION("classification is idempotent") {
        UniverseSimplex name = classify(w, 1, 3);
        CHECK(top_fiber_size(name) == 2);
        MonotoneMap iota = identity_monotone(1);
        CHECK(classify(name.wom, 1, standard_simplex_id(1, iota)) == name);
    }

    SECTION("different fibers give different names") {
        WellOrderedMorphism two = make_wom(terminal_map(discrete_sset(2, 2), 2));
        WellOrderedMorphism three = make_wom(terminal_map(discrete_sset(3, 2), 2));
        CHECK_FALSE(classify(two, 0, 0) == classify(three, 0, 0));
        CHECK(top_fiber_size(classify(three, 0, 0)) == 3);
    }

    SECTION("swapping a fiber order changes the name") {
        // Swap the two sheets over vertex 0 coherently: the vertex fiber and
        // the tower fibers above it.  Towers sit first in each level, so the
        // base tower of vertex 0 has id 0 at every level.
        WellOrderedMorphism swapped = w;
        for (int n = 0; n <= 2; ++n) std::swap(swapped.orders[n][0][0], swapped.orders[n][0][1]);
        CHECK_NOTHROW(validate_wom(swapped));
        // Over the vertex the two sheets are interchangeable, so the name is
        // unchanged ...
        CHECK(classify(w, 0, 0) == classify(swapped, 0, 0));
        // ... but over an edge out of that vertex the endpoint positions
        // differ, and the name records it.
        CHECK_FALSE(classify(w, 1, 3) == classify(swapped, 1, 3));
    }
}

TEST_CASE("the operator action commutes with classification") {
    WellOrderedMorphism w = make_wom(polygon_cover(2, 3, 2));
    const SSetPtr& base = w.map.target();
    for (int n = 0; n <= 2; ++n)
        for (int id = 0; id < base->size(n); ++id) {
            UniverseSimplex name = classify(w, n, id);
            for (int m = 0; m <= 2; ++m)
                for (const MonotoneMap& op : enumerate_monotone(m, n)) {
                    UniverseSimplex expect = classify(w, m, base->apply_operator(n, id, op));
                    CHECK(universe_apply(name, op) == expect);
                }
        }
    CHECK_THROWS_AS(universe_apply(classify(w, 1, 0), MonotoneMap{0, 2}), InputError);
}

TEST_CASE("charts reconstruct the morphism exactly") {
    WellOrderedMorphism w = make_wom(polygon_cover(2, 3, 2));
    UniverseChart chart = classify_all(w);
    REQUIRE(chart_consistent(chart));
    WellOrderedMorphism rebuilt = reconstruct(chart);

    SECTION("round trip up to exact order isomorphism") {
        SimplicialMap iso = wom_order_iso(rebuilt, w);
        CHECK(iso.is_iso());
        for (int n = 0; n <= 2; ++n)
            CHECK(rebuilt.map.source()->size(n) == w.map.source()->size(n));
        UniverseChart again = classify_all(rebuilt);
        for (int n = 0; n <= 2; ++n)
            for (int id = 0; id < chart.base->size(n); ++id)
                CHECK(again.names[n][id] == chart.names[n][id]);
    }

    SECTION("reconstruction is canonical") {
        WellOrderedMorphism twice = reconstruct(classify_all(rebuilt));
        CHECK(twice.map == rebuilt.map);
        CHECK(twice.orders == rebuilt.orders);
    }

    SECTION("faces of reconstructed simplices follow the pointed action") {
        const SSetPtr& total = rebuilt.map.source();
        const SSetPtr& base = chart.base;
        for (int n = 1; n <= 2; ++n)
            for (int id = 0; id < base->size(n); ++id)
                for (int r = 0; r < top_fiber_size(chart.names[n][id]); ++r)
                    for (int i = 0; i <= n; ++i) {
                        PointedUniverseSimplex moved =
                            pointed_apply({chart.names[n][id], r}, coface(n, i));
                        CHECK(total->face(n, i, rebuilt.orders[n][id][r]) ==
                              rebuilt.orders[n - 1][base->face(n, i, id)][moved.point]);
                    }
    }

    SECTION("inconsistent charts are rejected") {
        UniverseChart broken = chart;
        broken.names[0][0] = classify(make_wom(terminal_map(discrete_sset(3, 2), 2)), 0, 0);
        CHECK_FALSE(chart_consistent(broken));
        CHECK_THROWS_AS(reconstruct(broken), InputError);
    }
}

TEST_CASE("canonical forms, cached Kan flags, and chart extension") {
    Config cfg = cfg_at(2);
    WellOrderedMorphism w = make_wom(polygon_cover(2, 3, 2));

    SECTION("canonicalize works over any base and is a fixpoint") {
        CanonicalForm canon = canonicalize(w);
        CHECK(canon.relabel.is_iso());
        CHECK(*canon.wom.map.target() == *w.map.target());
        CanonicalForm again = canonicalize(canon.wom);
        CHECK(again.wom.map == canon.wom.map);
        CHECK(again.wom.orders == canon.wom.orders);
        for (int n = 0; n <= 2; ++n) {
            int next = 0;
            for (const auto& fiber : canon.wom.orders[n])
                for (int id : fiber) CHECK(id == next++);
        }
    }

    SECTION("reconstructing the full chart lands on the canonical form") {
        WellOrderedMorphism rebuilt = reconstruct(classify_all(w));
        CanonicalForm canon = canonicalize(w);
        CHECK(rebuilt.map == canon.wom.map);
        CHECK(rebuilt.orders == canon.wom.orders);
    }

    SECTION("naming requires a simplex base") {
        CHECK_THROWS_AS(name_of(w, 2), InputError);
        CHECK_THROWS_AS(name_of(w, 9), InputError);
    }

    SECTION("well_order applies the cap up front") {
        WellOrderedMorphism small = well_order(polygon_cover(2, 3, 2), cfg);
        CHECK(small.orders == w.orders);
        CHECK_THROWS_AS(well_order(terminal_map(discrete_sset(4, 2), 2), cfg), CapError);
    }

    SECTION("Kan certification is cached on the name") {
        UniverseSimplex good = classify(make_wom(terminal_map(discrete_sset(2, 2), 2)), 0, 0);
        CHECK(good.kan_flag == KanFlag::Unchecked);
        CHECK(certify_kan(good, cfg).ok());
        CHECK(good.kan_flag == KanFlag::Certified);

        UniverseSimplex bad = name_of(make_wom(terminal_map(standard_simplex(1, 2), 2)), 0);
        CHECK(certify_kan(bad, cfg).status == RlpStatus::FailsLift);
        CHECK(bad.kan_flag == KanFlag::Failed);

        UniverseSimplex slow = name_of(make_wom(terminal_map(standard_simplex(1, 2), 2)), 0);
        CHECK(certify_kan(slow, cfg_at(2, 1)).status == RlpStatus::Exhausted);
        CHECK(slow.kan_flag == KanFlag::Unchecked);

        // The flag is bookkeeping, not part of the name.
        CHECK(bad == slow);
    }

    SECTION("chart input to horn extension matches the morphism input") {
        Subcomplex h = horn(2, 1, 2);
        Product bundle = product(h.set, discrete_sset(2, 2));
        WellOrderedMorphism input = make_wom(bundle.proj_left);
        HornExtension direct = extend_horn_in_universe(input, 2, 1, cfg);
        HornExtension via_chart = extend_horn_in_universe(classify_all(input), 2, 1, cfg);
        CHECK(in_universe(via_chart.extension, cfg).ok());
        CHECK(name_of(direct.extension, 2) == name_of(via_chart.extension, 2));

        UniverseChart broken = classify_all(input);
        broken.names[0][0] = classify(make_wom(terminal_map(discrete_sset(3, 2), 2)), 0, 0);
        CHECK_THROWS_AS(extend_horn_in_universe(broken, 2, 1, cfg), InputError);
    }
}

TEST_CASE("horn extension fills product bundles") {
    Config cfg = cfg_at(2);
    Subcomplex h = horn(2, 1, 2);
    Product bundle = product(h.set, discrete_sset(2, 2));
    WellOrderedMorphism w = make_wom(bundle.proj_left);

    HornExtension ext = extend_horn_in_universe(w, 2, 1, cfg);
    CHECK(ext.extension_fibration.ok());
    CHECK(ext.joyal_tf.ok());
    CHECK(ext.embed.is_mono());
    CHECK(in_universe(ext.extension, cfg).ok());
    for (int m = 0; m <= 2; ++m) {
        CHECK(ext.extension.map.source()->size(m) ==
              2 * oracle::standard_simplex_level_count(2, m));
        for (const auto& fiber : ext.extension.orders[m]) CHECK(fiber.size() == 2);
    }
    CHECK(maps_equal_pointwise(compose(ext.extension.map, ext.embed),
                               compose(h.inclusion, w.map)));
    CHECK_NOTHROW(wom_order_iso(w, pullback_wom(h.inclusion, ext.extension)));
}

TEST_CASE("horn extension of a contractible bundle goes through the pushforward") {
    Config cfg = cfg_at(2, 8'000'000, 64);
    Subcomplex h = horn(2, 1, 2);
    SSetPtr nerve = pair_groupoid_nerve(2, 2);
    Product bundle = product(h.set, nerve);
    WellOrderedMorphism w = make_wom(bundle.proj_left);

    HornExtension ext = extend_horn_in_universe(w, 2, 1, cfg);
    CHECK(ext.extension_fibration.ok());
    CHECK(ext.joyal_tf.ok());
    CHECK(in_universe(ext.extension, cfg).ok());

    // Over the horn the fibers reproduce the input bundle on the nose.
    for (int m = 0; m <= 2; ++m)
        for (int hid = 0; hid < h.set->size(m); ++hid)
            CHECK(ext.extension.orders[m][h.inclusion.apply(m, hid)].size() ==
                  static_cast<std::size_t>(nerve->size(m)));

    // The fresh fibers list maps out of the horn part of the new cell: four
    // vertex pairs over the missing edge, and as many over the top cell as
    // there are maps from the whole horn into the nerve fiber.
    int missing_edge = standard_simplex_id(2, MonotoneMap{0, 2});
    CHECK(ext.extension.orders[1][missing_edge].size() == 4);
    int top_cell = standard_simplex_id(2, MonotoneMap{0, 1, 2});
    CHECK(ext.extension.orders[2][top_cell].size() == 8);
    CHECK(oracle::count_maps(h.set, nerve, 1'000'000) == 8);

    CHECK_NOTHROW(wom_order_iso(w, pullback_wom(h.inclusion, ext.extension)));
    CHECK(classify(ext.extension, 1, h.inclusion.apply(1, 0)) == classify(w, 1, 0));
}

TEST_CASE("horn extension rejects bad input") {
    Config cfg = cfg_at(2);
    Subcomplex h = horn(2, 1, 2);

    SECTION("base must be the named horn") {
        Product bundle = product(standard_simplex(1, 2), discrete_sset(2, 2));
        WellOrderedMorphism w = make_wom(bundle.proj_left);
        CHECK_THROWS_AS(extend_horn_in_universe(w, 2, 1, cfg), InputError);
        CHECK_THROWS_AS(extend_horn_in_universe(w, 1, 2, cfg), InputError);
    }

    SECTION("non-fibrations are refused") {
        SSetPtr points = discrete_sset(3, 2);
        WellOrderedMorphism w = make_wom(vertices_into(points, h.set));
        CHECK_THROWS_AS(extend_horn_in_universe(w, 2, 1, cfg), InputError);
    }

    SECTION("fibers beyond the cap are refused") {
        Product bundle = product(h.set, discrete_sset(4, 2));
        WellOrderedMorphism w = make_wom(bundle.proj_left);
        CHECK_THROWS_AS(extend_horn_in_universe(w, 2, 1, cfg), CapError);
    }
}
