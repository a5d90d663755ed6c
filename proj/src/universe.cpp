#include "kanforge/universe.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "kanforge/errors.hpp"
#include "kanforge/homotopy.hpp"

namespace kanforge {

namespace {

int iota_id(int n) { return standard_simplex_id(n, identity_monotone(n)); }

/// Position of `id` within one fiber list; fibers are small, linear scan.
int position_in(const std::vector<int>& fiber, int id, const char* who) {
    for (int r = 0; r < static_cast<int>(fiber.size()); ++r)
        if (fiber[r] == id) return r;
    throw InternalError(std::string(who) + ": simplex missing from its fiber order");
}

}  // namespace

WellOrderedMorphism make_wom(SimplicialMap map) {
    const SSetPtr& total = map.source();
    const SSetPtr& base = map.target();
    int nd = total->max_dim();
    std::vector<std::vector<std::vector<int>>> orders(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        orders[n].resize(base->size(n));
        for (int id = 0; id < total->size(n); ++id) orders[n][map.apply(n, id)].push_back(id);
    }
    return {std::move(map), std::move(orders)};
}

WellOrderedMorphism well_order(SimplicialMap map, const Config& cfg) {
    WellOrderedMorphism wom = make_wom(std::move(map));
    check_small(wom, cfg);
    return wom;
}

void validate_wom(const WellOrderedMorphism& wom) {
    const SSetPtr& total = wom.map.source();
    const SSetPtr& base = wom.map.target();
    int nd = total->max_dim();
    if (static_cast<int>(wom.orders.size()) != nd + 1)
        throw InputError("well-order: level count does not match the dimension bound");
    for (int n = 0; n <= nd; ++n) {
        if (static_cast<int>(wom.orders[n].size()) != base->size(n))
            throw InputError("well-order: one order list per base simplex is required");
        std::vector<char> seen(total->size(n), 0);
        int listed = 0;
        for (int bid = 0; bid < base->size(n); ++bid)
            for (int id : wom.orders[n][bid]) {
                if (id < 0 || id >= total->size(n))
                    throw InputError("well-order: simplex id out of range");
                if (wom.map.apply(n, id) != bid)
                    throw InputError("well-order: listed simplex lies over a different base simplex");
                if (seen[id]) throw InputError("well-order: simplex listed twice");
                seen[id] = 1;
                ++listed;
            }
        if (listed != total->size(n))
            throw InputError("well-order: some simplex is missing from the fiber orders");
    }
}

void check_small(const WellOrderedMorphism& wom, const Config& cfg) {
    for (int n = 0; n < static_cast<int>(wom.orders.size()); ++n)
        for (int bid = 0; bid < static_cast<int>(wom.orders[n].size()); ++bid) {
            int size = static_cast<int>(wom.orders[n][bid].size());
            if (size > cfg.fiber_cap)
                throw CapError("fiber exceeds the configured cap", n, bid, size);
        }
}

UniverseReport in_universe(const WellOrderedMorphism& wom, const Config& cfg) {
    UniverseReport rep;
    try {
        validate_wom(wom);
        rep.well_formed = true;
    } catch (const InputError& e) {
        rep.detail = e.what();
        return rep;
    }
    try {
        check_small(wom, cfg);
        rep.small = true;
    } catch (const CapError& e) {
        rep.detail = e.what();
        return rep;
    }
    rep.fibration = is_fibration(wom.map, cfg);
    if (rep.fibration.status == RlpStatus::FailsLift)
        rep.detail = "a horn square over the base has no filler";
    else if (rep.fibration.status == RlpStatus::Exhausted)
        rep.detail = "horn checking ran out of budget";
    return rep;
}

bool UniverseSimplex::operator==(const UniverseSimplex& other) const {
    return level == other.level && wom.map == other.wom.map && wom.orders == other.wom.orders;
}

int top_fiber_size(const UniverseSimplex& u) {
    return static_cast<int>(u.wom.orders[u.level][iota_id(u.level)].size());
}

RlpReport certify_kan(UniverseSimplex& u, const Config& cfg) {
    RlpReport report = is_fibration(u.wom.map, cfg);
    if (report.ok())
        u.kan_flag = KanFlag::Certified;
    else if (report.status == RlpStatus::FailsLift)
        u.kan_flag = KanFlag::Failed;
    return report;
}

CanonicalForm canonicalize(const WellOrderedMorphism& wom) {
    validate_wom(wom);
    const SSetPtr& total = wom.map.source();
    int nd = total->max_dim();

    std::vector<std::vector<int>> new_of_old(nd + 1), old_of_new(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        new_of_old[n].assign(total->size(n), -1);
        old_of_new[n].resize(total->size(n));
        int next = 0;
        for (const auto& fiber : wom.orders[n])
            for (int id : fiber) {
                new_of_old[n][id] = next;
                old_of_new[n][next] = id;
                ++next;
            }
    }

    SimplicialSetData d;
    d.max_dim = nd;
    d.size.resize(nd + 1);
    d.face.resize(nd + 1);
    d.degen.resize(nd + 1);
    for (int n = 0; n <= nd; ++n) d.size[n] = total->size(n);
    for (int n = 1; n <= nd; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < d.size[n]; ++id)
                d.face[n][i][id] = new_of_old[n - 1][total->face(n, i, old_of_new[n][id])];
    }
    for (int n = 0; n < nd; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < d.size[n]; ++id)
                d.degen[n][i][id] = new_of_old[n + 1][total->degen(n, i, old_of_new[n][id])];
    }
    SSetPtr canon = SimplicialSet::build(std::move(d));

    std::vector<std::vector<int>> lv(nd + 1);
    std::vector<std::vector<std::vector<int>>> orders(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        lv[n].resize(canon->size(n));
        orders[n].resize(wom.orders[n].size());
        int next = 0;
        for (int bid = 0; bid < static_cast<int>(wom.orders[n].size()); ++bid)
            for (std::size_t r = 0; r < wom.orders[n][bid].size(); ++r) {
                lv[n][next] = bid;
                orders[n][bid].push_back(next);
                ++next;
            }
    }

    CanonicalForm out;
    out.wom = {SimplicialMap(canon, wom.map.target(), std::move(lv)), std::move(orders)};
    out.relabel = SimplicialMap(total, canon, std::move(new_of_old));
    return out;
}

UniverseSimplex name_of(const WellOrderedMorphism& wom, int level) {
    int nd = wom.map.source()->max_dim();
    if (level < 0 || level > nd) throw InputError("universe name: level out of range");
    if (*wom.map.target() != *standard_simplex(level, nd))
        throw InputError("universe name: base must be the standard simplex of the level");
    UniverseSimplex u;
    u.level = level;
    u.wom = canonicalize(wom).wom;
    return u;
}

WellOrderedMorphism pullback_wom(const SimplicialMap& t, const WellOrderedMorphism& wom) {
    PullbackSet raw = pullback(t, wom.map);
    const SSetPtr& nb = t.source();
    int nd = nb->max_dim();
    std::vector<std::vector<std::vector<int>>> orders(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        orders[n].resize(nb->size(n));
        for (int bid = 0; bid < nb->size(n); ++bid)
            for (int e : wom.orders[n][t.apply(n, bid)]) {
                int pid = raw.find(n, bid, e);
                if (pid < 0) throw InternalError("pullback order: pair not found");
                orders[n][bid].push_back(pid);
            }
    }
    return {raw.proj_left, std::move(orders)};
}

UniverseSimplex classify(const WellOrderedMorphism& wom, int n, int id) {
    SimplicialMap yo = yoneda_map(wom.map.target(), n, id);
    return name_of(pullback_wom(yo, wom), n);
}

UniverseSimplex universe_apply(const UniverseSimplex& u, const MonotoneMap& op) {
    int m = static_cast<int>(op.size()) - 1;
    int nd = u.wom.map.target()->max_dim();
    if (m < 0 || m > nd || !is_monotone(op, u.level))
        throw InputError("universe action: operator is not monotone into the level");
    SimplicialMap t = standard_simplex_map(op, u.level, nd);
    return name_of(pullback_wom(t, u.wom), m);
}

PointedUniverseSimplex pointed_apply(const PointedUniverseSimplex& u, const MonotoneMap& op) {
    const auto& top = u.name.wom.orders[u.name.level][iota_id(u.name.level)];
    if (u.point < 0 || u.point >= static_cast<int>(top.size()))
        throw InputError("universe action: point is outside the top fiber");
    PointedUniverseSimplex out;
    out.name = universe_apply(u.name, op);
    int m = static_cast<int>(op.size()) - 1;
    int moved = u.name.wom.map.source()->apply_operator(u.name.level, top[u.point], op);
    int opid = standard_simplex_id(u.name.level, op);
    out.point = position_in(u.name.wom.orders[m][opid], moved, "universe action");
    return out;
}

UniverseChart classify_all(const WellOrderedMorphism& wom) {
    const SSetPtr& base = wom.map.target();
    int nd = base->max_dim();
    UniverseChart chart;
    chart.base = base;
    chart.names.resize(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        chart.names[n].reserve(base->size(n));
        for (int id = 0; id < base->size(n); ++id) chart.names[n].push_back(classify(wom, n, id));
    }
    return chart;
}

bool chart_consistent(const UniverseChart& chart) {
    const SSetPtr& base = chart.base;
    int nd = base->max_dim();
    if (static_cast<int>(chart.names.size()) != nd + 1) return false;
    for (int n = 0; n <= nd; ++n) {
        if (static_cast<int>(chart.names[n].size()) != base->size(n)) return false;
        for (int id = 0; id < base->size(n); ++id)
            if (chart.names[n][id].level != n) return false;
    }
    for (int n = 1; n <= nd; ++n)
        for (int id = 0; id < base->size(n); ++id)
            for (int i = 0; i <= n; ++i)
                if (universe_apply(chart.names[n][id], coface(n, i)) !=
                    chart.names[n - 1][base->face(n, i, id)])
                    return false;
    for (int n = 0; n < nd; ++n)
        for (int id = 0; id < base->size(n); ++id)
            for (int i = 0; i <= n; ++i)
                if (universe_apply(chart.names[n][id], codegeneracy(n, i)) !=
                    chart.names[n + 1][base->degen(n, i, id)])
                    return false;
    return true;
}

WellOrderedMorphism reconstruct(const UniverseChart& chart) {
    if (!chart_consistent(chart))
        throw InputError("reconstruction requires a simplicially consistent chart");
    const SSetPtr& base = chart.base;
    int nd = base->max_dim();

    std::vector<std::vector<int>> offset(nd + 1);
    std::vector<int> total_size(nd + 1, 0);
    for (int n = 0; n <= nd; ++n) {
        offset[n].resize(base->size(n));
        for (int id = 0; id < base->size(n); ++id) {
            offset[n][id] = total_size[n];
            total_size[n] += top_fiber_size(chart.names[n][id]);
        }
    }

    SimplicialSetData d;
    d.max_dim = nd;
    d.size = total_size;
    d.face.resize(nd + 1);
    d.degen.resize(nd + 1);
    for (int n = 1; n <= nd; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int id = 0; id < base->size(n); ++id) {
            const UniverseSimplex& nm = chart.names[n][id];
            const auto& top = nm.wom.orders[n][iota_id(n)];
            for (int i = 0; i <= n; ++i) {
                int fid = standard_simplex_id(n, coface(n, i));
                for (int r = 0; r < static_cast<int>(top.size()); ++r) {
                    int moved = nm.wom.map.source()->face(n, i, top[r]);
                    int rr = position_in(nm.wom.orders[n - 1][fid], moved, "reconstruction");
                    d.face[n][i][offset[n][id] + r] = offset[n - 1][base->face(n, i, id)] + rr;
                }
            }
        }
    }
    for (int n = 0; n < nd; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int id = 0; id < base->size(n); ++id) {
            const UniverseSimplex& nm = chart.names[n][id];
            const auto& top = nm.wom.orders[n][iota_id(n)];
            for (int i = 0; i <= n; ++i) {
                int fid = standard_simplex_id(n, codegeneracy(n, i));
                for (int r = 0; r < static_cast<int>(top.size()); ++r) {
                    int moved = nm.wom.map.source()->degen(n, i, top[r]);
                    int rr = position_in(nm.wom.orders[n + 1][fid], moved, "reconstruction");
                    d.degen[n][i][offset[n][id] + r] = offset[n + 1][base->degen(n, i, id)] + rr;
                }
            }
        }
    }
    SSetPtr total = SimplicialSet::build(std::move(d));

    std::vector<std::vector<int>> lv(nd + 1);
    std::vector<std::vector<std::vector<int>>> orders(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        lv[n].resize(total->size(n));
        orders[n].resize(base->size(n));
        for (int id = 0; id < base->size(n); ++id)
            for (int r = 0; r < top_fiber_size(chart.names[n][id]); ++r) {
                lv[n][offset[n][id] + r] = id;
                orders[n][id].push_back(offset[n][id] + r);
            }
    }
    return {SimplicialMap(total, base, std::move(lv)), std::move(orders)};
}

SimplicialMap wom_order_iso(const WellOrderedMorphism& from, const WellOrderedMorphism& to) {
    validate_wom(from);
    validate_wom(to);
    if (*from.map.target() != *to.map.target())
        throw InputError("order isomorphism: bases differ");
    int nd = from.map.source()->max_dim();
    if (nd != to.map.source()->max_dim())
        throw InputError("order isomorphism: dimension bounds differ");

    std::vector<std::vector<int>> lv(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        lv[n].resize(from.map.source()->size(n));
        for (int bid = 0; bid < static_cast<int>(from.orders[n].size()); ++bid) {
            const auto& a = from.orders[n][bid];
            const auto& b = to.orders[n][bid];
            if (a.size() != b.size())
                throw InternalError("order isomorphism: fiber sizes differ");
            for (std::size_t r = 0; r < a.size(); ++r) lv[n][a[r]] = b[r];
        }
    }
    SimplicialMap iso;
    try {
        iso = SimplicialMap(from.map.source(), to.map.source(), std::move(lv));
    } catch (const InputError& e) {
        throw InternalError(std::string("order isomorphism: bijection is not simplicial: ") +
                            e.what());
    }
    if (!maps_equal_pointwise(compose(to.map, iso), from.map))
        throw InternalError("order isomorphism: comparison does not lie over the base");
    return iso;
}

HornExtension extend_horn_in_universe(const WellOrderedMorphism& input, int n, int k,
                                      const Config& cfg) {
    validate_wom(input);
    check_small(input, cfg);
    int nd = input.map.source()->max_dim();
    if (n < 1 || n > nd) throw InputError("horn extension: level out of range");
    if (k < 0 || k > n) throw InputError("horn extension: horn index out of range");
    Subcomplex h = horn(n, k, nd);
    if (*input.map.target() != *h.set)
        throw InputError("horn extension: base must be the horn complex");

    RlpReport fib = is_fibration(input.map, cfg);
    if (fib.status == RlpStatus::FailsLift)
        throw InputError("horn extension: input is not a fibration within the bound");
    if (fib.status == RlpStatus::Exhausted)
        throw BudgetError("horn extension: fibration check ran out of budget",
                          cfg.search_budget);

    SliceObject q = make_slice(input.map);
    QuillenFactorization qf = quillen_factorize(q, cfg);
    if (qf.status == QuillenStatus::Exhausted)
        throw BudgetError("horn extension: minimal model search ran out of budget",
                          cfg.search_budget);
    if (qf.status == QuillenStatus::NoRetraction)
        throw InternalError("horn extension: no retraction onto the minimal model");
    if (!qf.retraction_tf || qf.retraction_tf->status == RlpStatus::FailsLift)
        throw InternalError("horn extension: minimal retraction is not a trivial fibration");
    if (qf.retraction_tf->status == RlpStatus::Exhausted)
        throw BudgetError("horn extension: certifying the minimal retraction ran out of budget",
                          cfg.search_budget);

    Trivialization triv = minimal_trivialize(qf.minimal_over, h, n, k, cfg);

    Product ext_frame = product(triv.fiber, standard_simplex(n, nd));
    SimplicialMap frame_incl =
        product_map(triv.frame, ext_frame, identity_map(triv.fiber), h.inclusion);
    SimplicialMap collapse = compose(triv.iso, qf.dr->retraction);
    JoyalExtension je = joyal_extend(frame_incl, make_slice(collapse), cfg);

    SimplicialMap phat = compose(ext_frame.proj_right, je.pushed.object.proj);
    const SSetPtr& yhat = je.pushed.object.total;
    const SSetPtr& simplex = ext_frame.right;

    // Fiber orders: over the horn, transport the input orders through the
    // embedding; over new simplices, ascending extension ids.
    std::vector<std::vector<int>> pos_in(nd + 1), inv(nd + 1);
    for (int m = 0; m <= nd; ++m) {
        pos_in[m].assign(input.map.source()->size(m), -1);
        for (const auto& fiber : input.orders[m])
            for (int r = 0; r < static_cast<int>(fiber.size()); ++r) pos_in[m][fiber[r]] = r;
        inv[m].assign(yhat->size(m), -1);
        for (int y = 0; y < input.map.source()->size(m); ++y) {
            int im = je.over_map.apply(m, y);
            if (inv[m][im] >= 0) throw InternalError("horn extension: embedding is not injective");
            inv[m][im] = y;
        }
    }
    std::vector<std::vector<std::vector<int>>> orders(nd + 1);
    for (int m = 0; m <= nd; ++m) {
        orders[m].resize(simplex->size(m));
        for (int y = 0; y < yhat->size(m); ++y) orders[m][phat.apply(m, y)].push_back(y);
        for (int d = 0; d < simplex->size(m); ++d) {
            int hid = h.new_of_old[m][d];
            if (hid < 0) continue;
            auto& bucket = orders[m][d];
            const auto& original = input.orders[m][hid];
            if (bucket.size() != original.size())
                throw InternalError("horn extension: fiber over the horn changed size");
            std::vector<int> arranged(bucket.size(), -1);
            for (int y : bucket) {
                if (inv[m][y] < 0)
                    throw InternalError("horn extension: fiber over the horn gained a simplex");
                arranged[pos_in[m][inv[m][y]]] = y;
            }
            bucket = std::move(arranged);
        }
    }

    HornExtension out;
    out.extension = {phat, std::move(orders)};
    out.embed = je.over_map;
    out.joyal_tf = je.extended_tf;
    out.homotopy_searches = qf.homotopy_searches;
    validate_wom(out.extension);
    check_small(out.extension, cfg);

    out.extension_fibration = is_fibration(phat, cfg);
    if (out.extension_fibration.status == RlpStatus::FailsLift)
        throw InternalError("horn extension: the extension is not a fibration within the bound");

    if (!maps_equal_pointwise(compose(phat, out.embed), compose(h.inclusion, input.map)))
        throw InternalError("horn extension: the embedding does not lie over the inclusion");
    wom_order_iso(input, pullback_wom(h.inclusion, out.extension));
    for (int m = 0; m <= nd; ++m)
        for (int hid = 0; hid < h.set->size(m); ++hid)
            if (classify(out.extension, m, h.inclusion.apply(m, hid)) != classify(input, m, hid))
                throw InternalError("horn extension: restriction differs from the input");
    return out;
}

HornExtension extend_horn_in_universe(const UniverseChart& chart, int n, int k,
                                      const Config& cfg) {
    if (!chart_consistent(chart)) throw InputError("horn extension: chart is not simplicial");
    return extend_horn_in_universe(reconstruct(chart), n, k, cfg);
}

}  // namespace kanforge
