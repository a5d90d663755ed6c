#include "kanforge/slice.hpp"

#include <algorithm>

namespace kanforge {

SliceObject make_slice(SimplicialMap proj) {
    SliceObject out;
    out.total = proj.source();
    out.proj = std::move(proj);
    return out;
}

SimplicialMap standard_simplex_map(const MonotoneMap& alpha, int n, int max_dim) {
    if (!is_monotone(alpha, n) || alpha.empty())
        throw InputError("standard_simplex_map: not a monotone map into [n]");
    const int m = static_cast<int>(alpha.size()) - 1;
    SSetPtr dm = standard_simplex(m, max_dim);
    SSetPtr dn = standard_simplex(n, max_dim);
    std::vector<std::vector<int>> lv(max_dim + 1);
    for (int k = 0; k <= max_dim; ++k) {
        lv[k].resize(dm->size(k));
        for (int id = 0; id < dm->size(k); ++id)
            lv[k][id] = standard_simplex_id(n, compose_monotone(alpha, standard_simplex_seq(m, k, id)));
    }
    return SimplicialMap(dm, dn, std::move(lv));
}

std::vector<SimplicialMap> maps_over(const SliceObject& a, const SliceObject& b,
                                     long long budget) {
    if (*a.base() != *b.base()) throw InputError("maps_over: objects live over different bases");
    const int N = a.total->max_dim();
    SSetPtr none = empty_sset(N);
    std::vector<std::vector<int>> e(N + 1);
    SimplicialMap into_a(none, a.total, e);
    SimplicialMap into_b(none, b.total, e);
    LiftingProblem square{into_a, into_b, b.proj, a.proj};
    return enumerate_lifts(square, budget);
}

PullbackAlong pullback_along(const SimplicialMap& t, const SliceObject& e) {
    if (*t.target() != *e.base()) throw InputError("pullback_along: base mismatch");
    PullbackAlong out;
    out.raw = pullback(t, e.proj);
    out.object.total = out.raw.set;
    out.object.proj = out.raw.proj_left;
    out.cartesian = out.raw.proj_right;
    return out;
}

namespace {

int find_member(const std::vector<SimplicialMap>& members, const std::vector<std::vector<int>>& lv,
                const char* what) {
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].levels() == lv) return static_cast<int>(i);
    throw InternalError(std::string(what) + ": restricted member not in the fiber list");
}

}  // namespace

InternalHom internal_hom(const SliceObject& e1, const SliceObject& e2, const Config& cfg) {
    cfg.validate();
    if (*e1.base() != *e2.base()) throw InputError("internal_hom: bases differ");
    const SSetPtr& base = e1.base();
    const int N = base->max_dim();
    if (N != cfg.max_dim) throw InputError("internal_hom: base bound differs from max_dim");

    InternalHom hom;
    hom.fibers.resize(N + 1);
    hom.offset.resize(N + 1);
    hom.base_of.resize(N + 1);
    hom.member_of.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        hom.offset[n].assign(base->size(n), 0);
        for (int b = 0; b < base->size(n); ++b) {
            HomFiber fib;
            SimplicialMap yb = yoneda_map(base, n, b);
            fib.dom = pullback_along(yb, e1);
            fib.cod = pullback_along(yb, e2);
            fib.members = maps_over(fib.dom.object, fib.cod.object, cfg.search_budget);
            hom.offset[n][b] = static_cast<int>(hom.base_of[n].size());
            for (std::size_t u = 0; u < fib.members.size(); ++u) {
                hom.base_of[n].push_back(b);
                hom.member_of[n].push_back(static_cast<int>(u));
            }
            hom.fibers[n].push_back(std::move(fib));
        }
    }

    // restriction of member u at (n, b) along alpha : [m] -> [n] to the base
    // simplex b2 = b . alpha at level m
    auto restrict_to = [&](int n, int b, int u, const MonotoneMap& alpha, int m, int b2) {
        const HomFiber& src = hom.fibers[n][b];
        const HomFiber& dst = hom.fibers[m][b2];
        SimplicialMap da = standard_simplex_map(alpha, n, N);
        std::vector<std::vector<int>> lv(N + 1);
        for (int k = 0; k <= N; ++k) {
            lv[k].resize(dst.dom.raw.set->size(k));
            for (int id = 0; id < dst.dom.raw.set->size(k); ++id) {
                auto [d2, x1] = dst.dom.raw.pairs[k][id];
                int j = src.dom.raw.find(k, da.apply(k, d2), x1);
                if (j < 0) throw InternalError("internal_hom: restriction escaped the domain");
                auto [d, x2] = src.cod.raw.pairs[k][src.members[u].apply(k, j)];
                (void)d;
                int id2 = dst.cod.raw.find(k, d2, x2);
                if (id2 < 0) throw InternalError("internal_hom: restriction escaped the codomain");
                lv[k][id] = id2;
            }
        }
        return hom.id_of(m, b2, find_member(dst.members, lv, "internal_hom"));
    };

    SimplicialSetData d;
    d.max_dim = N;
    d.size.resize(N + 1);
    d.face.resize(N + 1);
    d.degen.resize(N + 1);
    for (int n = 0; n <= N; ++n) d.size[n] = static_cast<int>(hom.base_of[n].size());
    for (int n = 1; n <= N; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < d.size[n]; ++id)
                d.face[n][i][id] = restrict_to(n, hom.base_of[n][id], hom.member_of[n][id],
                                               coface(n, i), n - 1, base->face(n, i, hom.base_of[n][id]));
    }
    for (int n = 0; n < N; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < d.size[n]; ++id)
                d.degen[n][i][id] = restrict_to(n, hom.base_of[n][id], hom.member_of[n][id],
                                                codegeneracy(n, i), n + 1,
                                                base->degen(n, i, hom.base_of[n][id]));
    }
    hom.object.total = SimplicialSet::build(std::move(d));
    std::vector<std::vector<int>> pr(N + 1);
    for (int n = 0; n <= N; ++n) pr[n] = hom.base_of[n];
    hom.object.proj = SimplicialMap(hom.object.total, base, std::move(pr));
    return hom;
}

Pushforward pushforward(const SimplicialMap& i, const SliceObject& e, const Config& cfg) {
    cfg.validate();
    if (*i.source() != *e.base()) throw InputError("pushforward: slice base is not the map source");
    const SSetPtr& b = i.target();
    const int N = b->max_dim();
    if (N != cfg.max_dim) throw InputError("pushforward: bound differs from max_dim");

    Pushforward pf;
    pf.fibers.resize(N + 1);
    pf.offset.resize(N + 1);
    pf.base_of.resize(N + 1);
    pf.member_of.resize(N + 1);
    SSetPtr none = empty_sset(N);
    std::vector<std::vector<int>> elv(N + 1);
    for (int n = 0; n <= N; ++n) {
        pf.offset[n].assign(b->size(n), 0);
        for (int bid = 0; bid < b->size(n); ++bid) {
            PushforwardFiber fib;
            fib.shape = pullback(yoneda_map(b, n, bid), i);
            LiftingProblem square{SimplicialMap(none, fib.shape.set, elv),
                                  SimplicialMap(none, e.total, elv), e.proj,
                                  fib.shape.proj_right};
            fib.members = enumerate_lifts(square, cfg.search_budget);
            if (static_cast<int>(fib.members.size()) > cfg.fiber_cap)
                throw CapError("pushforward: fiber exceeds the configured cap", n, bid,
                               static_cast<int>(fib.members.size()));
            pf.offset[n][bid] = static_cast<int>(pf.base_of[n].size());
            for (std::size_t u = 0; u < fib.members.size(); ++u) {
                pf.base_of[n].push_back(bid);
                pf.member_of[n].push_back(static_cast<int>(u));
            }
            pf.fibers[n].push_back(std::move(fib));
        }
    }

    auto restrict_to = [&](int n, int bid, int u, const MonotoneMap& alpha, int m, int b2) {
        const PushforwardFiber& src = pf.fibers[n][bid];
        const PushforwardFiber& dst = pf.fibers[m][b2];
        SimplicialMap da = standard_simplex_map(alpha, n, N);
        std::vector<std::vector<int>> lv(N + 1);
        for (int k = 0; k <= N; ++k) {
            lv[k].resize(dst.shape.set->size(k));
            for (int id = 0; id < dst.shape.set->size(k); ++id) {
                auto [d2, a2] = dst.shape.pairs[k][id];
                int j = src.shape.find(k, da.apply(k, d2), a2);
                if (j < 0) throw InternalError("pushforward: restriction escaped the shape");
                lv[k][id] = src.members[u].apply(k, j);
            }
        }
        return pf.id_of(m, b2, find_member(dst.members, lv, "pushforward"));
    };

    SimplicialSetData d;
    d.max_dim = N;
    d.size.resize(N + 1);
    d.face.resize(N + 1);
    d.degen.resize(N + 1);
    for (int n = 0; n <= N; ++n) d.size[n] = static_cast<int>(pf.base_of[n].size());
    for (int n = 1; n <= N; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int ix = 0; ix <= n; ++ix)
            for (int id = 0; id < d.size[n]; ++id)
                d.face[n][ix][id] = restrict_to(n, pf.base_of[n][id], pf.member_of[n][id],
                                                coface(n, ix), n - 1,
                                                b->face(n, ix, pf.base_of[n][id]));
    }
    for (int n = 0; n < N; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int ix = 0; ix <= n; ++ix)
            for (int id = 0; id < d.size[n]; ++id)
                d.degen[n][ix][id] = restrict_to(n, pf.base_of[n][id], pf.member_of[n][id],
                                                 codegeneracy(n, ix), n + 1,
                                                 b->degen(n, ix, pf.base_of[n][id]));
    }
    pf.object.total = SimplicialSet::build(std::move(d));
    std::vector<std::vector<int>> pr(N + 1);
    for (int n = 0; n <= N; ++n) pr[n] = pf.base_of[n];
    pf.object.proj = SimplicialMap(pf.object.total, b, std::move(pr));
    return pf;
}

SimplicialMap unit_map(const SimplicialMap& i, const SliceObject& y,
                       const PullbackAlong& restricted, const Pushforward& pushed) {
    const int N = y.total->max_dim();
    std::vector<std::vector<int>> lv(N + 1);
    for (int n = 0; n <= N; ++n) {
        lv[n].resize(y.total->size(n));
        for (int yid = 0; yid < y.total->size(n); ++yid) {
            int b = y.proj.apply(n, yid);
            const PushforwardFiber& fib = pushed.fibers[n][b];
            std::vector<std::vector<int>> hl(N + 1);
            for (int k = 0; k <= N; ++k) {
                hl[k].resize(fib.shape.set->size(k));
                for (int s = 0; s < fib.shape.set->size(k); ++s) {
                    auto [d, a] = fib.shape.pairs[k][s];
                    int moved = y.total->apply_operator(n, yid, standard_simplex_seq(n, k, d));
                    int pos = restricted.raw.find(k, a, moved);
                    if (pos < 0) throw InternalError("unit_map: image escaped the restriction");
                    hl[k][s] = pos;
                }
            }
            lv[n][yid] = pushed.id_of(n, b, find_member(fib.members, hl, "unit_map"));
        }
    }
    SimplicialMap eta(y.total, pushed.object.total, std::move(lv));
    for (int n = 0; n <= N; ++n)
        for (int yid = 0; yid < y.total->size(n); ++yid)
            if (pushed.object.proj.apply(n, eta.apply(n, yid)) != y.proj.apply(n, yid))
                throw InternalError("unit_map: not a map over the base");
    (void)i;
    return eta;
}

SimplicialMap counit_map(const SimplicialMap& i, const SliceObject& e,
                         const Pushforward& pushed, const PullbackAlong& restricted) {
    const int N = e.total->max_dim();
    std::vector<std::vector<int>> lv(N + 1);
    for (int n = 0; n <= N; ++n) {
        int top = standard_simplex_id(n, identity_monotone(n));
        lv[n].resize(restricted.raw.set->size(n));
        for (int id = 0; id < restricted.raw.set->size(n); ++id) {
            auto [a, pfid] = restricted.raw.pairs[n][id];
            int b = pushed.base_of[n][pfid];
            const PushforwardFiber& fib = pushed.fibers[n][b];
            int s = fib.shape.find(n, top, a);
            if (s < 0) throw InternalError("counit_map: identity simplex missing from the shape");
            lv[n][id] = fib.members[pushed.member_of[n][pfid]].apply(n, s);
        }
    }
    SimplicialMap eps(restricted.raw.set, e.total, std::move(lv));
    for (int n = 0; n <= N; ++n)
        for (int id = 0; id < restricted.raw.set->size(n); ++id)
            if (e.proj.apply(n, eps.apply(n, id)) != restricted.raw.pairs[n][id].first)
                throw InternalError("counit_map: not a map over the base");
    (void)i;
    return eps;
}

SimplicialMap counit_inverse(const SimplicialMap& i, const SliceObject& e,
                             const Pushforward& pushed, const PullbackAlong& restricted) {
    if (!i.is_mono()) throw InputError("counit_inverse: map is not a monomorphism");
    const int N = e.total->max_dim();
    std::vector<std::vector<int>> lv(N + 1);
    for (int n = 0; n <= N; ++n) {
        lv[n].resize(e.total->size(n));
        for (int eid = 0; eid < e.total->size(n); ++eid) {
            int a = e.proj.apply(n, eid);
            int b = i.apply(n, a);
            const PushforwardFiber& fib = pushed.fibers[n][b];
            std::vector<std::vector<int>> hl(N + 1);
            for (int k = 0; k <= N; ++k) {
                hl[k].resize(fib.shape.set->size(k));
                for (int s = 0; s < fib.shape.set->size(k); ++s) {
                    auto [d, a2] = fib.shape.pairs[k][s];
                    MonotoneMap seq = standard_simplex_seq(n, k, d);
                    // a2 lies over b . d; the mono makes it a . seq
                    if (i.apply(k, e.base()->apply_operator(n, a, seq)) != i.apply(k, a2))
                        throw InternalError("counit_inverse: shape simplex not in the image");
                    hl[k][s] = e.total->apply_operator(n, eid, seq);
                }
            }
            int member = find_member(fib.members, hl, "counit_inverse");
            int pos = restricted.raw.find(n, a, pushed.id_of(n, b, member));
            if (pos < 0) throw InternalError("counit_inverse: pair missing from the restriction");
            lv[n][eid] = pos;
        }
    }
    SimplicialMap inv(e.total, restricted.raw.set, std::move(lv));
    SimplicialMap eps = counit_map(i, e, pushed, restricted);
    for (int n = 0; n <= N; ++n) {
        for (int eid = 0; eid < e.total->size(n); ++eid)
            if (eps.apply(n, inv.apply(n, eid)) != eid)
                throw InternalError("counit_inverse: counit o inverse is not the identity");
        for (int id = 0; id < restricted.raw.set->size(n); ++id)
            if (inv.apply(n, eps.apply(n, id)) != id)
                throw InternalError("counit_inverse: inverse o counit is not the identity");
    }
    return inv;
}

JoyalExtension joyal_extend(const SimplicialMap& i, const SliceObject& tf, const Config& cfg) {
    if (!i.is_mono()) throw InputError("joyal_extend: inclusion is not a monomorphism");
    RlpReport input_rep = is_trivial_fibration(tf.proj, cfg);
    if (input_rep.status == RlpStatus::FailsLift)
        throw InputError("joyal_extend: input fails boundary lifting within the bound");
    if (input_rep.status == RlpStatus::Exhausted)
        throw BudgetError("joyal_extend: could not certify the input within budget",
                          cfg.search_budget);

    JoyalExtension out;
    out.pushed = pushforward(i, tf, cfg);
    out.restricted = pullback_along(i, out.pushed.object);
    out.counit = counit_map(i, tf, out.pushed, out.restricted);
    out.counit_inv = counit_inverse(i, tf, out.pushed, out.restricted);
    out.over_map = compose(out.restricted.cartesian, out.counit_inv);
    const int N = tf.total->max_dim();
    for (int n = 0; n <= N; ++n)
        for (int eid = 0; eid < tf.total->size(n); ++eid)
            if (out.pushed.object.proj.apply(n, out.over_map.apply(n, eid)) !=
                i.apply(n, tf.proj.apply(n, eid)))
                throw InternalError("joyal_extend: comparison square does not commute");
    out.extended_tf = is_trivial_fibration(out.pushed.object.proj, cfg);
    return out;
}

}  // namespace kanforge
