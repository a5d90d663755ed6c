#include "kanforge/homotopy.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kanforge/errors.hpp"

namespace kanforge {

namespace {

int uf_find(std::vector<int>& up, int a) {
    while (up[a] != a) {
        up[a] = up[up[a]];
        a = up[a];
    }
    return a;
}

int delta1_tower(int level, int v) {
    return standard_simplex_id(1, MonotoneMap(level + 1, v));
}

void require_over(const SimplicialMap& w, const SliceObject& e1, const SliceObject& e2,
                  const char* who) {
    if (!(*w.source() == *e1.total) || !(*w.target() == *e2.total) ||
        !(*e1.base() == *e2.base()))
        throw InputError(std::string(who) + ": map endpoints do not match the slice objects");
    if (!maps_equal_pointwise(compose(e2.proj, w), e1.proj))
        throw InputError(std::string(who) + ": map does not commute with the projections");
}

bool is_point(const SSetPtr& b) { return *b == *discrete_sset(1, b->max_dim()); }

}  // namespace

std::vector<std::vector<char>> image_mask(const SimplicialMap& w) {
    int nd = w.target()->max_dim();
    std::vector<std::vector<char>> m(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        m[n].assign(w.target()->size(n), 0);
        for (int x = 0; x < w.source()->size(n); ++x) m[n][w.apply(n, x)] = 1;
    }
    return m;
}

CylinderPins::CylinderPins(const Product& c) : cyl(&c) {
    int nd = c.set->max_dim();
    mask.resize(nd + 1);
    val.resize(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        mask[n].assign(c.set->size(n), 0);
        val[n].assign(c.set->size(n), -1);
    }
}

void CylinderPins::pin(int n, int id, int v) {
    if (mask[n][id]) {
        if (val[n][id] != v) throw InternalError("homotopy pinning: inconsistent prescriptions");
        return;
    }
    mask[n][id] = 1;
    val[n][id] = v;
}

void CylinderPins::pin_time_slice(const SimplicialMap& f, int time) {
    int nd = cyl->set->max_dim();
    for (int n = 0; n <= nd; ++n) {
        int t = delta1_tower(n, time);
        for (int x = 0; x < cyl->left->size(n); ++x)
            pin(n, cyl->index(n, x, t), f.apply(n, x));
    }
}

void CylinderPins::pin_constant_cylinder(const std::vector<std::vector<char>>& sub,
                                         const SimplicialMap& f) {
    int nd = cyl->set->max_dim();
    for (int n = 0; n <= nd; ++n)
        for (int id = 0; id < cyl->set->size(n); ++id) {
            auto [x, t] = cyl->decode(n, id);
            (void)t;
            if (sub[n][x]) pin(n, id, f.apply(n, x));
        }
}

LiftingProblem CylinderPins::problem(const SimplicialMap& right,
                                     const SimplicialMap& bottom) const {
    Subcomplex s = subcomplex(cyl->set, mask);
    int nd = cyl->set->max_dim();
    std::vector<std::vector<int>> lv(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        lv[n].resize(s.set->size(n));
        for (int i = 0; i < s.set->size(n); ++i) lv[n][i] = val[n][s.old_of_new[n][i]];
    }
    LiftingProblem p;
    p.left = s.inclusion;
    p.top = SimplicialMap(s.set, right.source(), std::move(lv));
    p.right = right;
    p.bottom = bottom;
    return p;
}

// --- path components ----------------------------------------------------

std::vector<int> pi0_labels(const SSetPtr& x) {
    int nv = x->size(0);
    std::vector<int> up(nv);
    std::iota(up.begin(), up.end(), 0);
    for (int e = 0; e < x->size(1); ++e) {
        int a = uf_find(up, x->face(1, 0, e));
        int b = uf_find(up, x->face(1, 1, e));
        if (a != b) up[std::max(a, b)] = std::min(a, b);
    }
    std::vector<int> out(nv);
    for (int v = 0; v < nv; ++v) out[v] = uf_find(up, v);
    return out;
}

int pi0_count(const SSetPtr& x) {
    auto labels = pi0_labels(x);
    int c = 0;
    for (std::size_t v = 0; v < labels.size(); ++v)
        if (labels[v] == static_cast<int>(v)) ++c;
    return c;
}

// --- cylinders and homotopies -------------------------------------------

Cylinder make_cylinder(const SSetPtr& x) {
    int nd = x->max_dim();
    Product p = product(x, standard_simplex(1, nd));
    std::vector<std::vector<int>> lv0(nd + 1), lv1(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        lv0[n].resize(x->size(n));
        lv1[n].resize(x->size(n));
        int t0 = delta1_tower(n, 0), t1 = delta1_tower(n, 1);
        for (int id = 0; id < x->size(n); ++id) {
            lv0[n][id] = p.index(n, id, t0);
            lv1[n][id] = p.index(n, id, t1);
        }
    }
    SimplicialMap at0(x, p.set, std::move(lv0));
    SimplicialMap at1(x, p.set, std::move(lv1));
    return Cylinder{std::move(p), std::move(at0), std::move(at1)};
}

SimplicialMap constant_homotopy(const Cylinder& cyl, const SimplicialMap& f) {
    return compose(f, cyl.prod.proj_left);
}

SimplicialMap Homotopy::start() const { return compose(map, cylinder.at0); }

SimplicialMap Homotopy::end() const { return compose(map, cylinder.at1); }

// --- deformation retractions --------------------------------------------

DrResult find_deformation_retraction(const SimplicialMap& w, const SliceObject& e1,
                                     const SliceObject& e2, const Config& cfg) {
    require_over(w, e1, e2, "deformation retraction search");
    if (!w.is_mono())
        throw InputError("deformation retraction search requires a monomorphism");
    std::vector<SimplicialMap> retractions;
    LiftingProblem rp{w, identity_map(e1.total), e1.proj, e2.proj};
    try {
        retractions = enumerate_lifts(rp, cfg.search_budget);
    } catch (const BudgetError&) {
        return DrExhausted{cfg.search_budget};
    }
    Cylinder cyl = make_cylinder(e2.total);
    SimplicialMap bottom = compose(e2.proj, cyl.prod.proj_left);
    std::vector<std::vector<char>> wimg = image_mask(w);
    long long nodes = 0;
    bool exhausted = false;
    int tried = 0;
    for (const SimplicialMap& r : retractions) {
        ++tried;
        CylinderPins pb(cyl.prod);
        pb.pin_time_slice(identity_map(e2.total), 0);
        pb.pin_time_slice(compose(w, r), 1);
        pb.pin_constant_cylinder(wimg, identity_map(e2.total));
        LiftResult res = solve_lifting(pb.problem(e2.proj, bottom), cfg.search_budget);
        if (auto* f = std::get_if<Filler>(&res)) {
            nodes += f->nodes;
            return DrFound{DeformationRetraction{r, Homotopy{cyl, std::move(f->diagonal)}},
                           nodes};
        }
        if (auto* rr = std::get_if<Refuted>(&res)) nodes += rr->nodes;
        if (std::holds_alternative<Exhausted>(res)) exhausted = true;
    }
    if (exhausted) return DrExhausted{cfg.search_budget};
    return DrRefuted{nodes, tried};
}

bool verify_deformation_retraction(const SimplicialMap& w, const SliceObject& e1,
                                   const SliceObject& e2, const DeformationRetraction& dr) {
    try {
        require_over(w, e1, e2, "deformation retraction check");
        const SimplicialMap& r = dr.retraction;
        if (!(*r.source() == *e2.total) || !(*r.target() == *e1.total)) return false;
        if (!maps_equal_pointwise(compose(r, w), identity_map(e1.total))) return false;
        if (!maps_equal_pointwise(compose(e1.proj, r), e2.proj)) return false;
        const Homotopy& h = dr.homotopy;
        if (!(*h.cylinder.prod.left == *e2.total)) return false;
        if (!(*h.map.source() == *h.cylinder.prod.set)) return false;
        if (!(*h.map.target() == *e2.total)) return false;
        if (!maps_equal_pointwise(h.start(), identity_map(e2.total))) return false;
        if (!maps_equal_pointwise(h.end(), compose(w, r))) return false;
        if (!maps_equal_pointwise(compose(e2.proj, h.map),
                                  compose(e2.proj, h.cylinder.prod.proj_left)))
            return false;
        int nd = e2.total->max_dim();
        for (int n = 0; n <= nd; ++n)
            for (int x = 0; x < e1.total->size(n); ++x) {
                int y = w.apply(n, x);
                for (int t = 0; t < h.cylinder.prod.right->size(n); ++t)
                    if (h.map.apply(n, h.cylinder.prod.index(n, y, t)) != y) return false;
            }
        return true;
    } catch (const InputError&) {
        return false;
    } catch (const InternalError&) {
        return false;
    }
}

std::optional<Homotopy> search_homotopy_over(const SliceObject& src, const SliceObject& dst,
                                             const SimplicialMap& u, const SimplicialMap& v,
                                             long long budget, bool& exhausted) {
    if (!(*u.source() == *src.total) || !(*v.source() == *src.total) ||
        !(*u.target() == *dst.total) || !(*v.target() == *dst.total))
        throw InputError("homotopy search: map endpoints do not match the slice objects");
    if (!maps_equal_pointwise(compose(dst.proj, u), src.proj) ||
        !maps_equal_pointwise(compose(dst.proj, v), src.proj))
        throw InputError("homotopy search: maps are not over the base");
    Cylinder cyl = make_cylinder(src.total);
    CylinderPins pb(cyl.prod);
    pb.pin_time_slice(u, 0);
    pb.pin_time_slice(v, 1);
    SimplicialMap bottom = compose(src.proj, cyl.prod.proj_left);
    LiftResult r = solve_lifting(pb.problem(dst.proj, bottom), budget);
    if (auto* f = std::get_if<Filler>(&r)) return Homotopy{cyl, std::move(f->diagonal)};
    if (std::holds_alternative<Exhausted>(r)) exhausted = true;
    return std::nullopt;
}

LiftResult fiber_homotopy_rel_boundary(const SliceObject& q, int level, int from_id,
                                       int to_id, long long budget) {
    const SSetPtr& y = q.total;
    int nd = y->max_dim();
    if (level < 0 || level > nd) throw InputError("fiber homotopy: level out of range");
    if (from_id < 0 || from_id >= y->size(level) || to_id < 0 || to_id >= y->size(level))
        throw InputError("fiber homotopy: simplex id out of range");
    if (q.proj.apply(level, from_id) != q.proj.apply(level, to_id))
        throw InputError("fiber homotopy: simplices lie over different base simplices");
    if (level >= 1)
        for (int i = 0; i <= level; ++i)
            if (y->face(level, i, from_id) != y->face(level, i, to_id))
                throw InputError("fiber homotopy: simplices must share every face");
    SSetPtr dm = standard_simplex(level, nd);
    Cylinder cyl = make_cylinder(dm);
    SimplicialMap from_y = yoneda_map(y, level, from_id);
    SimplicialMap to_y = yoneda_map(y, level, to_id);
    CylinderPins pb(cyl.prod);
    pb.pin_time_slice(from_y, 0);
    pb.pin_time_slice(to_y, 1);
    std::vector<std::vector<char>> bd(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        bd[n].assign(dm->size(n), 0);
        for (int d = 0; d < dm->size(n); ++d) {
            MonotoneMap seq = standard_simplex_seq(level, n, d);
            std::vector<char> hit(level + 1, 0);
            for (int v : seq) hit[v] = 1;
            bool onto = std::find(hit.begin(), hit.end(), char(0)) == hit.end();
            bd[n][d] = onto ? 0 : 1;
        }
    }
    pb.pin_constant_cylinder(bd, from_y);
    SimplicialMap bottom = compose(compose(q.proj, from_y), cyl.prod.proj_left);
    return solve_lifting(pb.problem(q.proj, bottom), budget);
}

// --- weak equivalence verdicts ------------------------------------------

WeqVerdict is_weq(const SimplicialMap& w, const SliceObject& e1, const SliceObject& e2,
                  const Config& cfg) {
    require_over(w, e1, e2, "weak equivalence check");
    WeqVerdict v;
    if (w.is_iso()) {
        v.verdict = Tri::Yes;
        v.evidence = WeqEvidence::Isomorphism;
        v.iso_inverse = w.inverse();
        v.reason = "levelwise bijection with simplicial inverse";
        return v;
    }
    RlpReport tf = is_trivial_fibration(w, cfg);
    if (tf.ok()) {
        v.verdict = Tri::Yes;
        v.evidence = WeqEvidence::TrivialFibration;
        v.tf_report = std::move(tf);
        v.reason = "lifts against every boundary inclusion within the bound";
        return v;
    }
    if (tf.status == RlpStatus::Exhausted) v.budget_limited = true;
    if (w.is_mono()) {
        DrResult dr = find_deformation_retraction(w, e1, e2, cfg);
        if (auto* f = std::get_if<DrFound>(&dr)) {
            v.verdict = Tri::Yes;
            v.evidence = WeqEvidence::DeformationRetract;
            v.retraction = std::move(f->dr);
            v.reason = "strong fiberwise deformation retract";
            return v;
        }
        if (std::holds_alternative<DrExhausted>(dr)) v.budget_limited = true;
    }
    {
        std::vector<SimplicialMap> candidates;
        bool cand_ok = true;
        try {
            candidates = maps_over(e2, e1, cfg.search_budget);
        } catch (const BudgetError&) {
            v.budget_limited = true;
            cand_ok = false;
        }
        auto joined = [&](const SliceObject& s, const SimplicialMap& composite)
            -> std::optional<std::pair<Homotopy, bool>> {
            bool ex = false;
            SimplicialMap id = identity_map(s.total);
            if (auto h = search_homotopy_over(s, s, id, composite, cfg.search_budget, ex))
                return std::pair<Homotopy, bool>{std::move(*h), true};
            if (auto h = search_homotopy_over(s, s, composite, id, cfg.search_budget, ex))
                return std::pair<Homotopy, bool>{std::move(*h), false};
            if (ex) v.budget_limited = true;
            return std::nullopt;
        };
        if (cand_ok)
            for (const SimplicialMap& r : candidates) {
                auto hd = joined(e2, compose(w, r));
                if (!hd) continue;
                auto hs = joined(e1, compose(r, w));
                if (!hs) continue;
                v.verdict = Tri::Yes;
                v.evidence = WeqEvidence::HomotopyEquivalence;
                v.hequiv = HomotopyEquivalence{r, std::move(hs->first), hs->second,
                                               std::move(hd->first), hd->second};
                v.reason = "two-sided homotopy inverse over the base";
                return v;
            }
    }
    if (is_point(e1.base())) {
        auto l1 = pi0_labels(e1.total);
        auto l2 = pi0_labels(e2.total);
        int c1 = pi0_count(e1.total), c2 = pi0_count(e2.total);
        bool bijective = true;
        std::vector<char> hit(l2.size(), 0);
        for (std::size_t a = 0; a < l1.size() && bijective; ++a) {
            if (l1[a] != static_cast<int>(a)) continue;
            int img = l2[w.apply(0, static_cast<int>(a))];
            if (hit[img]) bijective = false;
            hit[img] = 1;
        }
        if (bijective)
            for (std::size_t b = 0; b < l2.size(); ++b)
                if (l2[b] == static_cast<int>(b) && !hit[b]) bijective = false;
        if (!bijective) {
            v.verdict = Tri::No;
            v.evidence = WeqEvidence::Pi0Obstruction;
            v.pi0 = Pi0Obstruction{c1, c2, -1};
            v.reason = "induced map on path components is not a bijection";
        } else {
            v.verdict = Tri::Unknown;
            v.reason = "no certificate found within the bound; path components agree";
        }
        return v;
    }
    RlpReport f1 = is_fibration(e1.proj, cfg);
    RlpReport f2 = is_fibration(e2.proj, cfg);
    v.fibration_src = f1;
    v.fibration_dst = f2;
    if (!f1.ok() || !f2.ok()) {
        v.verdict = Tri::Unknown;
        v.reason = "fiberwise reduction needs both projections to be fibrations within the bound";
        v.budget_limited = v.budget_limited || f1.status == RlpStatus::Exhausted ||
                           f2.status == RlpStatus::Exhausted;
        return v;
    }
    auto base_labels = pi0_labels(e1.base());
    bool all_yes = true;
    int nd = e1.total->max_dim();
    for (std::size_t b = 0; b < base_labels.size(); ++b) {
        if (base_labels[b] != static_cast<int>(b)) continue;
        SimplicialMap vm = vertex_map(e1.base(), static_cast<int>(b));
        PullbackAlong f1b = pullback_along(vm, e1);
        PullbackAlong f2b = pullback_along(vm, e2);
        std::vector<std::vector<int>> lv(nd + 1);
        for (int n = 0; n <= nd; ++n) {
            lv[n].resize(f1b.object.total->size(n));
            for (int id = 0; id < f1b.object.total->size(n); ++id) {
                auto [d, x] = f1b.raw.pairs[n][id];
                int img = f2b.raw.find(n, d, w.apply(n, x));
                if (img < 0)
                    throw InternalError("fiberwise reduction: image escapes the fiber");
                lv[n][id] = img;
            }
        }
        SimplicialMap wb(f1b.object.total, f2b.object.total, std::move(lv));
        auto child = std::make_shared<WeqVerdict>(is_weq(wb, f1b.object, f2b.object, cfg));
        v.fiber_vertices.push_back(static_cast<int>(b));
        v.budget_limited = v.budget_limited || child->budget_limited;
        bool no = child->verdict == Tri::No;
        if (child->verdict != Tri::Yes) all_yes = false;
        if (no && child->pi0) {
            v.pi0 = child->pi0;
            v.pi0->base_vertex = static_cast<int>(b);
        }
        v.children.push_back(std::move(child));
        if (no) {
            v.verdict = Tri::No;
            v.evidence = WeqEvidence::Fiberwise;
            v.reason = "fiber over vertex " + std::to_string(b) + " is not equivalent";
            return v;
        }
    }
    if (all_yes) {
        v.verdict = Tri::Yes;
        v.evidence = WeqEvidence::Fiberwise;
        v.reason = "equivalence on the fiber over each base component";
    } else {
        v.verdict = Tri::Unknown;
        v.reason = "no fiber produced a decisive verdict";
    }
    return v;
}

// --- factorization through the mapping cylinder -------------------------

WeqFactorization factor_weq(const SimplicialMap& w, const SliceObject& e1,
                            const SliceObject& e2, const Config& cfg) {
    require_over(w, e1, e2, "factorization");
    WeqFactorization out;
    RlpReport tf = is_trivial_fibration(w, cfg);
    if (tf.ok()) {
        out.kind = FactorKind::TrivialFibration;
        out.tf_report = std::move(tf);
        return out;
    }
    if (w.is_mono()) {
        DrResult dr = find_deformation_retraction(w, e1, e2, cfg);
        if (auto* f = std::get_if<DrFound>(&dr)) {
            out.kind = FactorKind::TrivialCofibration;
            out.dr = std::move(f->dr);
            return out;
        }
    }
    out.kind = FactorKind::Factored;
    Cylinder c1 = make_cylinder(e1.total);
    PushoutSet po = pushout_mono(c1.at1, w);
    int nd = e1.total->max_dim();
    std::vector<std::vector<int>> pl(nd + 1), ql(nd + 1);
    auto put = [](std::vector<int>& t, int at, int v) {
        if (t[at] >= 0 && t[at] != v)
            throw InternalError("mapping cylinder: leg disagreement");
        t[at] = v;
    };
    for (int n = 0; n <= nd; ++n) {
        pl[n].assign(po.set->size(n), -1);
        ql[n].assign(po.set->size(n), -1);
        for (int yid = 0; yid < e2.total->size(n); ++yid) {
            int at = po.from_attached.apply(n, yid);
            put(pl[n], at, e2.proj.apply(n, yid));
            put(ql[n], at, yid);
        }
        for (int xid = 0; xid < c1.prod.set->size(n); ++xid) {
            int at = po.from_ambient.apply(n, xid);
            int x1 = c1.prod.proj_left.apply(n, xid);
            put(pl[n], at, e1.proj.apply(n, x1));
            put(ql[n], at, w.apply(n, x1));
        }
        for (int id = 0; id < po.set->size(n); ++id)
            if (pl[n][id] < 0 || ql[n][id] < 0)
                throw InternalError("mapping cylinder: uncovered simplex");
    }
    SliceObject cyl_over = make_slice(SimplicialMap(po.set, e1.base(), std::move(pl)));
    SimplicialMap collapse(po.set, e2.total, std::move(ql));
    SimplicialMap into = compose(po.from_ambient, c1.at0);
    if (!into.is_mono())
        throw InternalError("mapping cylinder: front inclusion is not mono");
    if (!maps_equal_pointwise(compose(collapse, into), w))
        throw InternalError("mapping cylinder: legs do not compose to the map");
    if (!maps_equal_pointwise(compose(e2.proj, collapse), cyl_over.proj))
        throw InternalError("mapping cylinder: collapse is not over the base");
    if (!maps_equal_pointwise(compose(cyl_over.proj, into), e1.proj))
        throw InternalError("mapping cylinder: front inclusion is not over the base");
    RlpReport ctf = is_trivial_fibration(collapse, cfg);
    std::string missing;
    if (!ctf.ok())
        missing = "collapse is not certified as a trivial fibration within the bound";
    DrResult idr = find_deformation_retraction(into, e1, cyl_over, cfg);
    if (auto* f = std::get_if<DrFound>(&idr)) {
        out.into_dr = std::move(f->dr);
    } else {
        if (!missing.empty()) missing += "; ";
        missing += "no deformation retraction certificate for the cylinder inclusion";
    }
    out.cylinder = std::move(cyl_over);
    out.into_cylinder = std::move(into);
    out.collapse = std::move(collapse);
    out.collapse_tf = std::move(ctf);
    out.missing = std::move(missing);
    return out;
}

// --- minimal model extraction -------------------------------------------

QuillenFactorization quillen_factorize(const SliceObject& q, const Config& cfg) {
    QuillenFactorization out;
    RlpReport infib = is_fibration(q.proj, cfg);
    if (infib.status == RlpStatus::FailsLift)
        throw InputError("minimal model extraction requires a fibration within the bound");
    out.minimality_certified = infib.status != RlpStatus::Exhausted;
    const SSetPtr& y = q.total;
    int nd = y->max_dim();
    std::vector<std::vector<char>> keep(nd + 1);
    for (int n = 0; n <= nd; ++n) keep[n].assign(y->size(n), 0);
    for (int n = 0; n <= nd; ++n) {
        for (int id = 0; id < y->size(n); ++id)
            if (!y->is_nondegenerate(n, id)) {
                const EzForm& ez = y->ez(n, id);
                keep[n][id] = keep[ez.base_level][ez.base_id];
            }
        for (int id = 0; id < y->size(n); ++id) {
            if (!y->is_nondegenerate(n, id)) continue;
            bool faces_ok = true;
            if (n >= 1)
                for (int i = 0; i <= n; ++i)
                    if (!keep[n - 1][y->face(n, i, id)]) {
                        faces_ok = false;
                        break;
                    }
            if (!faces_ok) continue;
            bool duplicate = false;
            for (int z = 0; z < y->size(n) && !duplicate; ++z) {
                if (!keep[n][z]) continue;
                if (q.proj.apply(n, z) != q.proj.apply(n, id)) continue;
                bool same_bd = true;
                if (n >= 1)
                    for (int i = 0; i <= n; ++i)
                        if (y->face(n, i, z) != y->face(n, i, id)) {
                            same_bd = false;
                            break;
                        }
                if (!same_bd) continue;
                for (int dir = 0; dir < 2 && !duplicate; ++dir) {
                    LiftResult r = fiber_homotopy_rel_boundary(
                        q, n, dir == 0 ? id : z, dir == 0 ? z : id, cfg.search_budget);
                    ++out.homotopy_searches;
                    if (has_filler(r))
                        duplicate = true;
                    else if (std::holds_alternative<Exhausted>(r))
                        out.minimality_certified = false;
                }
            }
            if (!duplicate) keep[n][id] = 1;
        }
    }
    out.minimal = subcomplex(y, keep);
    out.minimal_over = make_slice(compose(q.proj, out.minimal.inclusion));
    out.minimal_fibration = is_fibration(out.minimal_over.proj, cfg);
    DrResult dr = find_deformation_retraction(out.minimal.inclusion, out.minimal_over, q, cfg);
    if (auto* f = std::get_if<DrFound>(&dr)) {
        out.status = QuillenStatus::Done;
        if (!maps_equal_pointwise(compose(out.minimal_over.proj, f->dr.retraction), q.proj))
            throw InternalError("minimal model: retraction is not over the base");
        out.retraction_tf = is_trivial_fibration(f->dr.retraction, cfg);
        out.dr = std::move(f->dr);
    } else if (std::holds_alternative<DrRefuted>(dr)) {
        out.status = QuillenStatus::NoRetraction;
        out.note = "no fiberwise deformation retraction onto the selected subcomplex";
    } else {
        out.status = QuillenStatus::Exhausted;
        out.note = "retraction search ran out of budget";
    }
    if (!out.minimality_certified) {
        if (!out.note.empty()) out.note += "; ";
        out.note += "cannot certify minimality: a bounded search was inconclusive";
    }
    return out;
}

// --- trivialization over simplices and horns ----------------------------

Trivialization minimal_trivialize(const SliceObject& p0, const Subcomplex& base_in_simplex,
                                  int simplex_dim, int basepoint_value, const Config& cfg) {
    const SSetPtr& y = p0.total;
    const SSetPtr& base = p0.base();
    int nd = y->max_dim();
    int k = basepoint_value;
    if (simplex_dim < 0 || simplex_dim > nd)
        throw InputError("trivialization: simplex dimension out of range");
    if (k < 0 || k > simplex_dim)
        throw InputError("trivialization: basepoint out of range");
    if (!(*base_in_simplex.set == *base))
        throw InputError("trivialization: base description does not match the projection");
    if (!(*base_in_simplex.inclusion.target() == *standard_simplex(simplex_dim, nd)))
        throw InputError("trivialization: base must sit inside the standard simplex");
    if (base_in_simplex.new_of_old[0][k] < 0)
        throw InputError("trivialization: basepoint vertex is missing from the base");
    RlpReport fib = is_fibration(p0.proj, cfg);
    if (fib.status == RlpStatus::FailsLift)
        throw InputError("trivialization requires a fibration within the bound");
    if (fib.status == RlpStatus::Exhausted)
        throw BudgetError("trivialization: fibration check ran out of budget",
                          cfg.search_budget);

    auto base_seq = [&](int lvl, int bid) {
        return standard_simplex_seq(simplex_dim, lvl,
                                    base_in_simplex.inclusion.apply(lvl, bid));
    };
    auto base_of_seq = [&](int lvl, const MonotoneMap& s) {
        int bid = base_in_simplex.new_of_old[lvl][standard_simplex_id(simplex_dim, s)];
        if (bid < 0)
            throw InputError("trivialization: the base does not contract onto the chosen "
                             "basepoint");
        return bid;
    };

    std::vector<int> tower(nd + 1);
    for (int m = 0; m <= nd; ++m) tower[m] = base_of_seq(m, MonotoneMap(m + 1, k));

    Trivialization out;
    std::vector<std::vector<char>> fmask(nd + 1);
    for (int m = 0; m <= nd; ++m) {
        fmask[m].assign(y->size(m), 0);
        for (int id = 0; id < y->size(m); ++id)
            if (p0.proj.apply(m, id) == tower[m]) fmask[m][id] = 1;
    }
    out.fiber_in_total = subcomplex(y, fmask);
    out.fiber = out.fiber_in_total.set;

    std::vector<Cylinder> cyls;
    std::vector<int> iota_id(nd + 1);
    for (int m = 0; m <= nd; ++m) {
        cyls.push_back(make_cylinder(standard_simplex(m, nd)));
        iota_id[m] = standard_simplex_id(m, identity_monotone(m));
    }

    // Contraction of the base onto vertex k, lifted in two stages per
    // simplex: first from the identity end, then backwards from the shared
    // end toward the constant-k end.
    auto contraction_bottom = [&](int m, int bid, bool stage_b) {
        MonotoneMap bs = base_seq(m, bid);
        std::vector<std::vector<int>> lv(nd + 1);
        for (int lvl = 0; lvl <= nd; ++lvl) {
            const Product& pr = cyls[m].prod;
            lv[lvl].resize(pr.set->size(lvl));
            for (int pid = 0; pid < pr.set->size(lvl); ++pid) {
                auto [d, t] = pr.decode(lvl, pid);
                MonotoneMap ds = standard_simplex_seq(m, lvl, d);
                MonotoneMap ts = standard_simplex_seq(1, lvl, t);
                MonotoneMap rho(lvl + 1);
                for (int j = 0; j <= lvl; ++j) {
                    int sv = bs[ds[j]];
                    rho[j] = ts[j] == 0 ? (stage_b ? k : sv) : std::max(sv, k);
                }
                lv[lvl][pid] = base_of_seq(lvl, rho);
            }
        }
        return SimplicialMap(cyls[m].prod.set, base, std::move(lv));
    };

    std::vector<std::vector<SimplicialMap>> stage_a(nd + 1), stage_b(nd + 1);
    std::vector<std::vector<int>> phi(nd + 1);

    auto pin_faces = [&](CylinderPins& pb, int m, int id,
                         const std::vector<std::vector<SimplicialMap>>& stage) {
        if (m == 0) return;
        for (int lvl = 0; lvl <= nd; ++lvl)
            for (int pid = 0; pid < cyls[m].prod.set->size(lvl); ++pid) {
                auto [d, t] = cyls[m].prod.decode(lvl, pid);
                MonotoneMap ds = standard_simplex_seq(m, lvl, d);
                std::vector<char> hit(m + 1, 0);
                for (int v : ds) hit[v] = 1;
                int miss = -1;
                for (int v = 0; v <= m; ++v)
                    if (!hit[v]) {
                        miss = v;
                        break;
                    }
                if (miss < 0) continue;
                MonotoneMap dp(ds.size());
                for (std::size_t j = 0; j < ds.size(); ++j)
                    dp[j] = ds[j] < miss ? ds[j] : ds[j] - 1;
                int dpid = standard_simplex_id(m - 1, dp);
                int fid = y->face(m, miss, id);
                pb.pin(lvl, pid,
                       stage[m - 1][fid].apply(lvl, cyls[m - 1].prod.index(lvl, dpid, t)));
            }
    };

    for (int m = 0; m <= nd; ++m) {
        stage_a[m].reserve(y->size(m));
        stage_b[m].reserve(y->size(m));
        phi[m].resize(y->size(m));
        for (int id = 0; id < y->size(m); ++id) {
            if (!y->is_nondegenerate(m, id)) {
                const EzForm& ez = y->ez(m, id);
                MonotoneMap op = identity_monotone(ez.base_level);
                for (auto it = ez.word.rbegin(); it != ez.word.rend(); ++it)
                    op = duplicate_entry(op, *it);
                SimplicialMap prism =
                    product_map(cyls[m].prod, cyls[ez.base_level].prod,
                                standard_simplex_map(op, ez.base_level, nd),
                                identity_map(cyls[m].prod.right));
                stage_a[m].push_back(compose(stage_a[ez.base_level][ez.base_id], prism));
                stage_b[m].push_back(compose(stage_b[ez.base_level][ez.base_id], prism));
            } else {
                int bid = p0.proj.apply(m, id);
                MonotoneMap bs = base_seq(m, bid);
                bool a_const = true, b_const = true;
                for (int v : bs) {
                    if (v < k) a_const = false;
                    if (v != k) b_const = false;
                }
                SimplicialMap ya = yoneda_map(y, m, id);
                if (a_const) {
                    stage_a[m].push_back(constant_homotopy(cyls[m], ya));
                } else {
                    CylinderPins pb(cyls[m].prod);
                    pb.pin_time_slice(ya, 0);
                    pin_faces(pb, m, id, stage_a);
                    LiftResult r = solve_lifting(
                        pb.problem(p0.proj, contraction_bottom(m, bid, false)),
                        cfg.search_budget);
                    if (auto* f = std::get_if<Filler>(&r))
                        stage_a[m].push_back(std::move(f->diagonal));
                    else if (std::holds_alternative<Exhausted>(r))
                        throw BudgetError("trivialization: contraction lift ran out of budget",
                                          cfg.search_budget);
                    else
                        throw InternalError(
                            "trivialization: contraction lift refuted; the input is not a "
                            "minimal fibration over this base");
                }
                int yprime = stage_a[m][id].apply(
                    m, cyls[m].prod.index(m, iota_id[m], delta1_tower(m, 1)));
                if (b_const) {
                    stage_b[m].push_back(
                        constant_homotopy(cyls[m], yoneda_map(y, m, yprime)));
                } else {
                    CylinderPins pb(cyls[m].prod);
                    pb.pin_time_slice(yoneda_map(y, m, yprime), 1);
                    pin_faces(pb, m, id, stage_b);
                    LiftResult r = solve_lifting(
                        pb.problem(p0.proj, contraction_bottom(m, bid, true)),
                        cfg.search_budget);
                    if (auto* f = std::get_if<Filler>(&r))
                        stage_b[m].push_back(std::move(f->diagonal));
                    else if (std::holds_alternative<Exhausted>(r))
                        throw BudgetError("trivialization: contraction lift ran out of budget",
                                          cfg.search_budget);
                    else
                        throw InternalError(
                            "trivialization: backward contraction lift refuted; the input is "
                            "not a minimal fibration over this base");
                }
            }
            phi[m][id] = stage_b[m][id].apply(
                m, cyls[m].prod.index(m, iota_id[m], delta1_tower(m, 0)));
        }
    }

    out.frame = product(out.fiber, base);
    out.product_over = make_slice(out.frame.proj_right);
    std::vector<std::vector<int>> glv(nd + 1), ilv(nd + 1);
    for (int m = 0; m <= nd; ++m) {
        if (out.frame.set->size(m) != y->size(m))
            throw InternalError("trivialization: fiber times base has the wrong size");
        glv[m].resize(y->size(m));
        ilv[m].assign(y->size(m), -1);
        for (int id = 0; id < y->size(m); ++id) {
            int fn = out.fiber_in_total.new_of_old[m][phi[m][id]];
            if (fn < 0)
                throw InternalError("trivialization: transported simplex left the fiber");
            int g = out.frame.index(m, fn, p0.proj.apply(m, id));
            glv[m][id] = g;
            if (ilv[m][g] >= 0)
                throw InternalError("trivialization: transport is not injective");
            ilv[m][g] = id;
        }
        for (int g = 0; g < out.frame.set->size(m); ++g)
            if (ilv[m][g] < 0)
                throw InternalError("trivialization: transport is not surjective");
    }
    try {
        out.iso = SimplicialMap(y, out.frame.set, std::move(glv));
        out.iso_inv = SimplicialMap(out.frame.set, y, std::move(ilv));
    } catch (const InputError& e) {
        throw InternalError(std::string("trivialization: transport is not simplicial: ") +
                            e.what());
    }
    if (!maps_equal_pointwise(compose(out.iso_inv, out.iso), identity_map(y)) ||
        !maps_equal_pointwise(compose(out.iso, out.iso_inv),
                              identity_map(out.frame.set)))
        throw InternalError("trivialization: inverse verification failed");
    if (!maps_equal_pointwise(compose(out.product_over.proj, out.iso), p0.proj))
        throw InternalError("trivialization: isomorphism is not over the base");
    return out;
}

}  // namespace kanforge
