#include "kanforge/univalence.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kanforge {

namespace {

int iota_id(int n) { return standard_simplex_id(n, identity_monotone(n)); }

/// Keeps the decision, evidence kind and reason while dropping certificate
/// payloads.  Certificates are verified before an element is admitted, and a
/// fresh is_weq on the stored maps regenerates them; keeping them in bulk
/// enumerations multiplies memory by the size of a homotopy cylinder.
WeqVerdict strip_certificates(WeqVerdict v) {
    v.iso_inverse.reset();
    v.tf_report.reset();
    v.retraction.reset();
    v.hequiv.reset();
    v.fibration_src.reset();
    v.fibration_dst.reset();
    v.children.clear();
    return v;
}

RlpReport require_fibration(const SimplicialMap& p, const Config& cfg, const std::string& who) {
    RlpReport r = is_fibration(p, cfg);
    if (r.status == RlpStatus::FailsLift)
        throw InputError(who + " is not a fibration within bounds");
    if (r.status == RlpStatus::Exhausted)
        throw BudgetError(who + ": fibration check ran out of budget", cfg.search_budget);
    return r;
}

[[noreturn]] void abort_unknown(const std::string& who, const WeqVerdict& v, const Config& cfg) {
    if (v.budget_limited)
        throw BudgetError(who + ": equivalence verdict ran out of budget (" + v.reason + ")",
                          cfg.search_budget);
    throw InputError(who + ": equivalence status is not decidable by the implemented criteria (" +
                     v.reason + ")");
}

std::vector<std::vector<int>> inverse_table(const SimplicialMap& mono) {
    int nd = mono.target()->max_dim();
    std::vector<std::vector<int>> inv(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        inv[n].assign(mono.target()->size(n), -1);
        for (int x = 0; x < mono.source()->size(n); ++x) inv[n][mono.apply(n, x)] = x;
    }
    return inv;
}

/// Post-composition with g, memberwise on pushforward fibers.
SimplicialMap push_map(const Pushforward& src, const Pushforward& dst, const SimplicialMap& g,
                       const std::string& who) {
    int nd = src.object.total->max_dim();
    std::vector<std::vector<int>> lv(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        lv[n].resize(src.object.total->size(n));
        for (int id = 0; id < src.object.total->size(n); ++id) {
            int b = src.base_of[n][id];
            const SimplicialMap& m = src.fibers[n][b].members[src.member_of[n][id]];
            SimplicialMap composed = compose(g, m);
            const auto& cands = dst.fibers[n][b].members;
            int found = -1;
            for (std::size_t j = 0; j < cands.size(); ++j)
                if (cands[j] == composed) {
                    found = static_cast<int>(j);
                    break;
                }
            if (found < 0)
                throw InternalError(who + ": composed member is missing from the pushforward");
            lv[n][id] = dst.id_of(n, b, found);
        }
    }
    return SimplicialMap(src.object.total, dst.object.total, std::move(lv));
}

/// Evaluation at the tautological shape element: a pair (a, (y, m)) over
/// i(a), with m a pushforward member, maps to the value of m at the shape
/// pair (identity simplex, a).  This realizes the restriction comparison.
SimplicialMap diagonal_eval(const PullbackAlong& restricted, const PullbackSet& pb,
                            const Pushforward& push, const SSetPtr& into,
                            const std::string& who) {
    int nd = into->max_dim();
    std::vector<std::vector<int>> lv(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        int sz = restricted.object.total->size(n);
        lv[n].resize(sz);
        for (int id = 0; id < sz; ++id) {
            auto [a, x] = restricted.raw.pairs[n][id];
            int m1 = pb.pairs[n][x].second;
            int b = push.base_of[n][m1];
            const PushforwardFiber& fiber = push.fibers[n][b];
            const SimplicialMap& member = fiber.members[push.member_of[n][m1]];
            int sid = fiber.shape.find(n, iota_id(n), a);
            if (sid < 0) throw InternalError(who + ": tautological shape element is missing");
            lv[n][id] = member.apply(n, sid);
        }
    }
    try {
        return SimplicialMap(restricted.object.total, into, std::move(lv));
    } catch (const InputError& e) {
        throw InternalError(who + ": restriction comparison is not simplicial: " +
                            std::string(e.what()));
    }
}

/**
 * Extends a deformation retraction certificate along the construction: dr
 * exhibits v : X -> Y over A, phi identifies the restriction of ybar with
 * Y, and vbar : xbar -> ybar is the extended mono over B.  One lifting
 * problem settles the extended homotopy: it is prescribed on the
 * restricted part (the transported homotopy), on the image of vbar
 * (constant) and at time zero (identity), and solved against the fibrant
 * ybar; the time-one end then lands in the image of vbar and yields the
 * retraction.
 */
DeformationRetraction extend_retraction(const DeformationRetraction& dr, const SimplicialMap& phi,
                                        const PullbackAlong& ra, const SimplicialMap& vbar,
                                        const SliceObject& xbar, const SliceObject& ybar,
                                        const Config& cfg, const std::string& who) {
    if (!vbar.is_mono()) throw InternalError(who + ": extended map is not a monomorphism");
    Cylinder cyl = make_cylinder(ybar.total);
    CylinderPins pins(cyl.prod);
    SimplicialMap phiinv = phi.inverse();
    const Product& hcyl = dr.homotopy.cylinder.prod;
    int nd = ybar.total->max_dim();
    for (int n = 0; n <= nd; ++n)
        for (int z = 0; z < ra.object.total->size(n); ++z) {
            int y = ra.cartesian.apply(n, z);
            int yv = phi.apply(n, z);
            for (int t = 0; t < cyl.prod.right->size(n); ++t) {
                int hv = dr.homotopy.map.apply(n, hcyl.index(n, yv, t));
                pins.pin(n, cyl.prod.index(n, y, t),
                         ra.cartesian.apply(n, phiinv.apply(n, hv)));
            }
        }
    pins.pin_constant_cylinder(image_mask(vbar), identity_map(ybar.total));
    pins.pin_time_slice(identity_map(ybar.total), 0);

    LiftingProblem prob = pins.problem(ybar.proj, compose(ybar.proj, cyl.prod.proj_left));
    LiftResult res = solve_lifting(prob, cfg.search_budget);
    if (std::holds_alternative<Exhausted>(res))
        throw BudgetError(who + ": homotopy square ran out of budget", cfg.search_budget);
    if (std::holds_alternative<Refuted>(res))
        throw InternalError(who + ": homotopy square has no filler over a fibrant extension");
    SimplicialMap hbar = std::get<Filler>(std::move(res)).diagonal;

    SimplicialMap h1 = compose(hbar, cyl.at1);
    std::vector<std::vector<int>> inv = inverse_table(vbar);
    std::vector<std::vector<int>> lv(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        lv[n].resize(ybar.total->size(n));
        for (int y = 0; y < ybar.total->size(n); ++y) {
            int x = inv[n][h1.apply(n, y)];
            if (x < 0)
                throw InternalError(who + ": settled homotopy escapes the extended subobject");
            lv[n][y] = x;
        }
    }
    SimplicialMap retraction;
    try {
        retraction = SimplicialMap(ybar.total, xbar.total, std::move(lv));
    } catch (const InputError& e) {
        throw InternalError(who + ": retraction is not simplicial: " + std::string(e.what()));
    }
    DeformationRetraction out{std::move(retraction), Homotopy{std::move(cyl), std::move(hbar)}};
    if (!verify_deformation_retraction(vbar, xbar, ybar, out))
        throw InternalError(who + ": retraction certificate failed verification");
    return out;
}

/**
 * Backtracking enumeration of every bundle over a frame with fiber sizes
 * within the cap, produced directly in canonical labels: total-space ids
 * at each level run through the fibers in frame-id order.  Levels are
 * settled bottom up.  Within a level, fiber sizes come first, then the
 * degeneracies into the level; every face of a degenerate element is
 * forced by an identity, so only the remaining free elements have their
 * faces searched, with the face identities checked as soon as both sides
 * exist.
 */
class BundleEnumerator {
public:
    using Sink = std::function<void(WellOrderedMorphism)>;

    BundleEnumerator(SSetPtr frame, int cap, long long budget, Sink sink)
        : frame_(std::move(frame)), cap_(cap), budget_(budget), sink_(std::move(sink)),
          nd_(frame_->max_dim()) {
        data_.max_dim = nd_;
        data_.size.assign(nd_ + 1, 0);
        data_.face.resize(nd_ + 1);
        data_.degen.resize(nd_ + 1);
        sizes_.resize(nd_ + 1);
        offset_.resize(nd_ + 1);
        base_of_.resize(nd_ + 1);
        row_used_.resize(nd_ + 1);
        degen_pre_.resize(nd_ + 1);
        for (int n = 0; n <= nd_; ++n) {
            sizes_[n].assign(frame_->size(n), 0);
            degen_pre_[n].resize(frame_->size(n));
        }
        for (int n = 1; n <= nd_; ++n)
            for (int j = 0; j < n; ++j)
                for (int g = 0; g < frame_->size(n - 1); ++g)
                    degen_pre_[n][frame_->degen(n - 1, j, g)].push_back(g);
    }

    void run() { level_sizes(0); }

private:
    void tick() {
        if (++nodes_ > budget_)
            throw BudgetError("replacement enumeration ran out of budget", budget_);
    }

    void level_sizes(int m) {
        if (m > nd_) {
            emit();
            return;
        }
        choose_size(m, 0);
    }

    void choose_size(int m, int f) {
        if (f == frame_->size(m)) {
            layout(m);
            return;
        }
        for (int s = 0; s <= cap_; ++s) {
            tick();
            if (!size_ok(m, f, s)) continue;
            sizes_[m][f] = s;
            choose_size(m, f + 1);
        }
        sizes_[m][f] = 0;
    }

    bool size_ok(int m, int f, int s) const {
        if (m == 0) return true;
        if (s > 0)
            for (int j = 0; j <= m; ++j)
                if (sizes_[m - 1][frame_->face(m, j, f)] == 0) return false;
        // Horn lifting forces each face fiber to be covered by faces of the
        // fiber over f, so the fiber over f can be no smaller (checked for
        // the levels whose horn squares certify it).
        if (m <= 2)
            for (int j = 0; j <= m; ++j)
                if (s < sizes_[m - 1][frame_->face(m, j, f)]) return false;
        for (int g : degen_pre_[m][f])
            if (sizes_[m - 1][g] > s) return false;
        return true;
    }

    void layout(int m) {
        offset_[m].assign(frame_->size(m), 0);
        base_of_[m].clear();
        int total = 0;
        for (int f = 0; f < frame_->size(m); ++f) {
            offset_[m][f] = total;
            total += sizes_[m][f];
            for (int s = 0; s < sizes_[m][f]; ++s) base_of_[m].push_back(f);
        }
        data_.size[m] = total;
        if (m == 0) {
            level_sizes(1);
            return;
        }
        data_.face[m].assign(m + 1, std::vector<int>(total, -1));
        data_.degen[m - 1].assign(m, std::vector<int>(data_.size[m - 1], -1));
        row_used_[m].assign(m, std::vector<char>(total, 0));
        assign_degen(m, 0, 0);
    }

    /// d_i s_j x, expressed through data one and two levels down.
    int forced_face(int m, int i, int j, int x) const {
        if (i == j || i == j + 1) return x;
        if (i < j) return data_.degen[m - 2][j - 1][data_.face[m - 1][i][x]];
        return data_.degen[m - 2][j][data_.face[m - 1][i - 1][x]];
    }

    /// Checks d_a d_b = d_{b-1} d_a for every pair involving slot i of id
    /// whose companion entries already exist.
    bool face_pairs_ok(int m, int id, int i) const {
        if (m < 2) return true;
        int v = data_.face[m][i][id];
        for (int b = i + 1; b <= m; ++b) {
            int u = data_.face[m][b][id];
            if (u >= 0 && data_.face[m - 1][i][u] != data_.face[m - 1][b - 1][v]) return false;
        }
        for (int a = 0; a < i; ++a) {
            int u = data_.face[m][a][id];
            if (u >= 0 && data_.face[m - 1][a][v] != data_.face[m - 1][i - 1][u]) return false;
        }
        return true;
    }

    void assign_degen(int m, int j, int x) {
        if (j == m) {
            assign_face(m, 0, 0);
            return;
        }
        if (x == data_.size[m - 1]) {
            assign_degen(m, j + 1, 0);
            return;
        }
        int bf = frame_->degen(m - 1, j, base_of_[m - 1][x]);
        for (int pos = 0; pos < sizes_[m][bf]; ++pos) {
            int cand = offset_[m][bf] + pos;
            tick();
            if (row_used_[m][j][cand]) continue;
            if (!shared_rows_ok(m, j, x, cand)) continue;
            std::vector<int> placed;
            if (force_faces(m, j, x, cand, placed)) {
                row_used_[m][j][cand] = 1;
                data_.degen[m - 1][j][x] = cand;
                assign_degen(m, j, x + 1);
                data_.degen[m - 1][j][x] = -1;
                row_used_[m][j][cand] = 0;
            }
            for (int i : placed) data_.face[m][i][cand] = -1;
        }
    }

    /// s_j s_{j1} = s_{j1} s_{j-1} for j1 < j pins the value at degenerate x.
    bool shared_rows_ok(int m, int j, int x, int cand) const {
        if (m < 2) return true;
        for (int j1 = 0; j1 < j; ++j1)
            for (int z = 0; z < data_.size[m - 2]; ++z)
                if (data_.degen[m - 2][j1][z] == x &&
                    data_.degen[m - 1][j1][data_.degen[m - 2][j - 1][z]] != cand)
                    return false;
        return true;
    }

    bool force_faces(int m, int j, int x, int cand, std::vector<int>& placed) {
        for (int i = 0; i <= m; ++i) {
            int want = forced_face(m, i, j, x);
            int have = data_.face[m][i][cand];
            if (have >= 0) {
                if (have != want) return false;
                continue;
            }
            data_.face[m][i][cand] = want;
            if (!face_pairs_ok(m, cand, i)) {
                data_.face[m][i][cand] = -1;
                return false;
            }
            placed.push_back(i);
        }
        return true;
    }

    /// Every element of a face fiber must occur as the matching face of some
    /// element one level up; horn squares at levels one and two refute any
    /// candidate that misses one.
    bool faces_covered(int m) const {
        if (m > 2) return true;
        std::vector<char> covered;
        for (int f = 0; f < frame_->size(m); ++f)
            for (int i = 0; i <= m; ++i) {
                int bf = frame_->face(m, i, f);
                int lo = offset_[m - 1][bf];
                covered.assign(sizes_[m - 1][bf], 0);
                for (int s = 0; s < sizes_[m][f]; ++s)
                    covered[data_.face[m][i][offset_[m][f] + s] - lo] = 1;
                for (char c : covered)
                    if (!c) return false;
            }
        return true;
    }

    void assign_face(int m, int id, int i) {
        if (id == data_.size[m]) {
            if (faces_covered(m)) level_sizes(m + 1);
            return;
        }
        if (i > m) {
            assign_face(m, id + 1, 0);
            return;
        }
        if (data_.face[m][i][id] >= 0) {
            assign_face(m, id, i + 1);
            return;
        }
        int bf = frame_->face(m, i, base_of_[m][id]);
        for (int pos = 0; pos < sizes_[m - 1][bf]; ++pos) {
            tick();
            data_.face[m][i][id] = offset_[m - 1][bf] + pos;
            if (face_pairs_ok(m, id, i)) assign_face(m, id, i + 1);
            data_.face[m][i][id] = -1;
        }
    }

    void emit() {
        ValidationReport rep = validate(data_);
        if (!rep.ok())
            throw InternalError("replacement enumeration produced invalid data: " + rep.summary());
        SimplicialSetData copy = data_;
        SSetPtr total = SimplicialSet::build(std::move(copy));
        std::vector<std::vector<int>> lv(nd_ + 1);
        std::vector<std::vector<std::vector<int>>> orders(nd_ + 1);
        for (int n = 0; n <= nd_; ++n) {
            lv[n] = base_of_[n];
            orders[n].resize(frame_->size(n));
            for (int f = 0; f < frame_->size(n); ++f)
                for (int s = 0; s < sizes_[n][f]; ++s)
                    orders[n][f].push_back(offset_[n][f] + s);
        }
        sink_({SimplicialMap(std::move(total), frame_, std::move(lv)), std::move(orders)});
    }

    SSetPtr frame_;
    int cap_;
    long long budget_;
    Sink sink_;
    int nd_;
    long long nodes_ = 0;
    SimplicialSetData data_;
    std::vector<std::vector<int>> sizes_;
    std::vector<std::vector<int>> offset_;
    std::vector<std::vector<int>> base_of_;
    std::vector<std::vector<std::vector<char>>> row_used_;
    std::vector<std::vector<std::vector<int>>> degen_pre_;
};

}  // namespace

// --- objects of fiberwise equivalences ----------------------------------

int EqObject::base_simplex(int n, int id) const {
    return hom.base_of[n][carrier_in_hom.old_of_new[n][id]];
}

const SimplicialMap& EqObject::member(int n, int id) const {
    int old_id = carrier_in_hom.old_of_new[n][id];
    return hom.fibers[n][hom.base_of[n][old_id]].members[hom.member_of[n][old_id]];
}

EqObject eq_object(const SliceObject& e1, const SliceObject& e2, const Config& cfg) {
    cfg.validate();
    if (!(*e1.base() == *e2.base()))
        throw InputError("equivalence object: the two bundles have different bases");
    require_fibration(e1.proj, cfg, "equivalence object: first projection");
    require_fibration(e2.proj, cfg, "equivalence object: second projection");

    EqObject out;
    out.hom = internal_hom(e1, e2, cfg);
    const InternalHom& hom = out.hom;
    int nd = hom.object.total->max_dim();

    std::vector<std::vector<char>> keep(nd + 1);
    std::vector<std::vector<WeqVerdict>> all(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        int sz = hom.object.total->size(n);
        keep[n].assign(sz, 0);
        all[n].resize(sz);
        for (int id = 0; id < sz; ++id) {
            const HomFiber& fiber = hom.fibers[n][hom.base_of[n][id]];
            const SimplicialMap& m = fiber.members[hom.member_of[n][id]];
            WeqVerdict v = is_weq(m, fiber.dom.object, fiber.cod.object, cfg);
            if (v.verdict == Tri::Unknown)
                abort_unknown("equivalence object: member over simplex (" + std::to_string(n) +
                                  ", " + std::to_string(hom.base_of[n][id]) + ")",
                              v, cfg);
            keep[n][id] = v.verdict == Tri::Yes ? 1 : 0;
            all[n][id] = std::move(v);
        }
    }

    try {
        out.carrier_in_hom = subcomplex(hom.object.total, keep);
    } catch (const InputError& e) {
        throw InternalError(
            "equivalence object: kept members are not closed under the operators: " +
            std::string(e.what()));
    }
    out.carrier = SliceObject{out.carrier_in_hom.set,
                              compose(hom.object.proj, out.carrier_in_hom.inclusion)};
    out.verdicts.resize(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        out.verdicts[n].reserve(out.carrier_in_hom.set->size(n));
        for (int id = 0; id < out.carrier_in_hom.set->size(n); ++id)
            out.verdicts[n].push_back(std::move(all[n][out.carrier_in_hom.old_of_new[n][id]]));
    }
    return out;
}

EqSelf eq_self(const SliceObject& e, const Config& cfg) {
    const SSetPtr& base = e.base();
    EqSelf out;
    out.square = product(base, base);
    out.left = pullback_along(out.square.proj_left, e);
    out.right = pullback_along(out.square.proj_right, e);
    out.eq = eq_object(out.left.object, out.right.object, cfg);

    int nd = base->max_dim();
    std::vector<std::vector<int>> dl(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        dl[n].resize(base->size(n));
        for (int b = 0; b < base->size(n); ++b) {
            int d = out.square.index(n, b, b);
            const HomFiber& fiber = out.eq.hom.fibers[n][d];
            SimplicialMap dom_under = compose(out.left.cartesian, fiber.dom.cartesian);
            SimplicialMap cod_under = compose(out.right.cartesian, fiber.cod.cartesian);
            int found = -1;
            for (std::size_t j = 0; j < fiber.members.size(); ++j)
                if (maps_equal_pointwise(compose(cod_under, fiber.members[j]), dom_under)) {
                    found = static_cast<int>(j);
                    break;
                }
            if (found < 0) throw InternalError("self-equivalences: identity member is missing");
            int kept = out.eq.carrier_in_hom.new_of_old[n][out.eq.hom.id_of(n, d, found)];
            if (kept < 0)
                throw InternalError("self-equivalences: identity member was not recognized");
            dl[n][b] = kept;
        }
    }
    try {
        out.delta = SimplicialMap(base, out.eq.carrier.total, std::move(dl));
    } catch (const InputError& e2) {
        throw InternalError("self-equivalences: diagonal is not simplicial: " +
                            std::string(e2.what()));
    }
    out.source_map = compose(out.square.proj_left, out.eq.carrier.proj);
    out.target_map = compose(out.square.proj_right, out.eq.carrier.proj);
    if (!out.delta.is_mono())
        throw InternalError("self-equivalences: diagonal is not a monomorphism");
    if (!maps_equal_pointwise(compose(out.source_map, out.delta), identity_map(base)) ||
        !maps_equal_pointwise(compose(out.target_map, out.delta), identity_map(base)))
        throw InternalError("self-equivalences: the projections do not retract the diagonal");
    return out;
}

// --- univalence ----------------------------------------------------------

UnivalenceVerdict is_univalent(const SliceObject& e, const Config& cfg) {
    cfg.validate();
    RlpReport base_kan = is_kan(e.base(), cfg);
    if (base_kan.status == RlpStatus::FailsLift)
        throw InputError("univalence: the base fails the bounded Kan check");
    if (base_kan.status == RlpStatus::Exhausted)
        throw BudgetError("univalence: the bounded Kan check ran out of budget",
                          cfg.search_budget);

    EqSelf es = eq_self(e, cfg);
    UnivalenceVerdict out;
    int nd = e.base()->max_dim();
    SliceObject base_over_point{e.base(), terminal_map(e.base(), nd)};
    SliceObject carrier_over_point{es.eq.carrier.total, terminal_map(es.eq.carrier.total, nd)};
    out.delta_verdict = is_weq(es.delta, base_over_point, carrier_over_point, cfg);
    out.budget_limited = out.delta_verdict.budget_limited;
    if (out.delta_verdict.verdict == Tri::Yes) {
        out.status = UnivalenceStatus::Univalent;
        out.reason = "the diagonal into the self-equivalence object is an equivalence";
        return out;
    }
    if (out.delta_verdict.verdict == Tri::No) {
        out.status = UnivalenceStatus::NotUnivalent;
        out.reason = "the diagonal into the self-equivalence object is not an equivalence";
        out.pi0 = out.delta_verdict.pi0;
        return out;
    }

    out.target_tf = is_trivial_fibration(es.target_map, cfg);
    if (out.target_tf->ok()) {
        out.status = UnivalenceStatus::Univalent;
        out.reason = "the target projection lifts against every boundary";
        return out;
    }
    if (out.target_tf->status == RlpStatus::Exhausted) out.budget_limited = true;

    int base_components = pi0_count(e.base());
    int carrier_components = pi0_count(es.eq.carrier.total);
    if (base_components != carrier_components) {
        out.status = UnivalenceStatus::NotUnivalent;
        out.pi0 = Pi0Obstruction{base_components, carrier_components, -1};
        out.reason = "component counts of the base and the self-equivalence object differ";
        return out;
    }
    out.status = UnivalenceStatus::Unknown;
    out.reason = "no decisive route within bounds";
    return out;
}

// --- extending equivalences along a mono of bases ------------------------

UnivalentLift univalent_lift(const SimplicialMap& i, const SimplicialMap& w,
                             const SliceObject& e1, const SliceObject& e2,
                             const SliceObject& ebar2, const SimplicialMap& phi,
                             const Config& cfg) {
    cfg.validate();
    const std::string who = "equivalence extension";
    if (!i.is_mono()) throw InputError(who + ": the base map must be a monomorphism");
    if (!(*i.source() == *e1.base()) || !(*i.source() == *e2.base()))
        throw InputError(who + ": the bundles must live over the source of the base map");
    if (!(*i.target() == *ebar2.base()))
        throw InputError(who + ": the extension must live over the target of the base map");
    if (!(*w.source() == *e1.total) || !(*w.target() == *e2.total) ||
        !maps_equal_pointwise(compose(e2.proj, w), e1.proj))
        throw InputError(who + ": the map is not over the shared base");
    WeqVerdict wv = is_weq(w, e1, e2, cfg);
    if (wv.verdict == Tri::No) throw InputError(who + ": the map is not an equivalence");
    if (wv.verdict == Tri::Unknown) abort_unknown(who, wv, cfg);
    require_fibration(ebar2.proj, cfg, who + ": the extension bundle");

    PullbackAlong ra2 = pullback_along(i, ebar2);
    if (!(*phi.source() == *ra2.object.total) || !(*phi.target() == *e2.total) ||
        !phi.is_iso() || !maps_equal_pointwise(compose(e2.proj, phi), ra2.object.proj))
        throw InputError(who +
                         ": the restriction identification is not an isomorphism over the base");

    // The extension: fiber product of the pushforward of w with the unit.
    Pushforward push1 = pushforward(i, e1, cfg);
    Pushforward push2 = pushforward(i, e2, cfg);
    Pushforward push_r2 = pushforward(i, ra2.object, cfg);
    SimplicialMap unit = unit_map(i, ebar2, ra2, push_r2);
    SimplicialMap eta = compose(push_map(push_r2, push2, phi, who), unit);
    SimplicialMap iw = push_map(push1, push2, w, who);

    PullbackSet pb = pullback(eta, iw);
    UnivalentLift out;
    out.ebar1 = SliceObject{pb.set, compose(ebar2.proj, pb.proj_left)};
    out.wbar = pb.proj_left;

    // (a) the restriction is exactly E1, and restricts wbar to w.
    out.restricted = pullback_along(i, out.ebar1);
    out.restriction_iso = diagonal_eval(out.restricted, pb, push1, e1.total, who);
    if (!out.restriction_iso.is_iso())
        throw InternalError(who + ": restriction comparison is not an isomorphism");
    if (!maps_equal_pointwise(compose(e1.proj, out.restriction_iso),
                              out.restricted.object.proj))
        throw InternalError(who + ": restriction comparison is not over the base");
    {
        int nd = out.restricted.object.total->max_dim();
        std::vector<std::vector<int>> lv(nd + 1);
        for (int n = 0; n <= nd; ++n) {
            lv[n].resize(out.restricted.object.total->size(n));
            for (int id = 0; id < out.restricted.object.total->size(n); ++id) {
                auto [a, x] = out.restricted.raw.pairs[n][id];
                int pid = ra2.raw.find(n, a, out.wbar.apply(n, x));
                if (pid < 0) throw InternalError(who + ": restricted image pair is missing");
                lv[n][id] = pid;
            }
        }
        SimplicialMap rw(out.restricted.object.total, ra2.object.total, std::move(lv));
        if (!maps_equal_pointwise(compose(phi, rw), compose(w, out.restriction_iso)))
            throw InternalError(who + ": the restricted map differs from the input");
    }

    // (b) fiber count, and the well-ordering extending that of E1.
    const SSetPtr& big_base = ebar2.base();
    int nd = big_base->max_dim();
    std::vector<std::vector<int>> inv_i = inverse_table(i);
    std::vector<std::vector<std::vector<int>>> orders(nd + 1);
    out.max_fiber = 0;
    for (int n = 0; n <= nd; ++n) {
        orders[n].resize(big_base->size(n));
        for (int x = 0; x < pb.set->size(n); ++x)
            orders[n][out.ebar1.proj.apply(n, x)].push_back(x);
        for (int b = 0; b < big_base->size(n); ++b) {
            auto& fiber = orders[n][b];
            out.max_fiber = std::max(out.max_fiber, static_cast<int>(fiber.size()));
            int a = inv_i[n][b];
            if (a < 0) continue;
            std::sort(fiber.begin(), fiber.end(), [&](int lhs, int rhs) {
                int pl = out.restricted.raw.find(n, a, lhs);
                int pr = out.restricted.raw.find(n, a, rhs);
                return out.restriction_iso.apply(n, pl) < out.restriction_iso.apply(n, pr);
            });
        }
    }
    out.small = out.max_fiber <= cfg.fiber_cap;
    out.ebar1_wom = WellOrderedMorphism{out.ebar1.proj, std::move(orders)};
    validate_wom(out.ebar1_wom);

    // (c) the equivalence certificate, split by the shape of w.
    WeqFactorization fact = factor_weq(w, e1, e2, cfg);
    out.route = fact.kind;
    switch (fact.kind) {
        case FactorKind::TrivialFibration: {
            RlpReport tf = is_trivial_fibration(out.wbar, cfg);
            if (tf.status == RlpStatus::Exhausted)
                throw BudgetError(who + ": boundary check ran out of budget", cfg.search_budget);
            if (!tf.ok())
                throw InternalError(who + ": the extension lost the boundary lifting property");
            out.wbar_tf = std::move(tf);
            break;
        }
        case FactorKind::TrivialCofibration: {
            if (!fact.dr) throw InternalError(who + ": missing retraction certificate");
            out.wbar_dr = extend_retraction(*fact.dr, phi, ra2, out.wbar, out.ebar1, ebar2, cfg,
                                            who);
            break;
        }
        case FactorKind::Factored: {
            if (!fact.missing.empty())
                throw BudgetError(who + ": factorization leg uncertified: " + fact.missing,
                                  cfg.search_budget);
            if (!fact.cylinder || !fact.into_cylinder || !fact.collapse || !fact.into_dr)
                throw InternalError(who + ": incomplete mapping cylinder data");
            Pushforward push_cyl = pushforward(i, *fact.cylinder, cfg);
            SimplicialMap icollapse = push_map(push_cyl, push2, *fact.collapse, who);
            SimplicialMap iinto = push_map(push1, push_cyl, *fact.into_cylinder, who);
            PullbackSet pbm = pullback(eta, icollapse);
            SliceObject mid{pbm.set, compose(ebar2.proj, pbm.proj_left)};
            out.wbar_collapse = pbm.proj_left;
            std::vector<std::vector<int>> lv(nd + 1);
            for (int n = 0; n <= nd; ++n) {
                lv[n].resize(pb.set->size(n));
                for (int id = 0; id < pb.set->size(n); ++id) {
                    auto [y, m1] = pb.pairs[n][id];
                    int pid = pbm.find(n, y, iinto.apply(n, m1));
                    if (pid < 0) throw InternalError(who + ": cylinder pairing is missing");
                    lv[n][id] = pid;
                }
            }
            out.wbar_into = SimplicialMap(pb.set, pbm.set, std::move(lv));
            if (!maps_equal_pointwise(compose(*out.wbar_collapse, *out.wbar_into), out.wbar))
                throw InternalError(who + ": cylinder legs do not compose to the extension");
            RlpReport ctf = is_trivial_fibration(*out.wbar_collapse, cfg);
            if (ctf.status == RlpStatus::Exhausted)
                throw BudgetError(who + ": boundary check ran out of budget", cfg.search_budget);
            if (!ctf.ok())
                throw InternalError(who +
                                    ": the extended collapse lost the boundary lifting property");
            out.collapse_tf = std::move(ctf);
            PullbackAlong ra_mid = pullback_along(i, mid);
            SimplicialMap psi_mid =
                diagonal_eval(ra_mid, pbm, push_cyl, fact.cylinder->total, who);
            if (!psi_mid.is_iso())
                throw InternalError(who + ": middle restriction comparison is not an isomorphism");
            out.into_dr = extend_retraction(*fact.into_dr, psi_mid, ra_mid, *out.wbar_into,
                                            out.ebar1, mid, cfg, who);
            out.mid = std::move(mid);
            break;
        }
    }

    RlpReport fib = is_fibration(out.ebar1.proj, cfg);
    if (fib.status == RlpStatus::Exhausted)
        throw BudgetError(who + ": fibration check ran out of budget", cfg.search_budget);
    if (!fib.ok()) throw InternalError(who + ": the extension is not a fibration");
    out.ebar1_fibration = std::move(fib);
    return out;
}

// --- small replacements and the contractibility probe --------------------

ReplacementLevel replacement_level(const SliceObject& p, int n, const Config& cfg) {
    cfg.validate();
    int nd = p.total->max_dim();
    if (n < 0 || n > nd) throw InputError("replacement level: level out of range");
    require_fibration(p.proj, cfg, "replacement level: the input bundle");

    ReplacementLevel out;
    out.level = n;
    out.frame = product(standard_simplex(n, nd), p.base());
    out.restricted = pullback_along(out.frame.proj_right, p);

    SliceObject frame_input = out.restricted.object;
    BundleEnumerator(out.frame.set, cfg.fiber_cap, cfg.search_budget,
                     [&](WellOrderedMorphism g) {
        RlpReport fib = is_fibration(g.map, cfg);
        if (fib.status == RlpStatus::Exhausted)
            throw BudgetError("replacement level: fibration check ran out of budget",
                              cfg.search_budget);
        if (!fib.ok()) return;
        SliceObject bundle_slice{g.map.source(), g.map};
        std::vector<SimplicialMap> candidates =
            maps_over(frame_input, bundle_slice, cfg.search_budget);
        for (SimplicialMap& cand : candidates) {
            WeqVerdict v = is_weq(cand, frame_input, bundle_slice, cfg);
            if (v.verdict == Tri::No) continue;
            if (v.verdict == Tri::Unknown) abort_unknown("replacement level", v, cfg);
            out.elements.push_back({g, fib, std::move(cand), strip_certificates(std::move(v))});
        }
    }).run();
    return out;
}

int replacement_restrict(const ReplacementLevel& from, int index, const MonotoneMap& op,
                         const ReplacementLevel& to) {
    if (index < 0 || index >= static_cast<int>(from.elements.size()))
        throw InputError("replacement restriction: element index out of range");
    int m = static_cast<int>(op.size()) - 1;
    if (m != to.level || !is_monotone(op, from.level))
        throw InputError("replacement restriction: operator endpoints do not match the levels");
    int nd = from.frame.set->max_dim();
    const SmallReplacement& el = from.elements[index];

    SimplicialMap frame_map = product_map(to.frame, from.frame,
                                          standard_simplex_map(op, from.level, nd),
                                          identity_map(to.frame.right));
    PullbackSet raw = pullback(frame_map, el.bundle.map);
    WellOrderedMorphism pulled;
    pulled.map = raw.proj_left;
    pulled.orders.resize(nd + 1);
    for (int lv = 0; lv <= nd; ++lv) {
        pulled.orders[lv].resize(to.frame.set->size(lv));
        for (int f = 0; f < to.frame.set->size(lv); ++f)
            for (int y : el.bundle.orders[lv][frame_map.apply(lv, f)]) {
                int pid = raw.find(lv, f, y);
                if (pid < 0) throw InternalError("replacement restriction: pullback pair missing");
                pulled.orders[lv][f].push_back(pid);
            }
    }
    CanonicalForm canon = canonicalize(pulled);

    std::vector<std::vector<int>> wl(nd + 1);
    for (int lv = 0; lv <= nd; ++lv) {
        int sz = to.restricted.object.total->size(lv);
        wl[lv].resize(sz);
        for (int x = 0; x < sz; ++x) {
            auto [f, e] = to.restricted.raw.pairs[lv][x];
            int up = from.restricted.raw.find(lv, frame_map.apply(lv, f), e);
            if (up < 0) throw InternalError("replacement restriction: restricted pair missing");
            int pid = raw.find(lv, f, el.weq.apply(lv, up));
            if (pid < 0) throw InternalError("replacement restriction: image pair missing");
            wl[lv][x] = canon.relabel.apply(lv, pid);
        }
    }
    SimplicialMap moved;
    try {
        moved = SimplicialMap(to.restricted.object.total, canon.wom.map.source(), std::move(wl));
    } catch (const InputError& e) {
        throw InternalError("replacement restriction: transported map is not simplicial: " +
                            std::string(e.what()));
    }
    for (std::size_t j = 0; j < to.elements.size(); ++j)
        if (to.elements[j].bundle.map == canon.wom.map &&
            to.elements[j].bundle.orders == canon.wom.orders && to.elements[j].weq == moved)
            return static_cast<int>(j);
    throw InternalError("replacement restriction: restricted element missing from the target");
}

ReplacementContractibility check_replacements_contractible(const SliceObject& p,
                                                           const Config& cfg) {
    cfg.validate();
    int nd = p.total->max_dim();
    ReplacementContractibility out;
    out.levels.reserve(nd + 1);
    for (int n = 0; n <= nd; ++n) out.levels.push_back(replacement_level(p, n, cfg));

    SimplicialSetData d;
    d.max_dim = nd;
    d.size.resize(nd + 1);
    d.face.resize(nd + 1);
    d.degen.resize(nd + 1);
    for (int n = 0; n <= nd; ++n) d.size[n] = static_cast<int>(out.levels[n].elements.size());
    for (int n = 1; n <= nd; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int j = 0; j <= n; ++j)
            for (int id = 0; id < d.size[n]; ++id)
                d.face[n][j][id] =
                    replacement_restrict(out.levels[n], id, coface(n, j), out.levels[n - 1]);
    }
    for (int n = 0; n < nd; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int j = 0; j <= n; ++j)
            for (int id = 0; id < d.size[n]; ++id)
                d.degen[n][j][id] =
                    replacement_restrict(out.levels[n], id, codegeneracy(n, j),
                                         out.levels[n + 1]);
    }
    out.complex = SimplicialSet::build(std::move(d));

    out.boundary_rlp = is_trivial_fibration(terminal_map(out.complex, nd), cfg);
    if (out.boundary_rlp.status == RlpStatus::Exhausted)
        throw BudgetError("replacement probe: boundary check ran out of budget",
                          cfg.search_budget);

    bool all_extend = true;
    for (int m = 0; m <= nd; ++m) {
        Subcomplex bd = boundary(m, nd);
        std::vector<SimplicialMap> squares =
            enumerate_maps(bd.set, out.complex, cfg.search_budget);
        for (const SimplicialMap& sq : squares) {
            ++out.instances;
            bool found = false;
            for (int id = 0; id < static_cast<int>(out.levels[m].elements.size()) && !found;
                 ++id) {
                bool match = true;
                for (int j = 0; j <= m && match && m > 0; ++j) {
                    int ambient_face =
                        bd.inclusion.target()->face(m, j, iota_id(m));
                    int want = sq.apply(m - 1, bd.new_of_old[m - 1][ambient_face]);
                    if (out.complex->face(m, j, id) != want) match = false;
                }
                found = match;
            }
            if (!found) all_extend = false;
        }
    }
    out.routes_agree = all_extend == out.boundary_rlp.ok();
    return out;
}

}  // namespace kanforge
