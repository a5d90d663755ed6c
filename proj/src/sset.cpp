#include "kanforge/sset.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

namespace kanforge {

namespace {

std::string issue_text(const ValidationIssue& v) {
    std::ostringstream os;
    os << v.identity << " at level " << v.level << " id " << v.id;
    if (!v.detail.empty()) os << " (" << v.detail << ")";
    return os.str();
}

void check_range(const SimplicialSetData& d, ValidationReport& rep) {
    if (d.max_dim < 0) {
        rep.issues.push_back({"structure", 0, 0, "negative max_dim"});
        return;
    }
    if (static_cast<int>(d.size.size()) != d.max_dim + 1)
        rep.issues.push_back({"structure", 0, 0, "size table has wrong length"});
    if (static_cast<int>(d.face.size()) != d.max_dim + 1)
        rep.issues.push_back({"structure", 0, 0, "face table has wrong length"});
    if (static_cast<int>(d.degen.size()) != d.max_dim + 1)
        rep.issues.push_back({"structure", 0, 0, "degeneracy table has wrong length"});
}

}  // namespace

std::string ValidationReport::summary() const {
    if (issues.empty()) return "valid";
    std::ostringstream os;
    os << issues.size() << " issue(s): ";
    for (std::size_t i = 0; i < issues.size() && i < 4; ++i) {
        if (i) os << "; ";
        os << issue_text(issues[i]);
    }
    if (issues.size() > 4) os << "; ...";
    return os.str();
}

ValidationReport validate(const SimplicialSetData& d) {
    ValidationReport rep;
    check_range(d, rep);
    if (!rep.ok()) return rep;

    const int N = d.max_dim;
    for (int n = 0; n <= N; ++n) {
        if (d.size[n] < 0) rep.issues.push_back({"structure", n, 0, "negative level size"});
        const int want_faces = n >= 1 ? n + 1 : 0;
        if (static_cast<int>(d.face[n].size()) != want_faces)
            rep.issues.push_back({"structure", n, 0, "missing face operator"});
        const int want_degens = n < N ? n + 1 : 0;
        if (static_cast<int>(d.degen[n].size()) != want_degens)
            rep.issues.push_back({"structure", n, 0, "missing degeneracy operator"});
    }
    if (!rep.ok()) return rep;

    auto face_ok = [&](int n, int i, int id) {
        int v = d.face[n][i][id];
        return v >= 0 && v < d.size[n - 1];
    };
    auto degen_ok = [&](int n, int i, int id) {
        int v = d.degen[n][i][id];
        return v >= 0 && v < d.size[n + 1];
    };

    for (int n = 1; n <= N; ++n)
        for (int i = 0; i <= n; ++i) {
            if (static_cast<int>(d.face[n][i].size()) != d.size[n]) {
                rep.issues.push_back({"structure", n, i, "face entry count mismatch"});
                continue;
            }
            for (int id = 0; id < d.size[n]; ++id)
                if (!face_ok(n, i, id))
                    rep.issues.push_back({"face range", n, id, "d_" + std::to_string(i)});
        }
    for (int n = 0; n < N; ++n)
        for (int i = 0; i <= n; ++i) {
            if (static_cast<int>(d.degen[n][i].size()) != d.size[n]) {
                rep.issues.push_back({"structure", n, i, "degeneracy entry count mismatch"});
                continue;
            }
            for (int id = 0; id < d.size[n]; ++id)
                if (!degen_ok(n, i, id))
                    rep.issues.push_back({"degeneracy range", n, id, "s_" + std::to_string(i)});
        }
    if (!rep.ok()) return rep;

    // d_i d_j = d_{j-1} d_i for i < j
    for (int n = 2; n <= N; ++n)
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i)
                for (int id = 0; id < d.size[n]; ++id) {
                    int a = d.face[n - 1][i][d.face[n][j][id]];
                    int b = d.face[n - 1][j - 1][d.face[n][i][id]];
                    if (a != b)
                        rep.issues.push_back({"d_i d_j = d_{j-1} d_i", n, id,
                                              "i=" + std::to_string(i) + " j=" + std::to_string(j)});
                }

    // s_i s_j = s_{j+1} s_i for i <= j
    for (int n = 0; n + 2 <= N; ++n)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= j; ++i)
                for (int id = 0; id < d.size[n]; ++id) {
                    int a = d.degen[n + 1][i][d.degen[n][j][id]];
                    int b = d.degen[n + 1][j + 1][d.degen[n][i][id]];
                    if (a != b)
                        rep.issues.push_back({"s_i s_j = s_{j+1} s_i", n, id,
                                              "i=" + std::to_string(i) + " j=" + std::to_string(j)});
                }

    // d_i s_j relations
    for (int n = 0; n < N; ++n)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n + 1; ++i)
                for (int id = 0; id < d.size[n]; ++id) {
                    int lhs = d.face[n + 1][i][d.degen[n][j][id]];
                    int rhs;
                    std::string name;
                    if (i < j) {
                        if (n < 1) continue;
                        rhs = d.degen[n - 1][j - 1][d.face[n][i][id]];
                        name = "d_i s_j = s_{j-1} d_i";
                    } else if (i == j || i == j + 1) {
                        rhs = id;
                        name = "d_i s_j = id";
                    } else {
                        if (n < 1) continue;
                        rhs = d.degen[n - 1][j][d.face[n][i - 1][id]];
                        name = "d_i s_j = s_j d_{i-1}";
                    }
                    if (lhs != rhs)
                        rep.issues.push_back({name, n, id,
                                              "i=" + std::to_string(i) + " j=" + std::to_string(j)});
                }

    return rep;
}

SimplicialSet::SimplicialSet(SimplicialSetData data) : data_(std::move(data)) {
    const int N = data_.max_dim;
    nondeg_.assign(N + 1, {});
    nondeg_ids_.assign(N + 1, {});
    ez_.assign(N + 1, {});
    for (int n = 0; n <= N; ++n) {
        nondeg_[n].assign(data_.size[n], 1);
        ez_[n].assign(data_.size[n], EzForm{});
    }
    for (int n = 0; n < N; ++n)
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < data_.size[n]; ++id) nondeg_[n + 1][data_.degen[n][i][id]] = 0;
    for (int n = 0; n <= N; ++n)
        for (int id = 0; id < data_.size[n]; ++id)
            if (nondeg_[n][id]) nondeg_ids_[n].push_back(id);

    // Eilenberg-Zilber normal forms, lowest level first so bases are ready.
    for (int n = 0; n <= N; ++n)
        for (int id = 0; id < data_.size[n]; ++id) {
            if (nondeg_[n][id]) {
                ez_[n][id] = EzForm{n, id, {}};
                continue;
            }
            int fi = -1, fz = -1;
            for (int i = 0; i <= n - 1 && fi < 0; ++i)
                for (int z = 0; z < data_.size[n - 1] && fi < 0; ++z)
                    if (data_.degen[n - 1][i][z] == id) {
                        fi = i;
                        fz = z;
                    }
            if (fi < 0) throw InternalError("degenerate simplex without degeneracy preimage");
            EzForm base = ez_[n - 1][fz];
            // normalize s_fi against the existing strictly decreasing word
            std::vector<int> word = base.word;
            int push = fi;
            std::size_t pos = 0;
            while (pos < word.size() && push <= word[pos]) {
                ++word[pos];
                ++pos;
            }
            word.insert(word.begin() + pos, push);
            ez_[n][id] = EzForm{base.base_level, base.base_id, std::move(word)};
        }
}

SSetPtr SimplicialSet::build(SimplicialSetData data) {
    ValidationReport rep = validate(data);
    if (!rep.ok()) throw InternalError("simplicial set construction invalid: " + rep.summary());
    return SSetPtr(new SimplicialSet(std::move(data)));
}

SSetPtr SimplicialSet::build_unchecked(SimplicialSetData data) {
    return SSetPtr(new SimplicialSet(std::move(data)));
}

int SimplicialSet::total_size() const {
    int t = 0;
    for (int n = 0; n <= max_dim(); ++n) t += size(n);
    return t;
}

int SimplicialSet::nondegenerate_count() const {
    int t = 0;
    for (int n = 0; n <= max_dim(); ++n) t += static_cast<int>(nondeg_ids_[n].size());
    return t;
}

int SimplicialSet::apply_operator(int n, int id, const MonotoneMap& op) const {
    if (n < 0 || n > max_dim() || id < 0 || id >= size(n))
        throw InputError("apply_operator: simplex out of range");
    if (!is_monotone(op, n)) throw InputError("apply_operator: operator is not monotone into [n]");
    const int m = static_cast<int>(op.size()) - 1;
    if (m > max_dim()) throw InputError("apply_operator: operator exceeds dimension bound");

    // Epi-mono factorization op = delta o sigma.  Contravariance applies the
    // faces of the mono part first, largest missing value first so indices
    // need no shifting, then the degeneracies of the epi part innermost out.
    int lvl = n, cur = id;
    std::vector<char> seen(n + 1, 0);
    for (int v : op) seen[v] = 1;
    for (int v = n; v >= 0; --v)
        if (!seen[v]) {
            cur = face(lvl, v, cur);
            --lvl;
        }
    std::vector<int> dup;  // collapse positions, recorded outermost first
    MonotoneMap rest = op;
    for (std::size_t i = 0; i + 1 < rest.size();) {
        if (rest[i] == rest[i + 1]) {
            dup.push_back(static_cast<int>(i));
            rest.erase(rest.begin() + i);
        } else {
            ++i;
        }
    }
    for (auto it = dup.rbegin(); it != dup.rend(); ++it) {
        cur = degen(lvl, *it, cur);
        ++lvl;
    }
    if (lvl != m) throw InternalError("apply_operator: factorization level mismatch");
    return cur;
}

SimplicialMap::SimplicialMap(SSetPtr source, SSetPtr target, std::vector<std::vector<int>> levels)
    : source_(std::move(source)), target_(std::move(target)), levels_(std::move(levels)) {
    if (!source_ || !target_) throw InputError("simplicial map: null endpoint");
    if (source_->max_dim() != target_->max_dim())
        throw InputError("simplicial map: dimension bound mismatch");
    const int N = source_->max_dim();
    if (static_cast<int>(levels_.size()) != N + 1)
        throw InputError("simplicial map: level table has wrong length");
    for (int n = 0; n <= N; ++n) {
        if (static_cast<int>(levels_[n].size()) != source_->size(n))
            throw InputError("simplicial map: level " + std::to_string(n) + " has wrong size");
        for (int id = 0; id < source_->size(n); ++id) {
            int v = levels_[n][id];
            if (v < 0 || v >= target_->size(n))
                throw InputError("simplicial map: image out of range at level " +
                                 std::to_string(n) + " id " + std::to_string(id));
        }
    }
    for (int n = 1; n <= N; ++n)
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < source_->size(n); ++id)
                if (target_->face(n, i, levels_[n][id]) != levels_[n - 1][source_->face(n, i, id)])
                    throw InputError("simplicial map: does not commute with d_" +
                                     std::to_string(i) + " at level " + std::to_string(n) +
                                     " id " + std::to_string(id));
    for (int n = 0; n < N; ++n)
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < source_->size(n); ++id)
                if (target_->degen(n, i, levels_[n][id]) != levels_[n + 1][source_->degen(n, i, id)])
                    throw InputError("simplicial map: does not commute with s_" +
                                     std::to_string(i) + " at level " + std::to_string(n) +
                                     " id " + std::to_string(id));
}

bool SimplicialMap::is_mono() const {
    for (int n = 0; n <= source_->max_dim(); ++n) {
        std::vector<char> hit(target_->size(n), 0);
        for (int id = 0; id < source_->size(n); ++id) {
            if (hit[levels_[n][id]]) return false;
            hit[levels_[n][id]] = 1;
        }
    }
    return true;
}

bool SimplicialMap::is_iso() const {
    for (int n = 0; n <= source_->max_dim(); ++n)
        if (source_->size(n) != target_->size(n)) return false;
    return is_mono();
}

SimplicialMap SimplicialMap::inverse() const {
    if (!is_iso()) throw InputError("inverse: map is not an isomorphism");
    std::vector<std::vector<int>> inv(levels_.size());
    for (int n = 0; n <= source_->max_dim(); ++n) {
        inv[n].assign(target_->size(n), -1);
        for (int id = 0; id < source_->size(n); ++id) inv[n][levels_[n][id]] = id;
    }
    return SimplicialMap(target_, source_, std::move(inv));
}

bool SimplicialMap::operator==(const SimplicialMap& other) const {
    if (!source_ || !other.source_) return source_ == other.source_ && target_ == other.target_;
    return *source_ == *other.source_ && *target_ == *other.target_ && levels_ == other.levels_;
}

SimplicialMap identity_map(const SSetPtr& x) {
    std::vector<std::vector<int>> lv(x->max_dim() + 1);
    for (int n = 0; n <= x->max_dim(); ++n) {
        lv[n].resize(x->size(n));
        for (int id = 0; id < x->size(n); ++id) lv[n][id] = id;
    }
    return SimplicialMap(x, x, std::move(lv));
}

SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f) {
    if (*f.target() != *g.source()) throw InputError("compose: endpoints do not match");
    std::vector<std::vector<int>> lv(f.source()->max_dim() + 1);
    for (int n = 0; n <= f.source()->max_dim(); ++n) {
        lv[n].resize(f.source()->size(n));
        for (int id = 0; id < f.source()->size(n); ++id) lv[n][id] = g.apply(n, f.apply(n, id));
    }
    return SimplicialMap(f.source(), g.target(), std::move(lv));
}

bool maps_equal_pointwise(const SimplicialMap& f, const SimplicialMap& g) {
    return f.levels() == g.levels();
}

// --- standard simplices -------------------------------------------------

SSetPtr standard_simplex(int n, int max_dim) {
    if (n < 0) throw InputError("standard_simplex: negative dimension");
    if (max_dim < 0) throw InputError("standard_simplex: negative bound");
    // Immutable and requested constantly from inner search loops, so built
    // once per (n, bound).
    static std::mutex cache_mutex;
    static std::map<std::pair<int, int>, SSetPtr> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({n, max_dim});
        if (it != cache.end()) return it->second;
    }
    SimplicialSetData d;
    d.max_dim = max_dim;
    d.size.resize(max_dim + 1);
    d.face.resize(max_dim + 1);
    d.degen.resize(max_dim + 1);
    std::vector<std::vector<MonotoneMap>> lv(max_dim + 1);
    for (int m = 0; m <= max_dim; ++m) {
        lv[m] = enumerate_monotone(m, n);
        d.size[m] = static_cast<int>(lv[m].size());
    }
    auto rank = [&](int m, const MonotoneMap& f) {
        auto it = std::lower_bound(lv[m].begin(), lv[m].end(), f);
        return static_cast<int>(it - lv[m].begin());
    };
    for (int m = 1; m <= max_dim; ++m) {
        d.face[m].assign(m + 1, std::vector<int>(d.size[m]));
        for (int i = 0; i <= m; ++i)
            for (int id = 0; id < d.size[m]; ++id)
                d.face[m][i][id] = rank(m - 1, drop_entry(lv[m][id], i));
    }
    for (int m = 0; m < max_dim; ++m) {
        d.degen[m].assign(m + 1, std::vector<int>(d.size[m]));
        for (int i = 0; i <= m; ++i)
            for (int id = 0; id < d.size[m]; ++id)
                d.degen[m][i][id] = rank(m + 1, duplicate_entry(lv[m][id], i));
    }
    SSetPtr built = SimplicialSet::build(std::move(d));
    std::lock_guard<std::mutex> lock(cache_mutex);
    return cache.try_emplace({n, max_dim}, std::move(built)).first->second;
}

MonotoneMap standard_simplex_seq(int n, int m, int id) {
    auto all = enumerate_monotone(m, n);
    if (id < 0 || id >= static_cast<int>(all.size()))
        throw InputError("standard_simplex_seq: id out of range");
    return all[id];
}

int standard_simplex_id(int n, const MonotoneMap& seq) {
    int r = monotone_rank(seq, n);
    if (r < 0) throw InputError("standard_simplex_id: not a monotone sequence into [n]");
    return r;
}

SSetPtr empty_sset(int max_dim) {
    SimplicialSetData d;
    d.max_dim = max_dim;
    d.size.assign(max_dim + 1, 0);
    d.face.resize(max_dim + 1);
    d.degen.resize(max_dim + 1);
    for (int n = 1; n <= max_dim; ++n) d.face[n].assign(n + 1, {});
    for (int n = 0; n < max_dim; ++n) d.degen[n].assign(n + 1, {});
    return SimplicialSet::build(std::move(d));
}

SSetPtr discrete_sset(int k, int max_dim) {
    if (k < 0) throw InputError("discrete_sset: negative cardinality");
    SimplicialSetData d;
    d.max_dim = max_dim;
    d.size.assign(max_dim + 1, k);
    d.face.resize(max_dim + 1);
    d.degen.resize(max_dim + 1);
    std::vector<int> ident(k);
    for (int i = 0; i < k; ++i) ident[i] = i;
    for (int n = 1; n <= max_dim; ++n) d.face[n].assign(n + 1, ident);
    for (int n = 0; n < max_dim; ++n) d.degen[n].assign(n + 1, ident);
    return SimplicialSet::build(std::move(d));
}

// --- subcomplexes -------------------------------------------------------

Subcomplex subcomplex(const SSetPtr& ambient, const std::vector<std::vector<char>>& keep) {
    const int N = ambient->max_dim();
    if (static_cast<int>(keep.size()) != N + 1) throw InputError("subcomplex: mask has wrong length");
    for (int n = 0; n <= N; ++n)
        if (static_cast<int>(keep[n].size()) != ambient->size(n))
            throw InputError("subcomplex: mask level size mismatch");
    for (int n = 1; n <= N; ++n)
        for (int id = 0; id < ambient->size(n); ++id)
            if (keep[n][id])
                for (int i = 0; i <= n; ++i)
                    if (!keep[n - 1][ambient->face(n, i, id)])
                        throw InputError("subcomplex: selection not closed under faces");
    for (int n = 0; n < N; ++n)
        for (int id = 0; id < ambient->size(n); ++id)
            if (keep[n][id])
                for (int i = 0; i <= n; ++i)
                    if (!keep[n + 1][ambient->degen(n, i, id)])
                        throw InputError("subcomplex: selection not closed under degeneracies");

    Subcomplex out;
    out.old_of_new.assign(N + 1, {});
    out.new_of_old.assign(N + 1, {});
    SimplicialSetData d;
    d.max_dim = N;
    d.size.assign(N + 1, 0);
    d.face.resize(N + 1);
    d.degen.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        out.new_of_old[n].assign(ambient->size(n), -1);
        for (int id = 0; id < ambient->size(n); ++id)
            if (keep[n][id]) {
                out.new_of_old[n][id] = static_cast<int>(out.old_of_new[n].size());
                out.old_of_new[n].push_back(id);
            }
        d.size[n] = static_cast<int>(out.old_of_new[n].size());
    }
    for (int n = 1; n <= N; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < d.size[n]; ++id)
                d.face[n][i][id] = out.new_of_old[n - 1][ambient->face(n, i, out.old_of_new[n][id])];
    }
    for (int n = 0; n < N; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < d.size[n]; ++id)
                d.degen[n][i][id] = out.new_of_old[n + 1][ambient->degen(n, i, out.old_of_new[n][id])];
    }
    out.set = SimplicialSet::build(std::move(d));
    std::vector<std::vector<int>> incl(N + 1);
    for (int n = 0; n <= N; ++n) incl[n] = out.old_of_new[n];
    out.inclusion = SimplicialMap(out.set, ambient, std::move(incl));
    return out;
}

Subcomplex generated_subcomplex(const SSetPtr& ambient,
                                const std::vector<std::pair<int, int>>& generators) {
    const int N = ambient->max_dim();
    std::vector<std::vector<char>> keep(N + 1);
    for (int n = 0; n <= N; ++n) keep[n].assign(ambient->size(n), 0);
    std::vector<std::pair<int, int>> stack = generators;
    while (!stack.empty()) {
        auto [n, id] = stack.back();
        stack.pop_back();
        if (n < 0 || n > N || id < 0 || id >= ambient->size(n))
            throw InputError("generated_subcomplex: generator out of range");
        if (keep[n][id]) continue;
        keep[n][id] = 1;
        if (n >= 1)
            for (int i = 0; i <= n; ++i) stack.push_back({n - 1, ambient->face(n, i, id)});
        if (n < N)
            for (int i = 0; i <= n; ++i) stack.push_back({n + 1, ambient->degen(n, i, id)});
    }
    return subcomplex(ambient, keep);
}

Subcomplex horn(int n, int k, int max_dim) {
    if (n < 1 || n > max_dim) throw InputError("horn: need 1 <= n <= max_dim");
    if (k < 0 || k > n) throw InputError("horn: k out of range");
    SSetPtr dn = standard_simplex(n, max_dim);
    // simplices whose vertex image misses some j != k
    std::vector<std::vector<char>> keep(max_dim + 1);
    for (int m = 0; m <= max_dim; ++m) {
        keep[m].assign(dn->size(m), 0);
        auto seqs = enumerate_monotone(m, n);
        for (int id = 0; id < dn->size(m); ++id) {
            std::vector<char> hit(n + 1, 0);
            for (int v : seqs[id]) hit[v] = 1;
            bool inside = false;
            for (int j = 0; j <= n && !inside; ++j)
                if (j != k && !hit[j]) inside = true;
            keep[m][id] = inside ? 1 : 0;
        }
    }
    return subcomplex(dn, keep);
}

Subcomplex boundary(int n, int max_dim) {
    if (n < 0 || n > max_dim) throw InputError("boundary: need 0 <= n <= max_dim");
    SSetPtr dn = standard_simplex(n, max_dim);
    std::vector<std::vector<char>> keep(max_dim + 1);
    for (int m = 0; m <= max_dim; ++m) {
        keep[m].assign(dn->size(m), 0);
        auto seqs = enumerate_monotone(m, n);
        for (int id = 0; id < dn->size(m); ++id) {
            std::vector<char> hit(n + 1, 0);
            for (int v : seqs[id]) hit[v] = 1;
            bool full = true;
            for (int j = 0; j <= n; ++j)
                if (!hit[j]) full = false;
            keep[m][id] = full ? 0 : 1;
        }
    }
    return subcomplex(dn, keep);
}

// --- product, pullback, coproduct, pushout ------------------------------

int Product::index(int n, int left_id, int right_id) const {
    return left_id * right->size(n) + right_id;
}

std::pair<int, int> Product::decode(int n, int id) const {
    int r = right->size(n);
    return {id / r, id % r};
}

Product product(const SSetPtr& x, const SSetPtr& y) {
    if (x->max_dim() != y->max_dim()) throw InputError("product: dimension bound mismatch");
    const int N = x->max_dim();
    SimplicialSetData d;
    d.max_dim = N;
    d.size.resize(N + 1);
    d.face.resize(N + 1);
    d.degen.resize(N + 1);
    for (int n = 0; n <= N; ++n) d.size[n] = x->size(n) * y->size(n);
    for (int n = 1; n <= N; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int a = 0; a < x->size(n); ++a)
                for (int b = 0; b < y->size(n); ++b)
                    d.face[n][i][a * y->size(n) + b] =
                        x->face(n, i, a) * y->size(n - 1) + y->face(n, i, b);
    }
    for (int n = 0; n < N; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int a = 0; a < x->size(n); ++a)
                for (int b = 0; b < y->size(n); ++b)
                    d.degen[n][i][a * y->size(n) + b] =
                        x->degen(n, i, a) * y->size(n + 1) + y->degen(n, i, b);
    }
    Product out;
    out.set = SimplicialSet::build(std::move(d));
    out.left = x;
    out.right = y;
    std::vector<std::vector<int>> pl(N + 1), pr(N + 1);
    for (int n = 0; n <= N; ++n) {
        pl[n].resize(out.set->size(n));
        pr[n].resize(out.set->size(n));
        for (int a = 0; a < x->size(n); ++a)
            for (int b = 0; b < y->size(n); ++b) {
                pl[n][a * y->size(n) + b] = a;
                pr[n][a * y->size(n) + b] = b;
            }
    }
    out.proj_left = SimplicialMap(out.set, x, std::move(pl));
    out.proj_right = SimplicialMap(out.set, y, std::move(pr));
    return out;
}

SimplicialMap product_map(const Product& src, const Product& dst, const SimplicialMap& f,
                          const SimplicialMap& g) {
    int nd = src.set->max_dim();
    std::vector<std::vector<int>> lv(nd + 1);
    for (int n = 0; n <= nd; ++n) {
        lv[n].resize(src.set->size(n));
        for (int id = 0; id < src.set->size(n); ++id) {
            auto [a, b] = src.decode(n, id);
            lv[n][id] = dst.index(n, f.apply(n, a), g.apply(n, b));
        }
    }
    return SimplicialMap(src.set, dst.set, std::move(lv));
}

int PullbackSet::find(int n, int left_id, int right_id) const {
    const auto& v = pairs[n];
    auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(left_id, right_id));
    if (it == v.end() || *it != std::make_pair(left_id, right_id)) return -1;
    return static_cast<int>(it - v.begin());
}

PullbackSet pullback(const SimplicialMap& f, const SimplicialMap& g) {
    if (*f.target() != *g.target()) throw InputError("pullback: targets do not match");
    const SSetPtr& a = f.source();
    const SSetPtr& b = g.source();
    const int N = a->max_dim();
    PullbackSet out;
    out.pairs.assign(N + 1, {});
    for (int n = 0; n <= N; ++n)
        for (int ia = 0; ia < a->size(n); ++ia)
            for (int ib = 0; ib < b->size(n); ++ib)
                if (f.apply(n, ia) == g.apply(n, ib)) out.pairs[n].push_back({ia, ib});
    SimplicialSetData d;
    d.max_dim = N;
    d.size.resize(N + 1);
    d.face.resize(N + 1);
    d.degen.resize(N + 1);
    for (int n = 0; n <= N; ++n) d.size[n] = static_cast<int>(out.pairs[n].size());
    auto find_at = [&](int n, int ia, int ib) {
        const auto& v = out.pairs[n];
        auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(ia, ib));
        if (it == v.end() || *it != std::make_pair(ia, ib))
            throw InternalError("pullback: structure map escaped the fiber product");
        return static_cast<int>(it - v.begin());
    };
    for (int n = 1; n <= N; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < d.size[n]; ++id)
                d.face[n][i][id] = find_at(n - 1, a->face(n, i, out.pairs[n][id].first),
                                           b->face(n, i, out.pairs[n][id].second));
    }
    for (int n = 0; n < N; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < d.size[n]; ++id)
                d.degen[n][i][id] = find_at(n + 1, a->degen(n, i, out.pairs[n][id].first),
                                            b->degen(n, i, out.pairs[n][id].second));
    }
    out.set = SimplicialSet::build(std::move(d));
    std::vector<std::vector<int>> pl(N + 1), pr(N + 1);
    for (int n = 0; n <= N; ++n) {
        pl[n].resize(out.set->size(n));
        pr[n].resize(out.set->size(n));
        for (int id = 0; id < out.set->size(n); ++id) {
            pl[n][id] = out.pairs[n][id].first;
            pr[n][id] = out.pairs[n][id].second;
        }
    }
    out.proj_left = SimplicialMap(out.set, a, std::move(pl));
    out.proj_right = SimplicialMap(out.set, b, std::move(pr));
    return out;
}

Coproduct coproduct(const SSetPtr& x, const SSetPtr& y) {
    if (x->max_dim() != y->max_dim()) throw InputError("coproduct: dimension bound mismatch");
    const int N = x->max_dim();
    SimplicialSetData d;
    d.max_dim = N;
    d.size.resize(N + 1);
    d.face.resize(N + 1);
    d.degen.resize(N + 1);
    for (int n = 0; n <= N; ++n) d.size[n] = x->size(n) + y->size(n);
    for (int n = 1; n <= N; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i) {
            for (int id = 0; id < x->size(n); ++id) d.face[n][i][id] = x->face(n, i, id);
            for (int id = 0; id < y->size(n); ++id)
                d.face[n][i][x->size(n) + id] = x->size(n - 1) + y->face(n, i, id);
        }
    }
    for (int n = 0; n < N; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i) {
            for (int id = 0; id < x->size(n); ++id) d.degen[n][i][id] = x->degen(n, i, id);
            for (int id = 0; id < y->size(n); ++id)
                d.degen[n][i][x->size(n) + id] = x->size(n + 1) + y->degen(n, i, id);
        }
    }
    Coproduct out;
    out.set = SimplicialSet::build(std::move(d));
    std::vector<std::vector<int>> il(N + 1), ir(N + 1);
    for (int n = 0; n <= N; ++n) {
        il[n].resize(x->size(n));
        for (int id = 0; id < x->size(n); ++id) il[n][id] = id;
        ir[n].resize(y->size(n));
        for (int id = 0; id < y->size(n); ++id) ir[n][id] = x->size(n) + id;
    }
    out.inject_left = SimplicialMap(x, out.set, std::move(il));
    out.inject_right = SimplicialMap(y, out.set, std::move(ir));
    return out;
}

PushoutSet pushout_mono(const SimplicialMap& mono_into_x, const SimplicialMap& attach_to_y) {
    if (*mono_into_x.source() != *attach_to_y.source())
        throw InputError("pushout_mono: legs have different sources");
    if (!mono_into_x.is_mono()) throw InputError("pushout_mono: left leg is not a monomorphism");
    const SSetPtr& x = mono_into_x.target();
    const SSetPtr& y = attach_to_y.target();
    const SSetPtr& a = mono_into_x.source();
    const int N = x->max_dim();

    // class of each X simplex: Y id for identified ones, else fresh id after Y block
    std::vector<std::vector<int>> x_class(N + 1);
    std::vector<std::vector<int>> x_rep(N + 1);  // new id -> X id for the non-identified block
    for (int n = 0; n <= N; ++n) {
        x_class[n].assign(x->size(n), -1);
        for (int id = 0; id < a->size(n); ++id)
            x_class[n][mono_into_x.apply(n, id)] = attach_to_y.apply(n, id);
        for (int id = 0; id < x->size(n); ++id)
            if (x_class[n][id] < 0) {
                x_class[n][id] = y->size(n) + static_cast<int>(x_rep[n].size());
                x_rep[n].push_back(id);
            }
    }
    SimplicialSetData d;
    d.max_dim = N;
    d.size.resize(N + 1);
    d.face.resize(N + 1);
    d.degen.resize(N + 1);
    for (int n = 0; n <= N; ++n) d.size[n] = y->size(n) + static_cast<int>(x_rep[n].size());
    for (int n = 1; n <= N; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i) {
            for (int id = 0; id < y->size(n); ++id) d.face[n][i][id] = y->face(n, i, id);
            for (std::size_t r = 0; r < x_rep[n].size(); ++r)
                d.face[n][i][y->size(n) + r] = x_class[n - 1][x->face(n, i, x_rep[n][r])];
        }
    }
    for (int n = 0; n < N; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i) {
            for (int id = 0; id < y->size(n); ++id) d.degen[n][i][id] = y->degen(n, i, id);
            for (std::size_t r = 0; r < x_rep[n].size(); ++r)
                d.degen[n][i][y->size(n) + r] = x_class[n + 1][x->degen(n, i, x_rep[n][r])];
        }
    }
    PushoutSet out;
    out.set = SimplicialSet::build(std::move(d));
    std::vector<std::vector<int>> fx(N + 1), fy(N + 1);
    for (int n = 0; n <= N; ++n) {
        fx[n] = x_class[n];
        fy[n].resize(y->size(n));
        for (int id = 0; id < y->size(n); ++id) fy[n][id] = id;
    }
    out.from_ambient = SimplicialMap(x, out.set, std::move(fx));
    out.from_attached = SimplicialMap(y, out.set, std::move(fy));
    return out;
}

// --- maps from standard shapes ------------------------------------------

SimplicialMap yoneda_map(const SSetPtr& x, int n, int id) {
    if (n < 0 || n > x->max_dim() || id < 0 || id >= x->size(n))
        throw InputError("yoneda_map: simplex out of range");
    SSetPtr dn = standard_simplex(n, x->max_dim());
    std::vector<std::vector<int>> lv(x->max_dim() + 1);
    for (int m = 0; m <= x->max_dim(); ++m) {
        auto seqs = enumerate_monotone(m, n);
        lv[m].resize(seqs.size());
        for (std::size_t s = 0; s < seqs.size(); ++s) lv[m][s] = x->apply_operator(n, id, seqs[s]);
    }
    return SimplicialMap(dn, x, std::move(lv));
}

SimplicialMap vertex_map(const SSetPtr& x, int vertex_id) {
    return yoneda_map(x, 0, vertex_id);
}

SimplicialMap terminal_map(const SSetPtr& x, int max_dim) {
    SSetPtr pt = standard_simplex(0, max_dim);
    std::vector<std::vector<int>> lv(max_dim + 1);
    for (int n = 0; n <= max_dim; ++n) lv[n].assign(x->size(n), 0);
    return SimplicialMap(x, pt, std::move(lv));
}

// --- enumeration --------------------------------------------------------

namespace {

/// Shared backtracking core: assigns images to nondegenerate simplices of X
/// in (level, id) order; degenerate values derive from EZ forms.
struct MapSearch {
    const SimplicialSet& x;
    const SimplicialSet& y;
    long long budget;
    long long nodes = 0;
    std::vector<std::pair<int, int>> order;          // nondegenerate (level, id)
    std::vector<std::vector<int>> value;             // per level, -1 when not yet derivable

    MapSearch(const SSetPtr& xs, const SSetPtr& ys, long long b) : x(*xs), y(*ys), budget(b) {
        value.resize(x.max_dim() + 1);
        for (int n = 0; n <= x.max_dim(); ++n) value[n].assign(x.size(n), -1);
        for (int n = 0; n <= x.max_dim(); ++n)
            for (int id : x.nondegenerate_ids(n)) order.push_back({n, id});
    }

    int derived(int n, int id) const {
        if (x.is_nondegenerate(n, id)) return value[n][id];
        const EzForm& e = x.ez(n, id);
        int v = value[e.base_level][e.base_id];
        if (v < 0) return -1;
        int lvl = e.base_level;
        for (auto it = e.word.rbegin(); it != e.word.rend(); ++it) {
            v = y.degen(lvl, *it, v);
            ++lvl;
        }
        return v;
    }

    bool faces_match(int n, int id, int candidate) const {
        for (int i = 0; i <= n && n >= 1; ++i) {
            int want = derived(n - 1, x.face(n, i, id));
            if (want < 0) throw InternalError("map search: face value not yet derived");
            if (y.face(n, i, candidate) != want) return false;
        }
        return true;
    }

    template <typename Sink>
    bool run(std::size_t k, Sink&& sink) {  // sink returning false stops the search
        if (k == order.size()) return sink();
        auto [n, id] = order[k];
        for (int cand = 0; cand < y.size(n); ++cand) {
            if (++nodes > budget)
                throw BudgetError("enumerate_maps: search budget exhausted", budget);
            if (n >= 1 && !faces_match(n, id, cand)) continue;
            value[n][id] = cand;
            if (!run(k + 1, sink)) return false;
            value[n][id] = -1;
        }
        return true;
    }

    std::vector<std::vector<int>> full_levels() const {
        std::vector<std::vector<int>> lv(x.max_dim() + 1);
        for (int n = 0; n <= x.max_dim(); ++n) {
            lv[n].resize(x.size(n));
            for (int id = 0; id < x.size(n); ++id) {
                int v = derived(n, id);
                if (v < 0) throw InternalError("map search: incomplete assignment");
                lv[n][id] = v;
            }
        }
        return lv;
    }
};

}  // namespace

std::vector<SimplicialMap> enumerate_maps(const SSetPtr& x, const SSetPtr& y, long long budget) {
    if (x->max_dim() != y->max_dim()) throw InputError("enumerate_maps: dimension bound mismatch");
    std::vector<SimplicialMap> out;
    MapSearch search(x, y, budget);
    search.run(0, [&] {
        out.emplace_back(x, y, search.full_levels());  // constructor re-verifies commutation
        return true;
    });
    return out;
}

bool is_isomorphic(const SSetPtr& x, const SSetPtr& y, long long budget, SimplicialMap* witness) {
    if (x->max_dim() != y->max_dim()) return false;
    for (int n = 0; n <= x->max_dim(); ++n)
        if (x->size(n) != y->size(n)) return false;
    MapSearch search(x, y, budget);
    bool found = false;
    search.run(0, [&] {
        SimplicialMap m(x, y, search.full_levels());
        if (m.is_iso()) {
            if (witness) *witness = m;
            found = true;
            return false;
        }
        return true;
    });
    return found;
}

}  // namespace kanforge
