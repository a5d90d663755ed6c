#include "kanforge/fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace kanforge {

int pick(std::mt19937_64& rng, int k) {
    if (k <= 0) throw InputError("pick: empty range");
    return static_cast<int>(rng() % static_cast<std::uint64_t>(k));
}

namespace {

/// Profile of a graph simplex: a monotone map [n] -> [1].  Constant profiles
/// are vertex towers; surjective ones ride an edge, identified by the
/// position of the 0 -> 1 step (1..n), stored as step - 1.
int profile_step(const MonotoneMap& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] == 1) return static_cast<int>(i);
    return static_cast<int>(f.size());
}

}  // namespace

SSetPtr graph_complex(int vertices, const std::vector<std::pair<int, int>>& edges, int max_dim) {
    if (vertices < 0) throw InputError("graph_complex: negative vertex count");
    for (auto [s, t] : edges)
        if (s < 0 || s >= vertices || t < 0 || t >= vertices)
            throw InputError("graph_complex: edge endpoint out of range");
    const int V = vertices;
    const int E = static_cast<int>(edges.size());
    SimplicialSetData d;
    d.max_dim = max_dim;
    d.size.resize(max_dim + 1);
    d.face.resize(max_dim + 1);
    d.degen.resize(max_dim + 1);
    for (int n = 0; n <= max_dim; ++n) d.size[n] = n == 0 ? V : V + E * n;

    // id layout at level n >= 1: towers 0..V-1, then edge e step s:
    // V + e*n + (s-1)
    auto tower = [](int v) { return v; };
    auto edge_id = [&](int n, int e, int step) { return V + e * n + (step - 1); };

    for (int n = 1; n <= max_dim; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i) {
            for (int v = 0; v < V; ++v) d.face[n][i][tower(v)] = tower(v);
            for (int e = 0; e < E; ++e)
                for (int step = 1; step <= n; ++step) {
                    MonotoneMap f(n + 1, 0);
                    for (int j = step; j <= n; ++j) f[j] = 1;
                    MonotoneMap g = drop_entry(f, i);
                    int gs = profile_step(g);
                    int id = edge_id(n, e, step);
                    if (gs == 0)
                        d.face[n][i][id] = tower(edges[e].second);  // constant 1
                    else if (gs == n)
                        d.face[n][i][id] = tower(edges[e].first);  // constant 0
                    else
                        d.face[n][i][id] = edge_id(n - 1, e, gs);
                }
        }
    }
    for (int n = 0; n < max_dim; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i) {
            for (int v = 0; v < V; ++v) d.degen[n][i][tower(v)] = tower(v);
            for (int e = 0; e < E && n >= 1; ++e)
                for (int step = 1; step <= n; ++step) {
                    MonotoneMap f(n + 1, 0);
                    for (int j = step; j <= n; ++j) f[j] = 1;
                    MonotoneMap g = duplicate_entry(f, i);
                    d.degen[n][i][edge_id(n, e, step)] = edge_id(n + 1, e, profile_step(g));
                }
        }
    }
    return SimplicialSet::build(std::move(d));
}

SSetPtr polygon(int m, int max_dim) {
    if (m < 1) throw InputError("polygon: need at least one vertex");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i) edges.push_back({i, (i + 1) % m});
    return graph_complex(m, edges, max_dim);
}

SimplicialMap polygon_cover(int sheets, int m, int max_dim) {
    if (sheets < 1) throw InputError("polygon_cover: need at least one sheet");
    SSetPtr total = polygon(sheets * m, max_dim);
    SSetPtr base = polygon(m, max_dim);
    const int V = sheets * m;
    std::vector<std::vector<int>> lv(max_dim + 1);
    lv[0].resize(V);
    for (int v = 0; v < V; ++v) lv[0][v] = v % m;
    for (int n = 1; n <= max_dim; ++n) {
        lv[n].resize(total->size(n));
        for (int v = 0; v < V; ++v) lv[n][v] = v % m;
        for (int e = 0; e < V; ++e)
            for (int step = 1; step <= n; ++step)
                lv[n][V + e * n + (step - 1)] = m + (e % m) * n + (step - 1);
    }
    return SimplicialMap(total, base, std::move(lv));
}

SSetPtr pair_groupoid_nerve(int objects, int max_dim) {
    if (objects < 0) throw InputError("pair_groupoid_nerve: negative object count");
    SimplicialSetData d;
    d.max_dim = max_dim;
    d.size.resize(max_dim + 1);
    d.face.resize(max_dim + 1);
    d.degen.resize(max_dim + 1);
    long long sz = objects;
    for (int n = 0; n <= max_dim; ++n) {
        d.size[n] = static_cast<int>(sz);
        sz *= objects;
    }
    for (int n = 1; n <= max_dim; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < d.size[n]; ++id) {
                std::vector<int> t = nerve_tuple(objects, n, id);
                t.erase(t.begin() + i);
                d.face[n][i][id] = nerve_id(objects, t);
            }
    }
    for (int n = 0; n < max_dim; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(d.size[n]));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < d.size[n]; ++id) {
                std::vector<int> t = nerve_tuple(objects, n, id);
                t.insert(t.begin() + i, t[i]);
                d.degen[n][i][id] = nerve_id(objects, t);
            }
    }
    return SimplicialSet::build(std::move(d));
}

std::vector<int> nerve_tuple(int objects, int level, int id) {
    std::vector<int> t(level + 1);
    for (int j = level; j >= 0; --j) {
        t[j] = id % objects;
        id /= objects;
    }
    return t;
}

int nerve_id(int objects, const std::vector<int>& tuple) {
    int id = 0;
    for (int v : tuple) id = id * objects + v;
    return id;
}

Relabeled relabel(const SSetPtr& x, std::mt19937_64& rng) {
    const int N = x->max_dim();
    std::vector<std::vector<int>> perm(N + 1), inv(N + 1);
    for (int n = 0; n <= N; ++n) {
        perm[n].resize(x->size(n));
        std::iota(perm[n].begin(), perm[n].end(), 0);
        for (int i = x->size(n) - 1; i > 0; --i) std::swap(perm[n][i], perm[n][pick(rng, i + 1)]);
        inv[n].assign(x->size(n), 0);
        for (int i = 0; i < x->size(n); ++i) inv[n][perm[n][i]] = i;
    }
    SimplicialSetData d;
    d.max_dim = N;
    d.size = x->data().size;
    d.face.resize(N + 1);
    d.degen.resize(N + 1);
    for (int n = 1; n <= N; ++n) {
        d.face[n].assign(n + 1, std::vector<int>(x->size(n)));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < x->size(n); ++id)
                d.face[n][i][perm[n][id]] = perm[n - 1][x->face(n, i, id)];
    }
    for (int n = 0; n < N; ++n) {
        d.degen[n].assign(n + 1, std::vector<int>(x->size(n)));
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < x->size(n); ++id)
                d.degen[n][i][perm[n][id]] = perm[n + 1][x->degen(n, i, id)];
    }
    Relabeled out;
    out.set = SimplicialSet::build(std::move(d));
    out.to_new = SimplicialMap(x, out.set, std::move(perm));
    out.from_new = SimplicialMap(out.set, x, std::move(inv));
    return out;
}

SSetPtr random_complex(std::mt19937_64& rng, const Config& cfg, int cells) {
    SSetPtr cur = discrete_sset(1 + pick(rng, 3), cfg.max_dim);
    for (int step = 0; step < cells; ++step) {
        int n = 1 + pick(rng, cfg.max_dim);
        Subcomplex bd = boundary(n, cfg.max_dim);
        std::vector<SimplicialMap> attachments;
        try {
            attachments = enumerate_maps(bd.set, cur, cfg.search_budget);
        } catch (const BudgetError&) {
            break;  // complex grew too rich to enumerate; keep what we have
        }
        if (attachments.empty()) continue;
        const SimplicialMap& attach = attachments[pick(rng, static_cast<int>(attachments.size()))];
        cur = pushout_mono(bd.inclusion, attach).set;
    }
    return cur;
}

SimplicialMap random_map(std::mt19937_64& rng, const SSetPtr& x, const SSetPtr& y,
                         long long budget) {
    std::vector<SimplicialMap> all = enumerate_maps(x, y, budget);
    if (all.empty()) throw InputError("random_map: no maps exist");
    return all[pick(rng, static_cast<int>(all.size()))];
}

}  // namespace kanforge
