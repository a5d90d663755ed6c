#include "kanforge/oracle.hpp"

#include <algorithm>

namespace kanforge::oracle {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

long long standard_simplex_level_count(int n, int m) {
    // weakly increasing (m+1)-tuples from an (n+1)-letter alphabet
    return binomial(n + m + 1, m + 1);
}

long long standard_simplex_nondeg_count(int n, int m) {
    // strictly increasing tuples
    return binomial(n + 1, m + 1);
}

namespace {

/// Dimension of the nondegenerate base of each simplex, recomputed from raw
/// degeneracy tables: a simplex is degenerate exactly when it lies in the
/// image of some s_i one level down.
std::vector<std::vector<int>> base_dims(const SimplicialSet& s) {
    const int N = s.max_dim();
    std::vector<std::vector<char>> degenerate(N + 1);
    for (int n = 0; n <= N; ++n) degenerate[n].assign(s.size(n), 0);
    for (int n = 0; n < N; ++n)
        for (int i = 0; i <= n; ++i)
            for (int id = 0; id < s.size(n); ++id) degenerate[n + 1][s.degen(n, i, id)] = 1;

    std::vector<std::vector<int>> dim(N + 1);
    for (int n = 0; n <= N; ++n) {
        dim[n].assign(s.size(n), -1);
        for (int id = 0; id < s.size(n); ++id)
            if (!degenerate[n][id]) dim[n][id] = n;
    }
    // peel degenerate simplices down to a nondegenerate preimage
    for (int n = 1; n <= N; ++n)
        for (int id = 0; id < s.size(n); ++id) {
            if (dim[n][id] >= 0) continue;
            for (int i = 0; i <= n - 1 && dim[n][id] < 0; ++i)
                for (int z = 0; z < s.size(n - 1) && dim[n][id] < 0; ++z)
                    if (s.degen(n - 1, i, z) == id) dim[n][id] = dim[n - 1][z];
        }
    return dim;
}

}  // namespace

long long product_nondeg_count(const SSetPtr& x, const SSetPtr& y, int m) {
    auto dx = base_dims(*x);
    auto dy = base_dims(*y);
    auto nondeg_at = [](const std::vector<std::vector<int>>& d, int lvl) {
        long long c = 0;
        for (int v : d[lvl])
            if (v == lvl) ++c;
        return c;
    };
    long long total = 0;
    for (int p = 0; p <= m; ++p)
        for (int q = 0; q <= m; ++q) {
            if (p + q < m) continue;
            // disjoint degeneracy index sets A, B in {0..m-1}, |A| = m-p, |B| = m-q
            long long shuffles = binomial(m, m - p) * binomial(p, m - q);
            total += nondeg_at(dx, p) * nondeg_at(dy, q) * shuffles;
        }
    return total;
}

namespace {

/// Levelwise brute force over all functions X_n -> Y_n, pruned by the
/// face and degeneracy equations linking consecutive levels.
struct BruteMaps {
    const SimplicialSet& x;
    const SimplicialSet& y;
    long long budget;
    long long nodes = 0;
    std::vector<std::vector<int>> assign;  // assign[n][id], -1 unassigned

    BruteMaps(const SimplicialSet& xs, const SimplicialSet& ys, long long b)
        : x(xs), y(ys), budget(b) {
        assign.resize(x.max_dim() + 1);
        for (int n = 0; n <= x.max_dim(); ++n) assign[n].assign(x.size(n), -1);
    }

    bool consistent(int n, int id) const {
        int v = assign[n][id];
        if (n >= 1)
            for (int i = 0; i <= n; ++i) {
                int fv = assign[n - 1][x.face(n, i, id)];
                if (fv >= 0 && y.face(n, i, v) != fv) return false;
            }
        if (n >= 1)
            for (int i = 0; i < n; ++i)
                for (int z = 0; z < x.size(n - 1); ++z)
                    if (x.degen(n - 1, i, z) == id) {
                        int zv = assign[n - 1][z];
                        if (zv >= 0 && y.degen(n - 1, i, zv) != v) return false;
                    }
        return true;
    }

    template <typename Sink>
    bool walk(int n, int id, Sink&& sink) {
        if (n > x.max_dim()) return sink();
        if (id == x.size(n)) return walk(n + 1, 0, sink);
        for (int v = 0; v < y.size(n); ++v) {
            if (++nodes > budget) throw BudgetError("oracle: brute force budget exhausted", budget);
            assign[n][id] = v;
            if (consistent(n, id) && !walk(n, id + 1, sink)) return false;
            assign[n][id] = -1;
        }
        return true;
    }
};

}  // namespace

long long count_maps(const SSetPtr& x, const SSetPtr& y, long long budget) {
    BruteMaps bf(*x, *y, budget);
    long long count = 0;
    bf.walk(0, 0, [&] {
        ++count;
        return true;
    });
    return count;
}

long long count_maps_over(const SSetPtr& x, const SSetPtr& y, const SimplicialMap& px,
                          const SimplicialMap& py, long long budget) {
    BruteMaps bf(*x, *y, budget);
    long long count = 0;
    bf.walk(0, 0, [&] {
        for (int n = 0; n <= x->max_dim(); ++n)
            for (int id = 0; id < x->size(n); ++id)
                if (py.apply(n, bf.assign[n][id]) != px.apply(n, id)) return true;
        ++count;
        return true;
    });
    return count;
}

bool square_has_filler(const SimplicialMap& left, const SimplicialMap& right,
                       const SimplicialMap& top, const SimplicialMap& bottom,
                       long long budget) {
    const SSetPtr& b = left.target();
    const SSetPtr& e = right.source();
    BruteMaps bf(*b, *e, budget);
    bool found = false;
    bf.walk(0, 0, [&] {
        // diagonal must restrict to the top along the left leg ...
        for (int n = 0; n <= b->max_dim(); ++n)
            for (int id = 0; id < left.source()->size(n); ++id)
                if (bf.assign[n][left.apply(n, id)] != top.apply(n, id)) return true;
        // ... and project to the bottom along the right leg
        for (int n = 0; n <= b->max_dim(); ++n)
            for (int id = 0; id < b->size(n); ++id)
                if (right.apply(n, bf.assign[n][id]) != bottom.apply(n, id)) return true;
        found = true;
        return false;
    });
    return found;
}

}  // namespace kanforge::oracle
