#include "kanforge/monotone.hpp"

#include <algorithm>

#include "kanforge/errors.hpp"

namespace kanforge {

bool is_monotone(const MonotoneMap& f, int codomain_top) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < 0 || f[i] > codomain_top) return false;
        if (i > 0 && f[i] < f[i - 1]) return false;
    }
    return true;
}

MonotoneMap compose_monotone(const MonotoneMap& f, const MonotoneMap& g) {
    MonotoneMap out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] < 0 || g[i] >= static_cast<int>(f.size()))
            throw InternalError("compose_monotone: index out of range");
        out[i] = f[g[i]];
    }
    return out;
}

MonotoneMap coface(int n, int i) {
    if (n < 1 || i < 0 || i > n) throw InputError("coface: index out of range");
    MonotoneMap out;
    out.reserve(n);
    for (int v = 0; v <= n; ++v)
        if (v != i) out.push_back(v);
    return out;
}

MonotoneMap codegeneracy(int n, int i) {
    if (n < 0 || i < 0 || i > n) throw InputError("codegeneracy: index out of range");
    MonotoneMap out;
    out.reserve(n + 2);
    for (int v = 0; v <= n; ++v) {
        out.push_back(v);
        if (v == i) out.push_back(v);
    }
    return out;
}

MonotoneMap identity_monotone(int n) {
    MonotoneMap out(n + 1);
    for (int v = 0; v <= n; ++v) out[v] = v;
    return out;
}

MonotoneMap drop_entry(const MonotoneMap& f, int i) {
    MonotoneMap out;
    out.reserve(f.size() - 1);
    for (std::size_t j = 0; j < f.size(); ++j)
        if (static_cast<int>(j) != i) out.push_back(f[j]);
    return out;
}

MonotoneMap duplicate_entry(const MonotoneMap& f, int i) {
    MonotoneMap out;
    out.reserve(f.size() + 1);
    for (std::size_t j = 0; j < f.size(); ++j) {
        out.push_back(f[j]);
        if (static_cast<int>(j) == i) out.push_back(f[j]);
    }
    return out;
}

std::vector<MonotoneMap> enumerate_monotone(int m, int n) {
    std::vector<MonotoneMap> out;
    if (m < 0 || n < 0) return out;
    MonotoneMap cur(m + 1, 0);
    while (true) {
        out.push_back(cur);
        int i = m;
        while (i >= 0 && cur[i] == n) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j <= m; ++j) cur[j] = cur[i];
    }
    return out;
}

int monotone_rank(const MonotoneMap& f, int n) {
    if (f.empty() || !is_monotone(f, n)) return -1;
    auto all = enumerate_monotone(static_cast<int>(f.size()) - 1, n);
    auto it = std::lower_bound(all.begin(), all.end(), f);
    if (it == all.end() || *it != f) return -1;
    return static_cast<int>(it - all.begin());
}

}  // namespace kanforge
