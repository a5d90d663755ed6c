#pragma once

#include <random>
#include <utility>
#include <vector>

#include "kanforge/config.hpp"
#include "kanforge/sset.hpp"

namespace kanforge {

/// Deterministic draw in [0, k); avoids std::uniform_int_distribution so
/// streams are identical across standard library implementations.
int pick(std::mt19937_64& rng, int k);

/**
 * The 1-dimensional complex of a directed multigraph: vertices, the listed
 * edges, and only degenerate simplices above level 1.  Level n >= 1 ids:
 * first the vertex towers 0..V-1, then for edge e the n simplices with a
 * genuine edge profile, ordered by the position of the profile's step.
 */
SSetPtr graph_complex(int vertices, const std::vector<std::pair<int, int>>& edges, int max_dim);

/// Cyclic graph: m vertices, edges i -> i+1 mod m.
SSetPtr polygon(int m, int max_dim);

/// The covering projection polygon(sheets * m) -> polygon(m), reducing
/// vertex and edge indices mod m.
SimplicialMap polygon_cover(int sheets, int m, int max_dim);

/**
 * Nerve of the groupoid with one invertible morphism between any two of
 * `objects` objects: level n holds all (n+1)-tuples, faces drop entries,
 * degeneracies repeat them.  Kan and contractible.
 */
SSetPtr pair_groupoid_nerve(int objects, int max_dim);

/// Tuple <-> id conversions for pair_groupoid_nerve levels.
std::vector<int> nerve_tuple(int objects, int level, int id);
int nerve_id(int objects, const std::vector<int>& tuple);

struct Relabeled {
    SSetPtr set;
    SimplicialMap to_new;    // original -> relabeled, an isomorphism
    SimplicialMap from_new;  // inverse
};

/// Same simplicial set with ids scrambled by per-level permutations.
Relabeled relabel(const SSetPtr& x, std::mt19937_64& rng);

/// Random complex grown from a few vertices by attaching simplices of
/// dimension <= cfg.max_dim along random boundary maps.
SSetPtr random_complex(std::mt19937_64& rng, const Config& cfg, int cells);

/// Random map out of x assembled by the deterministic map search with a
/// randomly chosen index among all maps x -> y.  Throws InputError when no
/// map exists.
SimplicialMap random_map(std::mt19937_64& rng, const SSetPtr& x, const SSetPtr& y,
                         long long budget);

}  // namespace kanforge
