#pragma once

#include "kanforge/sset.hpp"

namespace kanforge::oracle {

/// Independent cross-checking implementations used only by tests.  They share
/// no algorithmic code with the main library beyond the raw storage
/// accessors; counts come from closed formulas or exhaustive brute force, so
/// agreement with the main implementations is meaningful evidence.

long long binomial(int n, int k);

/// Number of m-simplices of Delta[n]: weakly increasing (m+1)-tuples in [n].
long long standard_simplex_level_count(int n, int m);

/// Number of nondegenerate m-simplices of Delta[n].
long long standard_simplex_nondeg_count(int n, int m);

/// Nondegenerate m-simplices of a levelwise product, counted by the shuffle
/// formula over pairs of nondegenerate simplices with disjoint degeneracy
/// index sets.  Recomputes nondegeneracy from the raw data.
long long product_nondeg_count(const SSetPtr& x, const SSetPtr& y, int m);

/// Count simplicial maps x -> y by levelwise brute force over all functions
/// with incremental pruning.  Independent of the nondegenerate-generator
/// search used by enumerate_maps.
long long count_maps(const SSetPtr& x, const SSetPtr& y, long long budget);

/// Count maps f : x -> y with py o f = px (maps over a common base).
long long count_maps_over(const SSetPtr& x, const SSetPtr& y, const SimplicialMap& px,
                          const SimplicialMap& py, long long budget);

/// Does the commuting square (top : A -> E, bottom : B -> C, left : A -> B,
/// right : E -> C) admit a diagonal B -> E?  Brute force over all levelwise
/// functions, checking simpliciality and both triangles afterwards.
bool square_has_filler(const SimplicialMap& left, const SimplicialMap& right,
                       const SimplicialMap& top, const SimplicialMap& bottom,
                       long long budget);

}  // namespace kanforge::oracle
