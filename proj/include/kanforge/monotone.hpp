#pragma once

#include <vector>

namespace kanforge {

/// A weakly increasing function [m] -> [n], stored as its m+1 values.
/// These index the simplices of standard simplices and drive the action of
/// simplicial operators.
using MonotoneMap = std::vector<int>;

bool is_monotone(const MonotoneMap& f, int codomain_top);

/// f o g where g : [k] -> [m] and f : [m] -> [n].
MonotoneMap compose_monotone(const MonotoneMap& f, const MonotoneMap& g);

/// Coface delta_i : [n-1] -> [n] (skips i).  Requires n >= 1, 0 <= i <= n.
MonotoneMap coface(int n, int i);

/// Codegeneracy sigma_i : [n+1] -> [n] (repeats i).  Requires 0 <= i <= n.
MonotoneMap codegeneracy(int n, int i);

MonotoneMap identity_monotone(int n);

/// Drop the i-th entry: f o delta_i.
MonotoneMap drop_entry(const MonotoneMap& f, int i);

/// Duplicate the i-th entry: f o sigma_i.
MonotoneMap duplicate_entry(const MonotoneMap& f, int i);

/// All monotone maps [m] -> [n] in lexicographic order.  This ordering fixes
/// the simplex ids of standard simplices.
std::vector<MonotoneMap> enumerate_monotone(int m, int n);

/// Lexicographic rank of f within enumerate_monotone(m, n); -1 if absent.
int monotone_rank(const MonotoneMap& f, int n);

}  // namespace kanforge
