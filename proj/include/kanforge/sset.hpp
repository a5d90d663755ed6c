#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kanforge/config.hpp"
#include "kanforge/errors.hpp"
#include "kanforge/monotone.hpp"

namespace kanforge {

class SimplicialSet;
using SSetPtr = std::shared_ptr<const SimplicialSet>;

/// Raw level data for a simplicial set truncated at max_dim.  All simplices,
/// degenerate ones included, are stored explicitly with dense integer ids per
/// level; face and degeneracy maps are total within the bound.
struct SimplicialSetData {
    int max_dim = 0;
    std::vector<int> size;                            // size[n], n = 0..max_dim
    std::vector<std::vector<std::vector<int>>> face;  // face[n][i][id], 1 <= n <= max_dim
    std::vector<std::vector<std::vector<int>>> degen; // degen[n][i][id], 0 <= n < max_dim
};

struct ValidationIssue {
    std::string identity;  // which simplicial identity or structural rule failed
    int level = 0;
    int id = 0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string summary() const;
};

/// Check sizes, index ranges and every simplicial identity expressible within
/// the bound.  Never throws; all violations are reported.
ValidationReport validate(const SimplicialSetData& data);

struct EzForm {
    int base_level = 0;
    int base_id = 0;
    std::vector<int> word;  // strictly decreasing degeneracy indices, outermost first
};

/**
 * A finite simplicial set, truncated at a fixed dimension bound.
 *
 * Immutable after construction.  Eilenberg-Zilber decompositions and the
 * nondegeneracy flags are precomputed; every simplex is either flagged
 * nondegenerate or carries a unique (base, degeneracy word) normal form.
 */
class SimplicialSet {
public:
    int max_dim() const { return data_.max_dim; }
    int size(int n) const { return n <= data_.max_dim ? data_.size[n] : 0; }
    int face(int n, int i, int id) const { return data_.face[n][i][id]; }
    int degen(int n, int i, int id) const { return data_.degen[n][i][id]; }
    bool is_nondegenerate(int n, int id) const { return nondeg_[n][id] != 0; }
    const std::vector<int>& nondegenerate_ids(int n) const { return nondeg_ids_[n]; }
    const EzForm& ez(int n, int id) const { return ez_[n][id]; }

    int total_size() const;
    int nondegenerate_count() const;

    /// Action of an arbitrary monotone operator op : [m] -> [dim(id)] on a
    /// simplex, computed through the epi-mono factorization of op.
    int apply_operator(int n, int id, const MonotoneMap& op) const;

    const SimplicialSetData& data() const { return data_; }

    bool operator==(const SimplicialSet& other) const { return same_data(other); }
    bool operator!=(const SimplicialSet& other) const { return !same_data(other); }

    /// Validates (throwing InternalError on violation) and freezes the data.
    static SSetPtr build(SimplicialSetData data);

    /// Freezes pre-validated data; used by the parser after reporting issues.
    static SSetPtr build_unchecked(SimplicialSetData data);

private:
    explicit SimplicialSet(SimplicialSetData data);
    bool same_data(const SimplicialSet& other) const {
        return data_.max_dim == other.data_.max_dim && data_.size == other.data_.size &&
               data_.face == other.data_.face && data_.degen == other.data_.degen;
    }

    SimplicialSetData data_;
    std::vector<std::vector<char>> nondeg_;
    std::vector<std::vector<int>> nondeg_ids_;
    std::vector<std::vector<EzForm>> ez_;
};

/**
 * A simplicial map: levelwise functions commuting with faces and
 * degeneracies within the shared dimension bound.
 */
class SimplicialMap {
public:
    SimplicialMap() = default;
    SimplicialMap(SSetPtr source, SSetPtr target, std::vector<std::vector<int>> levels);

    const SSetPtr& source() const { return source_; }
    const SSetPtr& target() const { return target_; }
    int apply(int n, int id) const { return levels_[n][id]; }
    const std::vector<std::vector<int>>& levels() const { return levels_; }

    bool is_mono() const;
    bool is_iso() const;
    SimplicialMap inverse() const;  // requires is_iso

    bool operator==(const SimplicialMap& other) const;
    bool operator!=(const SimplicialMap& other) const { return !(*this == other); }

private:
    SSetPtr source_;
    SSetPtr target_;
    std::vector<std::vector<int>> levels_;
};

SimplicialMap identity_map(const SSetPtr& x);
SimplicialMap compose(const SimplicialMap& g, const SimplicialMap& f);  // g o f

/// Maps agree as functions; endpoints must already match by content.
bool maps_equal_pointwise(const SimplicialMap& f, const SimplicialMap& g);

// --- constructions ------------------------------------------------------

/// Delta[n]: level m lists the monotone maps [m] -> [n] in lexicographic
/// order, so simplex ids are ranks of their vertex sequences.
SSetPtr standard_simplex(int n, int max_dim);

/// The vertex sequence of simplex `id` at level m of standard_simplex(n).
MonotoneMap standard_simplex_seq(int n, int m, int id);

/// Rank lookup inverse to standard_simplex_seq.
int standard_simplex_id(int n, const MonotoneMap& seq);

SSetPtr empty_sset(int max_dim);

/// k disjoint copies of Delta[0].
SSetPtr discrete_sset(int k, int max_dim);

struct Subcomplex {
    SSetPtr set;
    SimplicialMap inclusion;
    std::vector<std::vector<int>> old_of_new;  // new id -> ambient id
    std::vector<std::vector<int>> new_of_old;  // ambient id -> new id or -1
};

/// Subcomplex spanned by the given ambient simplices; `keep[n]` flags kept
/// ids.  Throws InputError if the selection is not closed under faces and
/// degeneracies.
Subcomplex subcomplex(const SSetPtr& ambient, const std::vector<std::vector<char>>& keep);

/// Smallest subcomplex containing the listed (level, id) generators.
Subcomplex generated_subcomplex(const SSetPtr& ambient,
                                const std::vector<std::pair<int, int>>& generators);

/// Horn Lambda^k[n] inside Delta[n]; requires 1 <= n <= max_dim, 0 <= k <= n.
Subcomplex horn(int n, int k, int max_dim);

/// Boundary of Delta[n]; n = 0 yields the empty subcomplex.
Subcomplex boundary(int n, int max_dim);

struct Product {
    SSetPtr set;
    SSetPtr left;
    SSetPtr right;
    SimplicialMap proj_left;
    SimplicialMap proj_right;

    int index(int n, int left_id, int right_id) const;
    std::pair<int, int> decode(int n, int id) const;
};

/// Levelwise product with componentwise structure maps; the id of a pair is
/// left_id * |right level| + right_id.
Product product(const SSetPtr& x, const SSetPtr& y);

/// Componentwise f x g between two product sets.
SimplicialMap product_map(const Product& src, const Product& dst, const SimplicialMap& f,
                          const SimplicialMap& g);

struct PullbackSet {
    SSetPtr set;
    SimplicialMap proj_left;   // onto source of f
    SimplicialMap proj_right;  // onto source of g
    std::vector<std::vector<std::pair<int, int>>> pairs;  // id -> (left, right)

    int find(int n, int left_id, int right_id) const;  // -1 if absent
};

/// Fiber product of f : A -> C and g : B -> C, levelwise pairs in
/// lexicographic order.
PullbackSet pullback(const SimplicialMap& f, const SimplicialMap& g);

struct Coproduct {
    SSetPtr set;
    SimplicialMap inject_left;
    SimplicialMap inject_right;
};

Coproduct coproduct(const SSetPtr& x, const SSetPtr& y);

struct PushoutSet {
    SSetPtr set;
    SimplicialMap from_ambient;   // X -> P
    SimplicialMap from_attached;  // Y -> P
};

/// Pushout of X <- A -> Y where the left leg is a monomorphism.  Levelwise:
/// Y plus the simplices of X outside the image of A.
PushoutSet pushout_mono(const SimplicialMap& mono_into_x, const SimplicialMap& attach_to_y);

// --- maps from standard shapes ------------------------------------------

/// The map Delta[n] -> X picking out the simplex (n, id).
SimplicialMap yoneda_map(const SSetPtr& x, int n, int id);

SimplicialMap vertex_map(const SSetPtr& x, int vertex_id);
SimplicialMap terminal_map(const SSetPtr& x, int max_dim);

// --- enumeration --------------------------------------------------------

/**
 * All simplicial maps X -> Y in deterministic order (lexicographic over the
 * images of nondegenerate simplices, lowest level first).  Throws
 * BudgetError when the backtracking search exceeds the budget; results are
 * never silently truncated.
 */
std::vector<SimplicialMap> enumerate_maps(const SSetPtr& x, const SSetPtr& y,
                                          long long budget);

/// Isomorphism search for tests and verification; returns an iso if found.
bool is_isomorphic(const SSetPtr& x, const SSetPtr& y, long long budget,
                   SimplicialMap* witness = nullptr);

}  // namespace kanforge
