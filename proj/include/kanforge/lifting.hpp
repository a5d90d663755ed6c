#pragma once

#include <variant>
#include <vector>

#include "kanforge/config.hpp"
#include "kanforge/sset.hpp"

namespace kanforge {

/// A commuting square
///
///        top
///     A -----> E
///     |        |
///  left        right
///     v        v
///     B -----> C
///       bottom
///
/// asking for a diagonal B -> E through both triangles.
struct LiftingProblem {
    SimplicialMap left;
    SimplicialMap top;
    SimplicialMap right;
    SimplicialMap bottom;
};

struct Filler {
    SimplicialMap diagonal;
    long long nodes = 0;
};

/// The search space was exhausted without a filler; complete refutation.
struct Refuted {
    long long nodes = 0;
    long long space_size = 0;  // upper bound on assignments, saturating
};

/// The node budget ran out before the search completed; no verdict.
struct Exhausted {
    long long budget = 0;
    long long nodes = 0;
};

using LiftResult = std::variant<Filler, Refuted, Exhausted>;

bool has_filler(const LiftResult& r);

/**
 * Backtracking search for a diagonal filler.  Values forced through the left
 * leg are pinned first (conflicts refute immediately); the remaining
 * nondegenerate simplices of B are assigned in (level, id) order from
 * candidates that project correctly and match already-known faces.  A found
 * filler is re-verified before being returned.
 */
LiftResult solve_lifting(const LiftingProblem& problem, long long budget);

/// All fillers, in deterministic search order.  Throws BudgetError when the
/// budget runs out, since a truncated enumeration is not a complete one.
std::vector<SimplicialMap> enumerate_lifts(const LiftingProblem& problem, long long budget);

// --- right lifting property reports -------------------------------------

enum class RlpStatus {
    HasLifts,   // every generated square has a filler
    FailsLift,  // some square is refuted; see failures
    Exhausted,  // a search ran out of budget before a verdict
};

struct RlpCounterexample {
    int n = 0;
    int k = 0;  // horn index, or -1 for a boundary inclusion
    SimplicialMap top;
    SimplicialMap bottom;
    LiftResult result;
};

struct RlpReport {
    RlpStatus status = RlpStatus::HasLifts;
    std::vector<RlpCounterexample> failures;  // first unfillable square per generator
    long long squares_checked = 0;
    long long nodes = 0;
    bool ok() const { return status == RlpStatus::HasLifts; }
};

/// Right lifting property against every horn inclusion with 1 <= n <=
/// cfg.max_dim.  Squares pair each map from the horn into the total space
/// with each compatible simplex of the base.
RlpReport is_fibration(const SimplicialMap& p, const Config& cfg);

/// Right lifting property against every boundary inclusion with 0 <= n <=
/// cfg.max_dim; the n = 0 case checks vertex surjectivity.
RlpReport is_trivial_fibration(const SimplicialMap& p, const Config& cfg);

/// Horn filling in x itself: the map to the point is a fibration.
RlpReport is_kan(const SSetPtr& x, const Config& cfg);

}  // namespace kanforge
