#pragma once

#include "kanforge/config.hpp"
#include "kanforge/lifting.hpp"
#include "kanforge/sset.hpp"

namespace kanforge {

/// An object of the slice over a base: a simplicial set with its projection.
struct SliceObject {
    SSetPtr total;
    SimplicialMap proj;  // total -> base
    const SSetPtr& base() const { return proj.target(); }
};

SliceObject make_slice(SimplicialMap proj);

/// The map Delta[m] -> Delta[n] induced by a monotone alpha : [m] -> [n].
SimplicialMap standard_simplex_map(const MonotoneMap& alpha, int n, int max_dim);

/// All maps a.total -> b.total commuting with the projections, in
/// deterministic order.  Throws BudgetError when enumeration cannot finish.
std::vector<SimplicialMap> maps_over(const SliceObject& a, const SliceObject& b,
                                     long long budget);

struct PullbackAlong {
    SliceObject object;       // t* e, over the source of t
    SimplicialMap cartesian;  // t* total -> total, lying over t
    PullbackSet raw;          // pair bookkeeping: (source-of-t simplex, total simplex)
};

/// Base change of e along t : B' -> base(e).
PullbackAlong pullback_along(const SimplicialMap& t, const SliceObject& e);

// --- internal hom -------------------------------------------------------

/// Fiber data of the hom object at one base simplex b: the two restricted
/// objects over Delta[n] and every map between them over Delta[n].
struct HomFiber {
    PullbackAlong dom;  // b* e1
    PullbackAlong cod;  // b* e2
    std::vector<SimplicialMap> members;
};

/**
 * The exponential Hom_base(e1, e2) as an object over the base: an n-simplex
 * is a base simplex b together with a map b* e1 -> b* e2 over Delta[n];
 * operators act by restricting along the corresponding simplex maps.
 */
struct InternalHom {
    SliceObject object;
    std::vector<std::vector<int>> base_of;    // hom id -> base id
    std::vector<std::vector<int>> member_of;  // hom id -> index into the fiber
    std::vector<std::vector<int>> offset;     // (level, base id) -> first hom id
    std::vector<std::vector<HomFiber>> fibers;

    int id_of(int n, int base_id, int member) const { return offset[n][base_id] + member; }
};

InternalHom internal_hom(const SliceObject& e1, const SliceObject& e2, const Config& cfg);

// --- pushforward --------------------------------------------------------

struct PushforwardFiber {
    PullbackSet shape;                   // Delta[n] x_B A for this base simplex
    std::vector<SimplicialMap> members;  // maps shape -> e.total over A
};

/**
 * Right adjoint to base change along i : A -> B.  An n-simplex over b is a
 * map over A from the restricted simplex Delta[n] x_B A into e.  Fiber
 * lists longer than cfg.fiber_cap raise CapError.
 */
struct Pushforward {
    SliceObject object;  // i_* e, over B
    std::vector<std::vector<int>> base_of;
    std::vector<std::vector<int>> member_of;
    std::vector<std::vector<int>> offset;
    std::vector<std::vector<PushforwardFiber>> fibers;

    int id_of(int n, int base_id, int member) const { return offset[n][base_id] + member; }
};

Pushforward pushforward(const SimplicialMap& i, const SliceObject& e, const Config& cfg);

/// Adjunction unit y -> i_* i^* y over B.  `restricted` must be
/// pullback_along(i, y) and `pushed` the pushforward of its object.
SimplicialMap unit_map(const SimplicialMap& i, const SliceObject& y,
                       const PullbackAlong& restricted, const Pushforward& pushed);

/// Adjunction counit i^* i_* e -> e over A.  `pushed` is pushforward(i, e),
/// `restricted` is pullback_along(i, pushed.object).
SimplicialMap counit_map(const SimplicialMap& i, const SliceObject& e,
                         const Pushforward& pushed, const PullbackAlong& restricted);

/// Inverse of the counit, defined when i is a monomorphism; both composites
/// are verified exactly and InternalError reports any failure.
SimplicialMap counit_inverse(const SimplicialMap& i, const SliceObject& e,
                             const Pushforward& pushed, const PullbackAlong& restricted);

// --- extension of trivial fibrations ------------------------------------

/**
 * Extension of a trivial fibration t over A to one over B along a mono
 * i : A -> B, by pushforward.  The counit isomorphism exhibits the original
 * object as the pullback of the extension, making the comparison square
 * cartesian; the result carries a fresh boundary-lifting report.
 */
struct JoyalExtension {
    Pushforward pushed;
    PullbackAlong restricted;   // i^* pushed.object
    SimplicialMap counit;       // onto the original total space
    SimplicialMap counit_inv;
    SimplicialMap over_map;     // original total -> extended total, over i
    RlpReport extended_tf;
};

JoyalExtension joyal_extend(const SimplicialMap& i, const SliceObject& tf, const Config& cfg);

}  // namespace kanforge
