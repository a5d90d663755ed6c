#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kanforge/config.hpp"
#include "kanforge/homotopy.hpp"
#include "kanforge/lifting.hpp"
#include "kanforge/slice.hpp"
#include "kanforge/sset.hpp"
#include "kanforge/universe.hpp"

namespace kanforge {

// --- objects of fiberwise equivalences ----------------------------------

/**
 * The subobject of an internal hom spanned by the simplices whose member
 * map is a weak equivalence.  Every kept simplex carries its verdict; the
 * selection is closed under faces and degeneracies because equivalences
 * are stable under base change, and the closure is re-verified.
 */
struct EqObject {
    InternalHom hom;
    Subcomplex carrier_in_hom;  // inside hom.object.total
    SliceObject carrier;        // over the same base
    std::vector<std::vector<WeqVerdict>> verdicts;  // indexed like the carrier

    /// Base simplex of a carrier simplex.
    int base_simplex(int n, int id) const;
    /// The member map of a carrier simplex, over its simplex of the base.
    const SimplicialMap& member(int n, int id) const;
};

/// pre: both projections are bounded fibrations.  A No verdict drops the
/// simplex, a Yes keeps it, and any Unknown aborts: BudgetError when the
/// search budget interfered, InputError otherwise.
EqObject eq_object(const SliceObject& e1, const SliceObject& e2, const Config& cfg);

/**
 * Self-equivalences of a fibration: the equivalence object of the two
 * base-change bundles over base x base.  The diagonal hits the identity
 * member over each base simplex; the two projections retract it exactly.
 */
struct EqSelf {
    Product square;             // base x base
    PullbackAlong left, right;  // the two base-change bundles
    EqObject eq;                // over square.set
    SimplicialMap delta;        // base -> eq.carrier.total, a monomorphism
    SimplicialMap source_map;   // eq.carrier.total -> base
    SimplicialMap target_map;
};

EqSelf eq_self(const SliceObject& e, const Config& cfg);

// --- univalence ----------------------------------------------------------

enum class UnivalenceStatus { Univalent, NotUnivalent, Unknown };

/**
 * Decision record for one fibration.  The diagonal route is decisive in
 * both directions; the boundary-lifting route for the target projection
 * certifies the positive direction only; a component-count mismatch
 * between the base and the carrier certifies the negative one.
 */
struct UnivalenceVerdict {
    UnivalenceStatus status = UnivalenceStatus::Unknown;
    std::string reason;
    WeqVerdict delta_verdict;
    std::optional<RlpReport> target_tf;  // boundary report for the target projection
    std::optional<Pi0Obstruction> pi0;
    bool budget_limited = false;
};

/// pre: the base passes the bounded Kan check.
UnivalenceVerdict is_univalent(const SliceObject& e, const Config& cfg);

// --- extending equivalences along a mono of bases ------------------------

/**
 * Extension of a fiberwise equivalence w : E1 -> E2 over A to one over B
 * along a mono i : A -> B, given an extension ebar2 of E2 over B and the
 * exact identification phi of its restriction with E2.  The result is the
 * fiber product of the pushforward of w with the unit of the adjunction
 * at ebar2.  The report certifies: (a) the restriction of the result to A
 * is exactly E1 and the restricted map is w, through an explicit
 * isomorphism; (b) fiber sizes, counted directly; (c) wbar is an
 * equivalence, split by the shape of w: a boundary-lifting report when w
 * is a trivial fibration, a deformation retraction built from one
 * homotopy-lifting square when w is a mono with one, and both pieces
 * through the mapping cylinder otherwise.
 */
struct UnivalentLift {
    SliceObject ebar1;  // over B
    SimplicialMap wbar;  // ebar1 -> ebar2, over B
    WellOrderedMorphism ebar1_wom;  // fiber orders extending those of E1

    // (a) exact restriction comparison
    PullbackAlong restricted;       // restriction of ebar1 to A
    SimplicialMap restriction_iso;  // restricted total -> E1 total, over A

    // (b) smallness by direct count
    int max_fiber = 0;
    bool small = true;

    // (c) the equivalence certificate for wbar
    FactorKind route = FactorKind::TrivialFibration;
    std::optional<RlpReport> wbar_tf;              // direct route
    std::optional<DeformationRetraction> wbar_dr;  // retraction route
    std::optional<SliceObject> mid;                // cylinder route: middle extension
    std::optional<SimplicialMap> wbar_into;        // ebar1 -> mid
    std::optional<SimplicialMap> wbar_collapse;    // mid -> ebar2
    std::optional<RlpReport> collapse_tf;
    std::optional<DeformationRetraction> into_dr;

    RlpReport ebar1_fibration;
};

UnivalentLift univalent_lift(const SimplicialMap& i, const SimplicialMap& w,
                             const SliceObject& e1, const SliceObject& e2,
                             const SliceObject& ebar2, const SimplicialMap& phi,
                             const Config& cfg);

// --- small replacements and the contractibility probe --------------------

/// A replacement of the input bundle over one frame: a small canonical
/// well-ordered fibration together with a certified equivalence onto it.
struct SmallReplacement {
    WellOrderedMorphism bundle;  // canonical, over the frame
    RlpReport bundle_fibration;
    SimplicialMap weq;  // restricted input total -> bundle total, over the frame
    WeqVerdict weq_verdict;
};

/// Every replacement over the frame Delta[level] x base, in deterministic
/// order: bundles by canonical data, equivalences by enumeration order.
struct ReplacementLevel {
    int level = 0;
    Product frame;            // Delta[level] x base
    PullbackAlong restricted; // input bundle pulled back to the frame
    std::vector<SmallReplacement> elements;
};

/// pre: p is a bounded fibration.  Enumerates every capped bundle over the
/// frame and every equivalence onto it; an Unknown verdict aborts, so a
/// finished level is a complete enumeration.
ReplacementLevel replacement_level(const SliceObject& p, int n, const Config& cfg);

/// Operator action: restricts an element of `from` along op and returns its
/// index in `to`, which must be the level matching the operator's source.
int replacement_restrict(const ReplacementLevel& from, int index, const MonotoneMap& op,
                         const ReplacementLevel& to);

/**
 * Bounded contractibility probe for the space of replacements: assemble
 * the levels into a simplicial set, test boundary filling on it directly,
 * and again by searching extension pairs in the level lists; the two
 * routes must agree on every instance.
 */
struct ReplacementContractibility {
    std::vector<ReplacementLevel> levels;
    SSetPtr complex;
    RlpReport boundary_rlp;
    bool routes_agree = true;
    int instances = 0;
    bool contractible() const { return boundary_rlp.ok() && routes_agree; }
};

ReplacementContractibility check_replacements_contractible(const SliceObject& p,
                                                           const Config& cfg);

}  // namespace kanforge
