#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "kanforge/config.hpp"
#include "kanforge/lifting.hpp"
#include "kanforge/slice.hpp"
#include "kanforge/sset.hpp"

namespace kanforge {

// --- path components ----------------------------------------------------

/// Component label of every vertex: the least vertex id reachable through
/// edges in either direction.
std::vector<int> pi0_labels(const SSetPtr& x);
int pi0_count(const SSetPtr& x);

// --- cylinders and homotopies -------------------------------------------

struct Cylinder {
    Product prod;        // x times Delta[1]
    SimplicialMap at0;   // x -> cylinder, time 0 slice
    SimplicialMap at1;
};

Cylinder make_cylinder(const SSetPtr& x);

/// H o (id x Delta[1]) with f at one end: the constant homotopy of f.
SimplicialMap constant_homotopy(const Cylinder& cyl, const SimplicialMap& f);

/// Flags the simplices of the target hit by w.
std::vector<std::vector<char>> image_mask(const SimplicialMap& w);

/**
 * Partial prescription over a cylinder: pin a whole time slice, a constant
 * cylinder over part of the left factor, or single simplices, then pose the
 * lifting problem whose fillers are the homotopies extending the
 * prescription.  Overlapping pins must agree.
 */
struct CylinderPins {
    const Product* cyl;
    std::vector<std::vector<char>> mask;
    std::vector<std::vector<int>> val;

    explicit CylinderPins(const Product& c);
    void pin(int n, int id, int v);
    void pin_time_slice(const SimplicialMap& f, int time);
    /// Time-independent values on sub x Delta[1]; sub flags simplices of the
    /// left factor.
    void pin_constant_cylinder(const std::vector<std::vector<char>>& sub, const SimplicialMap& f);
    LiftingProblem problem(const SimplicialMap& right, const SimplicialMap& bottom) const;
};

/// A homotopy from `from` to `to`: a map off the cylinder restricting to
/// them at the two ends.
struct Homotopy {
    Cylinder cylinder;
    SimplicialMap map;  // cylinder.prod.set -> target
    SimplicialMap start() const;
    SimplicialMap end() const;
};

// --- deformation retractions --------------------------------------------

/**
 * A strong fiberwise deformation retraction exhibiting w : E1 -> E2 over a
 * base: a retraction over the base with r o w = id and a homotopy over the
 * base from the identity of E2 to w o r, constant on the image of w.
 */
struct DeformationRetraction {
    SimplicialMap retraction;
    Homotopy homotopy;
};

struct DrFound {
    DeformationRetraction dr;
    long long nodes = 0;
};

struct DrRefuted {
    long long nodes = 0;
    int retractions_tried = 0;
};

struct DrExhausted {
    long long budget = 0;
};

using DrResult = std::variant<DrFound, DrRefuted, DrExhausted>;

/// Complete search over retraction candidates and pinned homotopy squares.
/// Requires w to be a monomorphism over the shared base.
DrResult find_deformation_retraction(const SimplicialMap& w, const SliceObject& e1,
                                     const SliceObject& e2, const Config& cfg);

/// Re-checks every equation of a claimed certificate.
bool verify_deformation_retraction(const SimplicialMap& w, const SliceObject& e1,
                                   const SliceObject& e2, const DeformationRetraction& dr);

/// Fiberwise homotopy rel boundary between two simplices of the total space
/// of q that share every face and the same base simplex.
LiftResult fiber_homotopy_rel_boundary(const SliceObject& q, int level, int from_id,
                                       int to_id, long long budget);

// --- weak equivalence verdicts ------------------------------------------

enum class Tri { Yes, No, Unknown };

enum class WeqEvidence {
    None,
    Isomorphism,
    TrivialFibration,
    DeformationRetract,
    HomotopyEquivalence,
    Fiberwise,
    Pi0Obstruction,
};

/// A two-sided homotopy inverse over the base.  Each homotopy joins an
/// identity with the corresponding composite; the flag records whether the
/// identity sits at time 0.
struct HomotopyEquivalence {
    SimplicialMap inverse;  // target -> source, over the base
    Homotopy src_homotopy;  // joins id and inverse o w
    bool src_forward = true;
    Homotopy dst_homotopy;  // joins id and w o inverse
    bool dst_forward = true;
};

struct Pi0Obstruction {
    int source_components = 0;
    int target_components = 0;
    int base_vertex = -1;  // fiber location when the obstruction is fiberwise
};

/**
 * Tri-state verdict with machine-checkable evidence.  Yes carries an
 * isomorphism inverse, a boundary-lifting report, a deformation retraction,
 * or a full set of fiber verdicts; No carries a component count obstruction.
 * Unknown reports what was tried and whether budgets interfered.
 */
struct WeqVerdict {
    Tri verdict = Tri::Unknown;
    WeqEvidence evidence = WeqEvidence::None;
    std::string reason;
    std::optional<SimplicialMap> iso_inverse;
    std::optional<RlpReport> tf_report;
    std::optional<DeformationRetraction> retraction;
    std::optional<HomotopyEquivalence> hequiv;
    std::optional<Pi0Obstruction> pi0;
    std::optional<RlpReport> fibration_src;  // fiberwise step precondition
    std::optional<RlpReport> fibration_dst;
    std::vector<int> fiber_vertices;
    std::vector<std::shared_ptr<WeqVerdict>> children;
    bool budget_limited = false;
};

/// Decision pipeline: isomorphism, bounded trivial fibration, mono with a
/// deformation retraction, homotopy inverse over the base, then fiberwise
/// reduction over one vertex per base component (when both sides are
/// bounded fibrations), closing with a path component comparison over the
/// point.
WeqVerdict is_weq(const SimplicialMap& w, const SliceObject& e1, const SliceObject& e2,
                  const Config& cfg);

/// Homotopy between u and v over the shared base (u at time 0); nullopt when
/// refuted, with `exhausted` flagging a budget stop.
std::optional<Homotopy> search_homotopy_over(const SliceObject& src, const SliceObject& dst,
                                             const SimplicialMap& u, const SimplicialMap& v,
                                             long long budget, bool& exhausted);

// --- factorization through the mapping cylinder -------------------------

enum class FactorKind {
    TrivialFibration,    // w itself lifts against boundaries
    TrivialCofibration,  // w mono with a deformation retraction
    Factored,            // through the mapping cylinder
};

struct WeqFactorization {
    FactorKind kind = FactorKind::Factored;
    std::optional<RlpReport> tf_report;             // TrivialFibration case
    std::optional<DeformationRetraction> dr;        // TrivialCofibration case
    // Factored case: w = collapse o into_cylinder
    std::optional<SliceObject> cylinder;            // over the base
    std::optional<SimplicialMap> into_cylinder;     // mono
    std::optional<SimplicialMap> collapse;
    std::optional<RlpReport> collapse_tf;           // certificate for collapse
    std::optional<DeformationRetraction> into_dr;   // certificate for into_cylinder
    std::string missing;                            // names an uncertified leg
};

WeqFactorization factor_weq(const SimplicialMap& w, const SliceObject& e1,
                            const SliceObject& e2, const Config& cfg);

// --- minimal model extraction -------------------------------------------

enum class QuillenStatus { Done, NoRetraction, Exhausted };

/**
 * Splits a fibration q as a trivial fibration onto a minimal sub-fibration:
 * the subcomplex keeps one simplex per fiberwise homotopy class rel
 * boundary, chosen deterministically by lowest level then lowest id, and a
 * searched deformation retraction provides the collapse.
 */
struct QuillenFactorization {
    QuillenStatus status = QuillenStatus::Done;
    std::string note;
    Subcomplex minimal;                         // inside the total space
    SliceObject minimal_over;                   // restriction of q
    std::optional<DeformationRetraction> dr;    // retraction Y -> minimal over the base
    std::optional<RlpReport> retraction_tf;
    std::optional<RlpReport> minimal_fibration;
    bool minimality_certified = false;
    long long homotopy_searches = 0;
};

QuillenFactorization quillen_factorize(const SliceObject& q, const Config& cfg);

// --- trivialization over simplices and horns ----------------------------

/**
 * Fiber transport trivialization of a minimal fibration whose base sits
 * inside a standard simplex (the full simplex or one of its horns): an exact
 * isomorphism onto the product of the basepoint fiber with the base, built
 * by lifting a two-stage contraction of the base onto the chosen vertex.
 */
struct Trivialization {
    Subcomplex fiber_in_total;  // simplices over the basepoint tower
    SSetPtr fiber;
    Product frame;              // fiber x base
    SliceObject product_over;   // projection onto the base
    SimplicialMap iso;          // total -> fiber x base, over the base
    SimplicialMap iso_inv;
};

Trivialization minimal_trivialize(const SliceObject& p0, const Subcomplex& base_in_simplex,
                                  int simplex_dim, int basepoint_value, const Config& cfg);

}  // namespace kanforge
