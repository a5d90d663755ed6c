#pragma once

#include <string>
#include <vector>

#include "kanforge/config.hpp"
#include "kanforge/lifting.hpp"
#include "kanforge/slice.hpp"
#include "kanforge/sset.hpp"

namespace kanforge {

/**
 * A morphism with a chosen linear order on each of its fibers:
 * orders[n][b] lists the total-space simplices over base simplex (n, b)
 * from first to last.  The orders make classification strict: base change
 * transports them on the nose, and the only order-preserving fiberwise
 * bijection between two of them is the exact comparison isomorphism.
 */
struct WellOrderedMorphism {
    SimplicialMap map;                                  // total -> base
    std::vector<std::vector<std::vector<int>>> orders;  // orders[n][base id]
};

/// Orders every fiber by ascending total-space id.
WellOrderedMorphism make_wom(SimplicialMap map);

/// make_wom with the cap enforced up front.
WellOrderedMorphism well_order(SimplicialMap map, const Config& cfg);

/// Checks that the orders partition each level of the total space into the
/// fibers of the map; throws InputError otherwise.
void validate_wom(const WellOrderedMorphism& wom);

/// Throws CapError at the first fiber larger than cfg.fiber_cap.
void check_small(const WellOrderedMorphism& wom, const Config& cfg);

/// Membership report for the universe of small well-ordered fibrations.
struct UniverseReport {
    bool well_formed = false;
    bool small = false;
    RlpReport fibration;
    std::string detail;
    bool ok() const { return well_formed && small && fibration.ok(); }
};

UniverseReport in_universe(const WellOrderedMorphism& wom, const Config& cfg);

/**
 * An n-simplex of the universe: the canonical well-ordered morphism over
 * Delta[n].  Canonical forms of order-isomorphic data are equal, so
 * equality of names is equality in the universe.  The cached fibration
 * status is bookkeeping and takes no part in equality.
 */
enum class KanFlag { Unchecked, Certified, Failed };

struct UniverseSimplex {
    int level = 0;
    WellOrderedMorphism wom;
    KanFlag kan_flag = KanFlag::Unchecked;

    bool operator==(const UniverseSimplex& other) const;
    bool operator!=(const UniverseSimplex& other) const { return !(*this == other); }
};

/// Number of points in the fiber over the top cell of the name.
int top_fiber_size(const UniverseSimplex& u);

/// Runs the bounded horn-filling check on the name's data and caches the
/// verdict in kan_flag.  An exhausted budget leaves the flag unchecked.
RlpReport certify_kan(UniverseSimplex& u, const Config& cfg);

struct CanonicalForm {
    WellOrderedMorphism wom;
    SimplicialMap relabel;  // original total -> canonical total
};

/// Relabels the total space so that ids at each level run through the
/// fibers in base-id order, respecting the fiber orders.  The result is a
/// fixpoint of canonicalize, and two well-ordered morphisms over the same
/// base have equal canonical forms exactly when they are order isomorphic.
CanonicalForm canonicalize(const WellOrderedMorphism& wom);

/// The canonical form packaged as a universe simplex; the base must be
/// Delta[level].
UniverseSimplex name_of(const WellOrderedMorphism& wom, int level);

/// Strict base change along t: the pullback, fiber orders transported
/// pointwise.
WellOrderedMorphism pullback_wom(const SimplicialMap& t, const WellOrderedMorphism& wom);

/// The name of the restriction of the morphism to base simplex (n, id):
/// pull back along its Yoneda map and take the canonical form.  This is
/// the classifying map into the universe, one simplex at a time.
UniverseSimplex classify(const WellOrderedMorphism& wom, int n, int id);

/// Action of a simplicial operator on universe simplices.  classify
/// commutes with it, which is simpliciality of the classifying map.
UniverseSimplex universe_apply(const UniverseSimplex& u, const MonotoneMap& op);

/// A simplex of the total space of the universal fibration: a name with a
/// chosen position in its top fiber.  Operators act compatibly with the
/// projection that forgets the point.
struct PointedUniverseSimplex {
    UniverseSimplex name;
    int point = 0;
};

PointedUniverseSimplex pointed_apply(const PointedUniverseSimplex& u, const MonotoneMap& op);

/// The classifying data of a morphism: one name per base simplex.
struct UniverseChart {
    SSetPtr base;
    std::vector<std::vector<UniverseSimplex>> names;
};

UniverseChart classify_all(const WellOrderedMorphism& wom);

/// Whether the names commute with every face and degeneracy of the base.
bool chart_consistent(const UniverseChart& chart);

/**
 * Rebuild a well-ordered morphism from a consistent chart: level n of the
 * total space consists of the pairs (base simplex, position in the top
 * fiber of its name).  This is the pullback of the universal fibration
 * along the chart; classify_all of the result returns the chart again.
 */
WellOrderedMorphism reconstruct(const UniverseChart& chart);

/// The order-matched fiberwise bijection between two well-ordered morphisms
/// over the same base; throws InternalError when it fails to be an exact
/// isomorphism over the base.
SimplicialMap wom_order_iso(const WellOrderedMorphism& from, const WellOrderedMorphism& to);

/**
 * Horn filling in the universe.  The input is a small well-ordered
 * fibration over Lambda^k[n]; the output extends it to Delta[n] so that
 * the restriction to the horn reproduces the input on the nose: equal
 * names on every horn simplex, and an exact order isomorphism onto the
 * part of the extension lying over the horn.  The construction retracts
 * the input onto its minimal model, trivializes that into fiber x horn,
 * extends the product part to fiber x simplex and the trivial-fibration
 * part by pushforward.
 */
struct HornExtension {
    WellOrderedMorphism extension;    // over Delta[n]
    SimplicialMap embed;              // input total -> extension total, over the inclusion
    RlpReport extension_fibration;
    RlpReport joyal_tf;               // report for the pushforward leg
    long long homotopy_searches = 0;  // spent while extracting the minimal model
};

HornExtension extend_horn_in_universe(const WellOrderedMorphism& input, int n, int k,
                                      const Config& cfg);

/// Variant taking a horn's worth of universe simplices: the chart is
/// reconstructed into the morphism it classifies and extended as above.
HornExtension extend_horn_in_universe(const UniverseChart& chart, int n, int k, const Config& cfg);

}  // namespace kanforge
