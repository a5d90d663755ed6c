#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "kanforge/config.hpp"
#include "kanforge/lifting.hpp"
#include "kanforge/slice.hpp"
#include "kanforge/sset.hpp"
#include "kanforge/universe.hpp"

namespace kanforge {

/**
 * The on-disk interchange format: a JSON object tagged "kanforge/1" that
 * carries any of the payloads below.  serialize is deterministic (sorted
 * keys, dense ids, fixed indentation), and parse of a serialized document
 * returns equal payloads, so serialize after parse is the identity on
 * canonical text.  Malformed text is rejected with the JSON path (and for
 * syntax errors the byte offset) in the message; simplicial-identity
 * violations are reported through validate's issue list.
 */
struct Document {
    std::optional<Config> config;
    std::optional<SSetPtr> sset;
    std::optional<SimplicialMap> map;
    std::optional<SliceObject> slice;
    std::optional<WellOrderedMorphism> wom;
    std::optional<UniverseChart> chart;
    std::optional<LiftingProblem> problem;
};

Document parse_document(const std::string& text);
std::string serialize_document(const Document& doc);

// Per-payload converters, shared with report emission.  The from_json side
// threads the JSON path for error messages.
nlohmann::json config_json(const Config& cfg);
nlohmann::json sset_json(const SSetPtr& x);
nlohmann::json map_json(const SimplicialMap& f);
nlohmann::json slice_json(const SliceObject& s);
nlohmann::json wom_json(const WellOrderedMorphism& w);
nlohmann::json chart_json(const UniverseChart& c);
nlohmann::json problem_json(const LiftingProblem& p);

Config config_from_json(const nlohmann::json& j, const std::string& path);
SSetPtr sset_from_json(const nlohmann::json& j, const std::string& path);
SimplicialMap map_from_json(const nlohmann::json& j, const std::string& path);
SliceObject slice_from_json(const nlohmann::json& j, const std::string& path);
WellOrderedMorphism wom_from_json(const nlohmann::json& j, const std::string& path);
UniverseChart chart_from_json(const nlohmann::json& j, const std::string& path);
LiftingProblem problem_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace kanforge
