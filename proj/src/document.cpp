#include "kanforge/document.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kanforge {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw InputError("document error at " + (path.empty() ? "/" : path) + ": " + what);
}

const json& field(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "/" + key, "missing field");
    return *it;
}

int int_field(const json& j, const std::string& path, const std::string& key) {
    const json& v = field(j, path, key);
    if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
    return v.get<int>();
}

long long long_field(const json& j, const std::string& path, const std::string& key) {
    const json& v = field(j, path, key);
    if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
    return v.get<long long>();
}

const json& array_field(const json& j, const std::string& path, const std::string& key,
                        int expect = -1) {
    const json& v = field(j, path, key);
    if (!v.is_array()) fail(path + "/" + key, "expected an array");
    if (expect >= 0 && static_cast<int>(v.size()) != expect)
        fail(path + "/" + key, "expected " + std::to_string(expect) + " entries, found " +
                                   std::to_string(v.size()));
    return v;
}

std::vector<int> int_row(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    std::vector<int> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer())
            fail(path + "/" + std::to_string(i), "expected an integer");
        out.push_back(v[i].get<int>());
    }
    return out;
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) fail(path + "/" + it.key(), "unknown field");
    }
}

/// One operator table: rows[i][id] for the given operator letter, with the
/// missing-entry message naming the operator and the first absent simplex.
std::vector<std::vector<int>> operator_rows(const json& v, const std::string& path, char letter,
                                            int level, int rows, int row_len) {
    if (!v.is_array()) fail(path, "expected an array");
    if (static_cast<int>(v.size()) != rows)
        fail(path, "expected " + std::to_string(rows) + " operator rows, found " +
                       std::to_string(v.size()));
    std::vector<std::vector<int>> out(rows);
    for (int i = 0; i < rows; ++i) {
        out[i] = int_row(v[i], path + "/" + std::to_string(i));
        const std::string op = std::string(1, letter) + "_" + std::to_string(i) + " at level " +
                               std::to_string(level);
        if (static_cast<int>(out[i].size()) < row_len)
            fail(path + "/" + std::to_string(i),
                 "operator " + op + " lacks an entry for simplex " +
                     std::to_string(out[i].size()));
        if (static_cast<int>(out[i].size()) > row_len)
            fail(path + "/" + std::to_string(i),
                 "operator " + op + " has " + std::to_string(out[i].size()) +
                     " entries for " + std::to_string(row_len) + " simplices");
    }
    return out;
}

}  // namespace

// --- serialization -------------------------------------------------------

json config_json(const Config& cfg) {
    return json{{"fiber_cap", cfg.fiber_cap},
                {"max_dim", cfg.max_dim},
                {"rng_seed", cfg.rng_seed},
                {"search_budget", cfg.search_budget}};
}

json sset_json(const SSetPtr& x) {
    const SimplicialSetData& d = x->data();
    return json{{"degen", d.degen}, {"face", d.face}, {"max_dim", d.max_dim}, {"size", d.size}};
}

json map_json(const SimplicialMap& f) {
    return json{{"levels", f.levels()},
                {"source", sset_json(f.source())},
                {"target", sset_json(f.target())}};
}

json slice_json(const SliceObject& s) { return json{{"proj", map_json(s.proj)}}; }

json wom_json(const WellOrderedMorphism& w) {
    return json{{"map", map_json(w.map)}, {"orders", w.orders}};
}

json chart_json(const UniverseChart& c) {
    json names = json::array();
    for (const auto& level : c.names) {
        json row = json::array();
        for (const UniverseSimplex& u : level)
            row.push_back(json{{"level", u.level}, {"wom", wom_json(u.wom)}});
        names.push_back(std::move(row));
    }
    return json{{"base", sset_json(c.base)}, {"names", std::move(names)}};
}

json problem_json(const LiftingProblem& p) {
    return json{{"bottom", map_json(p.bottom)},
                {"left", map_json(p.left)},
                {"right", map_json(p.right)},
                {"top", map_json(p.top)}};
}

// --- parsing -------------------------------------------------------------

Config config_from_json(const json& j, const std::string& path) {
    reject_unknown(j, path, {"fiber_cap", "max_dim", "rng_seed", "search_budget"});
    Config cfg;
    cfg.fiber_cap = int_field(j, path, "fiber_cap");
    cfg.max_dim = int_field(j, path, "max_dim");
    cfg.rng_seed = static_cast<unsigned>(long_field(j, path, "rng_seed"));
    cfg.search_budget = long_field(j, path, "search_budget");
    cfg.validate();
    return cfg;
}

SSetPtr sset_from_json(const json& j, const std::string& path) {
    reject_unknown(j, path, {"degen", "face", "max_dim", "size"});
    SimplicialSetData d;
    d.max_dim = int_field(j, path, "max_dim");
    if (d.max_dim < 0) fail(path + "/max_dim", "must be nonnegative");
    const json& size = array_field(j, path, "size", d.max_dim + 1);
    d.size = int_row(size, path + "/size");
    for (int n = 0; n <= d.max_dim; ++n)
        if (d.size[n] < 0) fail(path + "/size/" + std::to_string(n), "must be nonnegative");

    const json& face = array_field(j, path, "face", d.max_dim + 1);
    d.face.resize(d.max_dim + 1);
    if (!face[0].is_array() || !face[0].empty())
        fail(path + "/face/0", "level 0 has no face operators; expected an empty array");
    for (int n = 1; n <= d.max_dim; ++n)
        d.face[n] = operator_rows(face[n], path + "/face/" + std::to_string(n), 'd', n, n + 1,
                                  d.size[n]);

    const json& degen = array_field(j, path, "degen", d.max_dim + 1);
    d.degen.resize(d.max_dim + 1);
    if (!degen[d.max_dim].is_array() || !degen[d.max_dim].empty())
        fail(path + "/degen/" + std::to_string(d.max_dim),
             "the top level has no degeneracy operators; expected an empty array");
    for (int n = 0; n < d.max_dim; ++n)
        d.degen[n] = operator_rows(degen[n], path + "/degen/" + std::to_string(n), 's', n, n + 1,
                                   d.size[n]);

    ValidationReport rep = validate(d);
    if (!rep.ok()) fail(path, rep.summary());
    return SimplicialSet::build_unchecked(std::move(d));
}

SimplicialMap map_from_json(const json& j, const std::string& path) {
    reject_unknown(j, path, {"levels", "source", "target"});
    SSetPtr source = sset_from_json(field(j, path, "source"), path + "/source");
    SSetPtr target = sset_from_json(field(j, path, "target"), path + "/target");
    const json& levels = array_field(j, path, "levels", source->max_dim() + 1);
    std::vector<std::vector<int>> lv(levels.size());
    for (std::size_t n = 0; n < levels.size(); ++n)
        lv[n] = int_row(levels[n], path + "/levels/" + std::to_string(n));
    try {
        return SimplicialMap(std::move(source), std::move(target), std::move(lv));
    } catch (const InputError& e) {
        fail(path, e.what());
    }
}

SliceObject slice_from_json(const json& j, const std::string& path) {
    reject_unknown(j, path, {"proj"});
    return make_slice(map_from_json(field(j, path, "proj"), path + "/proj"));
}

WellOrderedMorphism wom_from_json(const json& j, const std::string& path) {
    reject_unknown(j, path, {"map", "orders"});
    WellOrderedMorphism w;
    w.map = map_from_json(field(j, path, "map"), path + "/map");
    const json& orders = array_field(j, path, "orders", w.map.source()->max_dim() + 1);
    w.orders.resize(orders.size());
    for (std::size_t n = 0; n < orders.size(); ++n) {
        const std::string level_path = path + "/orders/" + std::to_string(n);
        if (!orders[n].is_array() ||
            static_cast<int>(orders[n].size()) != w.map.target()->size(static_cast<int>(n)))
            fail(level_path, "expected one fiber per base simplex");
        w.orders[n].resize(orders[n].size());
        for (std::size_t b = 0; b < orders[n].size(); ++b)
            w.orders[n][b] = int_row(orders[n][b], level_path + "/" + std::to_string(b));
    }
    try {
        validate_wom(w);
    } catch (const InputError& e) {
        fail(path + "/orders", e.what());
    }
    return w;
}

UniverseChart chart_from_json(const json& j, const std::string& path) {
    reject_unknown(j, path, {"base", "names"});
    UniverseChart c;
    c.base = sset_from_json(field(j, path, "base"), path + "/base");
    const json& names = array_field(j, path, "names", c.base->max_dim() + 1);
    c.names.resize(names.size());
    for (std::size_t n = 0; n < names.size(); ++n) {
        const std::string level_path = path + "/names/" + std::to_string(n);
        if (!names[n].is_array() ||
            static_cast<int>(names[n].size()) != c.base->size(static_cast<int>(n)))
            fail(level_path, "expected one name per base simplex");
        c.names[n].reserve(names[n].size());
        for (std::size_t b = 0; b < names[n].size(); ++b) {
            const std::string name_path = level_path + "/" + std::to_string(b);
            const json& name = names[n][b];
            reject_unknown(name, name_path, {"level", "wom"});
            UniverseSimplex u;
            u.level = int_field(name, name_path, "level");
            u.wom = wom_from_json(field(name, name_path, "wom"), name_path + "/wom");
            try {
                UniverseSimplex canonical = name_of(u.wom, u.level);
                if (canonical != u) fail(name_path, "name is not in canonical form");
            } catch (const InputError& e) {
                fail(name_path, e.what());
            }
            c.names[n].push_back(std::move(u));
        }
    }
    return c;
}

LiftingProblem problem_from_json(const json& j, const std::string& path) {
    reject_unknown(j, path, {"bottom", "left", "right", "top"});
    LiftingProblem p;
    p.left = map_from_json(field(j, path, "left"), path + "/left");
    p.top = map_from_json(field(j, path, "top"), path + "/top");
    p.right = map_from_json(field(j, path, "right"), path + "/right");
    p.bottom = map_from_json(field(j, path, "bottom"), path + "/bottom");
    if (*p.top.source() != *p.left.source())
        fail(path, "the top and left legs must share their source");
    if (*p.top.target() != *p.right.source())
        fail(path, "the top leg must land in the source of the right leg");
    if (*p.bottom.source() != *p.left.target())
        fail(path, "the bottom leg must start at the target of the left leg");
    if (*p.bottom.target() != *p.right.target())
        fail(path, "the bottom and right legs must share their target");
    if (!maps_equal_pointwise(compose(p.right, p.top), compose(p.bottom, p.left)))
        fail(path, "the square does not commute");
    return p;
}

// --- documents -----------------------------------------------------------

std::string serialize_document(const Document& doc) {
    json j;
    j["schema"] = "kanforge/1";
    if (doc.config) j["config"] = config_json(*doc.config);
    if (doc.sset) j["sset"] = sset_json(*doc.sset);
    if (doc.map) j["map"] = map_json(*doc.map);
    if (doc.slice) j["slice"] = slice_json(*doc.slice);
    if (doc.wom) j["wom"] = wom_json(*doc.wom);
    if (doc.chart) j["chart"] = chart_json(*doc.chart);
    if (doc.problem) j["problem"] = problem_json(*doc.problem);
    return j.dump(2) + "\n";
}

Document parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("document syntax error at byte " + std::to_string(e.byte) + ": " +
                         e.what());
    }
    if (!j.is_object()) fail("/", "expected an object");
    reject_unknown(j, "", {"schema", "config", "sset", "map", "slice", "wom", "chart", "problem"});
    const json& schema = field(j, "", "schema");
    if (!schema.is_string() || schema.get<std::string>() != "kanforge/1")
        fail("/schema", "expected \"kanforge/1\"");

    Document doc;
    if (j.contains("config")) doc.config = config_from_json(j["config"], "/config");
    if (j.contains("sset")) doc.sset = sset_from_json(j["sset"], "/sset");
    if (j.contains("map")) doc.map = map_from_json(j["map"], "/map");
    if (j.contains("slice")) doc.slice = slice_from_json(j["slice"], "/slice");
    if (j.contains("wom")) doc.wom = wom_from_json(j["wom"], "/wom");
    if (j.contains("chart")) doc.chart = chart_from_json(j["chart"], "/chart");
    if (j.contains("problem")) doc.problem = problem_from_json(j["problem"], "/problem");
    return doc;
}

}  // namespace kanforge
