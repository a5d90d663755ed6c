#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kanforge/document.hpp"
#include "kanforge/homotopy.hpp"
#include "kanforge/lifting.hpp"
#include "kanforge/oracle.hpp"
#include "kanforge/slice.hpp"
#include "kanforge/sset.hpp"
#include "kanforge/univalence.hpp"
#include "kanforge/universe.hpp"

using namespace kanforge;
using nlohmann::json;

namespace {

// Exit codes: 0 certified success, 1 certified negative, 2 unknown or out of
// budget, 3 rejected input.
constexpr int kSuccess = 0;
constexpr int kNegative = 1;
constexpr int kUnknown = 2;
constexpr int kBadInput = 3;

struct Output {
    bool machine = false;
    Config cfg;

    /// Machine reports carry the configuration so each certificate is
    /// reproducible from the report alone.
    void emit(const json& report, const std::string& human,
              const Document& payload = Document{}) const {
        if (!machine) {
            std::cout << human << "\n";
            return;
        }
        json doc = json::parse(serialize_document(payload));
        doc["config"] = config_json(cfg);
        doc["report"] = report;
        std::cout << doc.dump(2) << "\n";
    }
};

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Document load(const std::string& path) { return parse_document(slurp(path)); }

const SSetPtr& need_sset(const Document& doc, const std::string& path) {
    if (!doc.sset) throw InputError(path + ": expected a document with an \"sset\" payload");
    return *doc.sset;
}

const SimplicialMap& need_map(const Document& doc, const std::string& path) {
    if (!doc.map) throw InputError(path + ": expected a document with a \"map\" payload");
    return *doc.map;
}

const SliceObject& need_slice(const Document& doc, const std::string& path) {
    if (!doc.slice) throw InputError(path + ": expected a document with a \"slice\" payload");
    return *doc.slice;
}

const WellOrderedMorphism& need_wom(const Document& doc, const std::string& path) {
    if (!doc.wom) throw InputError(path + ": expected a document with a \"wom\" payload");
    return *doc.wom;
}

const LiftingProblem& need_problem(const Document& doc, const std::string& path) {
    if (!doc.problem) throw InputError(path + ": expected a document with a \"problem\" payload");
    return *doc.problem;
}

const char* rlp_status_name(RlpStatus s) {
    switch (s) {
        case RlpStatus::HasLifts: return "has_lifts";
        case RlpStatus::FailsLift: return "fails_lift";
        default: return "exhausted";
    }
}

json rlp_json(const RlpReport& r) {
    json failures = json::array();
    for (std::size_t i = 0; i < r.failures.size(); ++i) {
        const RlpCounterexample& c = r.failures[i];
        json f{{"k", c.k}, {"n", c.n}};
        if (i == 0) {  // full witness square for the first failure
            f["bottom"] = map_json(c.bottom);
            f["top"] = map_json(c.top);
        }
        failures.push_back(std::move(f));
    }
    return json{{"failures", std::move(failures)},
                {"nodes", r.nodes},
                {"squares_checked", r.squares_checked},
                {"status", rlp_status_name(r.status)}};
}

int rlp_exit(const RlpReport& r) {
    if (r.ok()) return kSuccess;
    return r.status == RlpStatus::FailsLift ? kNegative : kUnknown;
}

std::string rlp_human(const RlpReport& r, const std::string& yes, const std::string& no) {
    if (r.ok()) return yes + " (" + std::to_string(r.squares_checked) + " squares)";
    if (r.status == RlpStatus::Exhausted) return "undecided: search budget exhausted";
    const RlpCounterexample& c = r.failures.front();
    std::string shape = c.k >= 0 ? "horn (" + std::to_string(c.n) + "," + std::to_string(c.k) + ")"
                                 : "boundary of dimension " + std::to_string(c.n);
    return no + ": unfillable square against the " + shape;
}

const char* tri_name(Tri t) {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        default: return "unknown";
    }
}

json weq_json(const WeqVerdict& v) {
    json out{{"budget_limited", v.budget_limited},
             {"reason", v.reason},
             {"verdict", tri_name(v.verdict)}};
    if (v.pi0)
        out["pi0"] = json{{"source_components", v.pi0->source_components},
                          {"target_components", v.pi0->target_components}};
    return out;
}

/// Settled configuration: document blocks supply defaults, explicit flags win.
struct ConfigFlags {
    Config flags;
    bool max_dim_set = false;
    bool fiber_cap_set = false;
    bool budget_set = false;
    bool seed_set = false;

    Config settle(const std::vector<const Document*>& docs) const {
        Config cfg;
        for (const Document* d : docs)
            if (d->config) {
                cfg = *d->config;
                break;
            }
        if (max_dim_set) cfg.max_dim = flags.max_dim;
        if (fiber_cap_set) cfg.fiber_cap = flags.fiber_cap;
        if (budget_set) cfg.search_budget = flags.search_budget;
        if (seed_set) cfg.rng_seed = flags.rng_seed;
        cfg.validate();
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operations on bounded simplicial sets with verifiable certificates"};
    app.require_subcommand(1);
    app.fallthrough();

    ConfigFlags cf;
    std::string format = "human";
    CLI::Option* opt_md = app.add_option("--max-dim", cf.flags.max_dim, "dimension bound")
                              ->check(CLI::NonNegativeNumber);
    CLI::Option* opt_fc =
        app.add_option("--fiber-cap", cf.flags.fiber_cap, "largest admitted fiber");
    CLI::Option* opt_bu = app.add_option("--budget", cf.flags.search_budget, "search node budget");
    CLI::Option* opt_se = app.add_option("--seed", cf.flags.rng_seed, "random seed");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"human", "machine"}));

    // Per-command state: each subcommand fills `run` with its body.
    std::function<int(Output&)> run;
    std::vector<std::string> paths;

    auto takes = [&](CLI::App* cmd, int n, const char* names) {
        cmd->fallthrough();
        cmd->add_option(names, paths)->expected(n);
        return cmd;
    };

    // --- validate ---------------------------------------------------------
    CLI::App* validate_cmd =
        takes(app.add_subcommand("validate", "check a document's simplicial identities"), 1,
              "file");
    validate_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            if (!doc.sset) {
                // Other payloads validate during parsing; reaching here means
                // the document is well formed.
                out.emit(json{{"issues", json::array()}, {"ok", true}}, "valid");
                return kSuccess;
            }
            json issues = json::array();
            ValidationReport rep = validate((*doc.sset)->data());
            for (const ValidationIssue& is : rep.issues)
                issues.push_back(json{{"detail", is.detail},
                                      {"id", is.id},
                                      {"identity", is.identity},
                                      {"level", is.level}});
            out.emit(json{{"issues", std::move(issues)}, {"ok", rep.ok()}},
                     rep.ok() ? "valid" : rep.summary());
            return rep.ok() ? kSuccess : kNegative;
        };
    });

    // --- lifting-property checks -----------------------------------------
    CLI::App* is_kan_cmd =
        takes(app.add_subcommand("is-kan", "horn filling in a simplicial set"), 1, "file");
    is_kan_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            RlpReport r = is_kan(need_sset(doc, paths[0]), out.cfg);
            out.emit(rlp_json(r), rlp_human(r, "Kan complex", "not Kan within bounds"));
            return rlp_exit(r);
        };
    });

    CLI::App* is_fib_cmd =
        takes(app.add_subcommand("is-fibration", "right lifting against horns"), 1, "file");
    is_fib_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            RlpReport r = is_fibration(need_map(doc, paths[0]), out.cfg);
            out.emit(rlp_json(r), rlp_human(r, "fibration", "not a fibration within bounds"));
            return rlp_exit(r);
        };
    });

    CLI::App* is_tf_cmd = takes(
        app.add_subcommand("is-trivial-fibration", "right lifting against boundaries"), 1, "file");
    is_tf_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            RlpReport r = is_trivial_fibration(need_map(doc, paths[0]), out.cfg);
            out.emit(rlp_json(r),
                     rlp_human(r, "trivial fibration", "not a trivial fibration within bounds"));
            return rlp_exit(r);
        };
    });

    // --- lift -------------------------------------------------------------
    CLI::App* lift_cmd =
        takes(app.add_subcommand("lift", "search a diagonal filler for a square"), 1, "file");
    lift_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            LiftResult r = solve_lifting(need_problem(doc, paths[0]), out.cfg.search_budget);
            if (const Filler* f = std::get_if<Filler>(&r)) {
                Document payload;
                payload.map = f->diagonal;
                out.emit(json{{"found", true}, {"nodes", f->nodes}},
                         "filler found (" + std::to_string(f->nodes) + " nodes)", payload);
                return kSuccess;
            }
            if (const Refuted* n = std::get_if<Refuted>(&r)) {
                out.emit(json{{"found", false}, {"nodes", n->nodes}},
                         "refuted: no filler exists");
                return kNegative;
            }
            out.emit(json{{"found", false}, {"exhausted", true}},
                     "undecided: search budget exhausted");
            return kUnknown;
        };
    });

    // --- slice constructions ----------------------------------------------
    CLI::App* hom_cmd = takes(
        app.add_subcommand("hom", "internal hom of two slices over a shared base"), 2,
        "files");
    hom_cmd->callback([&] {
        run = [&](Output& out) {
            Document d1 = load(paths[0]), d2 = load(paths[1]);
            out.cfg = cf.settle({&d1, &d2});
            InternalHom h =
                internal_hom(need_slice(d1, paths[0]), need_slice(d2, paths[1]), out.cfg);
            Document payload;
            payload.slice = h.object;
            json sizes = json::array();
            for (int n = 0; n <= h.object.total->max_dim(); ++n)
                sizes.push_back(h.object.total->size(n));
            out.emit(json{{"sizes", std::move(sizes)}},
                     "internal hom built: " + std::to_string(h.object.total->total_size()) +
                         " simplices",
                     payload);
            return kSuccess;
        };
    });

    CLI::App* push_cmd = takes(
        app.add_subcommand("pushforward", "right adjoint to restriction along a mono"), 2,
        "files");
    push_cmd->callback([&] {
        run = [&](Output& out) {
            Document d1 = load(paths[0]), d2 = load(paths[1]);
            out.cfg = cf.settle({&d1, &d2});
            Pushforward p =
                pushforward(need_map(d1, paths[0]), need_slice(d2, paths[1]), out.cfg);
            Document payload;
            payload.slice = p.object;
            out.emit(json{{"total_size", p.object.total->total_size()}},
                     "pushforward built: " + std::to_string(p.object.total->total_size()) +
                         " simplices",
                     payload);
            return kSuccess;
        };
    });

    CLI::App* joyal_cmd = takes(
        app.add_subcommand("joyal-extend", "extend a trivial fibration along a mono"), 2,
        "files");
    joyal_cmd->callback([&] {
        run = [&](Output& out) {
            Document d1 = load(paths[0]), d2 = load(paths[1]);
            out.cfg = cf.settle({&d1, &d2});
            JoyalExtension ex =
                joyal_extend(need_map(d1, paths[0]), need_slice(d2, paths[1]), out.cfg);
            Document payload;
            payload.slice = ex.pushed.object;
            out.emit(json{{"counit_iso", ex.counit.is_iso()},
                          {"extended_tf", rlp_json(ex.extended_tf)}},
                     rlp_human(ex.extended_tf, "extension is a trivial fibration",
                               "extension fails boundary lifting"),
                     payload);
            return rlp_exit(ex.extended_tf);
        };
    });

    // --- factorization ----------------------------------------------------
    CLI::App* factor_cmd = takes(
        app.add_subcommand("factorize", "split an equivalence into certified legs"), 3,
        "files");
    factor_cmd->callback([&] {
        run = [&](Output& out) {
            Document dw = load(paths[0]), d1 = load(paths[1]), d2 = load(paths[2]);
            out.cfg = cf.settle({&dw, &d1, &d2});
            WeqFactorization f = factor_weq(need_map(dw, paths[0]), need_slice(d1, paths[1]),
                                            need_slice(d2, paths[2]), out.cfg);
            const char* kind = f.kind == FactorKind::TrivialFibration ? "trivial_fibration"
                               : f.kind == FactorKind::TrivialCofibration ? "trivial_cofibration"
                                                                          : "factored";
            bool certified = f.missing.empty();
            out.emit(json{{"certified", certified}, {"kind", kind}, {"missing", f.missing}},
                     certified ? std::string("factored through the ") + kind + " route"
                               : "factorization uncertified: " + f.missing);
            return certified ? kSuccess : kUnknown;
        };
    });

    int mt_dim = 1, mt_horn = -1, mt_basepoint = 0;
    CLI::App* mt_cmd = takes(
        app.add_subcommand("minimal-trivialize",
                           "trivialize a minimal fibration over a simplex or horn"),
        1, "e");
    mt_cmd->add_option("--dim", mt_dim, "dimension of the ambient simplex")->required();
    mt_cmd->add_option("--horn", mt_horn, "horn index; omit for the full simplex");
    mt_cmd->add_option("--basepoint", mt_basepoint, "vertex to contract onto");
    mt_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            const SliceObject& p0 = need_slice(doc, paths[0]);
            int nd = out.cfg.max_dim;
            Subcomplex base_in = mt_horn >= 0 ? horn(mt_dim, mt_horn, nd)
                                              : subcomplex(standard_simplex(mt_dim, nd),
                                                           [&] {
                                                               SSetPtr s =
                                                                   standard_simplex(mt_dim, nd);
                                                               std::vector<std::vector<char>> keep(
                                                                   nd + 1);
                                                               for (int n = 0; n <= nd; ++n)
                                                                   keep[n].assign(s->size(n), 1);
                                                               return keep;
                                                           }());
            if (*p0.base() != *base_in.set)
                throw InputError("the slice base must equal the chosen simplex or horn");
            Trivialization t =
                minimal_trivialize(p0, base_in, mt_dim, mt_basepoint, out.cfg);
            Document payload;
            payload.map = t.iso;
            out.emit(json{{"fiber_size", t.fiber->size(0)},
                          {"iso", t.iso.is_iso()}},
                     "trivialized onto fiber x base (fiber has " +
                         std::to_string(t.fiber->size(0)) + " vertices)",
                     payload);
            return kSuccess;
        };
    });

    // --- universe ---------------------------------------------------------
    CLI::App* classify_cmd = takes(
        app.add_subcommand("classify", "name each base simplex's restriction"), 1, "file");
    classify_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            const WellOrderedMorphism& w = need_wom(doc, paths[0]);
            UniverseReport membership = in_universe(w, out.cfg);
            UniverseChart chart = classify_all(w);
            Document payload;
            payload.chart = chart;
            out.emit(json{{"fibration", rlp_json(membership.fibration)},
                          {"in_universe", membership.ok()},
                          {"small", membership.small},
                          {"well_formed", membership.well_formed}},
                     membership.ok() ? "classified; the morphism is in the universe"
                                     : "classified; membership fails: " + membership.detail,
                     payload);
            return membership.ok() ? kSuccess : rlp_exit(membership.fibration) == kUnknown
                                                    ? kUnknown
                                                    : kNegative;
        };
    });

    CLI::App* recon_cmd =
        takes(app.add_subcommand("reconstruct", "rebuild a morphism from its chart"), 1, "file");
    recon_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            if (!doc.chart)
                throw InputError(paths[0] + ": expected a document with a \"chart\" payload");
            if (!chart_consistent(*doc.chart))
                throw InputError("the chart does not commute with faces and degeneracies");
            WellOrderedMorphism w = reconstruct(*doc.chart);
            Document payload;
            payload.wom = w;
            out.emit(json{{"total_size", w.map.source()->total_size()}},
                     "reconstructed a total space with " +
                         std::to_string(w.map.source()->total_size()) + " simplices",
                     payload);
            return kSuccess;
        };
    });

    int horn_n = 1, horn_k = 0;
    CLI::App* horn_cmd = takes(
        app.add_subcommand("extend-horn", "fill a horn of small fibrations in the universe"), 1,
        "file");
    horn_cmd->add_option("--n", horn_n, "horn dimension")->required();
    horn_cmd->add_option("--k", horn_k, "horn index")->required();
    horn_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            HornExtension ext =
                doc.wom ? extend_horn_in_universe(*doc.wom, horn_n, horn_k, out.cfg)
                        : extend_horn_in_universe(
                              [&]() -> const UniverseChart& {
                                  if (!doc.chart)
                                      throw InputError(paths[0] +
                                                       ": expected a \"wom\" or \"chart\" payload");
                                  return *doc.chart;
                              }(),
                              horn_n, horn_k, out.cfg);
            Document payload;
            payload.wom = ext.extension;
            bool ok = ext.extension_fibration.ok() && ext.joyal_tf.ok();
            out.emit(json{{"extension_fibration", rlp_json(ext.extension_fibration)},
                          {"joyal_tf", rlp_json(ext.joyal_tf)}},
                     ok ? "horn filled; the extension is a certified fibration"
                        : "horn filled; certification incomplete",
                     payload);
            if (ok) return kSuccess;
            return ext.extension_fibration.status == RlpStatus::Exhausted ||
                           ext.joyal_tf.status == RlpStatus::Exhausted
                       ? kUnknown
                       : kNegative;
        };
    });

    // --- equivalence objects and univalence -------------------------------
    CLI::App* eq_cmd = takes(
        app.add_subcommand("eq", "subobject of the internal hom carrying equivalences"), 2,
        "files");
    eq_cmd->callback([&] {
        run = [&](Output& out) {
            Document d1 = load(paths[0]), d2 = load(paths[1]);
            out.cfg = cf.settle({&d1, &d2});
            EqObject eq = eq_object(need_slice(d1, paths[0]), need_slice(d2, paths[1]), out.cfg);
            Document payload;
            payload.slice = eq.carrier;
            json sizes = json::array();
            for (int n = 0; n <= eq.carrier.total->max_dim(); ++n)
                sizes.push_back(eq.carrier.total->size(n));
            out.emit(json{{"hom_size", eq.hom.object.total->total_size()},
                          {"sizes", std::move(sizes)}},
                     "equivalence object built: " +
                         std::to_string(eq.carrier.total->total_size()) + " of " +
                         std::to_string(eq.hom.object.total->total_size()) + " hom simplices",
                     payload);
            return kSuccess;
        };
    });

    CLI::App* delta_cmd = takes(
        app.add_subcommand("delta", "diagonal of a slice into its self-equivalences"), 1, "e");
    delta_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            EqSelf es = eq_self(need_slice(doc, paths[0]), out.cfg);
            Document payload;
            payload.map = es.delta;
            out.emit(json{{"carrier_size", es.eq.carrier.total->total_size()},
                          {"mono", es.delta.is_mono()}},
                     "diagonal built into " + std::to_string(es.eq.carrier.total->total_size()) +
                         " self-equivalence simplices",
                     payload);
            return kSuccess;
        };
    });

    CLI::App* univ_cmd =
        takes(app.add_subcommand("univalent", "decide univalence within bounds"), 1, "e");
    univ_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            UnivalenceVerdict v = is_univalent(need_slice(doc, paths[0]), out.cfg);
            const char* status = v.status == UnivalenceStatus::Univalent ? "univalent"
                                 : v.status == UnivalenceStatus::NotUnivalent ? "not_univalent"
                                                                              : "unknown";
            json rep{{"budget_limited", v.budget_limited},
                     {"delta", weq_json(v.delta_verdict)},
                     {"reason", v.reason},
                     {"status", status}};
            if (v.pi0)
                rep["pi0"] = json{{"source_components", v.pi0->source_components},
                                  {"target_components", v.pi0->target_components}};
            std::string human = std::string(status) + ": " + v.reason;
            if (v.pi0)
                human += " (" + std::to_string(v.pi0->source_components) + " vs " +
                         std::to_string(v.pi0->target_components) + " components)";
            out.emit(rep, human);
            if (v.status == UnivalenceStatus::Univalent) return kSuccess;
            return v.status == UnivalenceStatus::NotUnivalent ? kNegative : kUnknown;
        };
    });

    CLI::App* ulift_cmd = takes(
        app.add_subcommand("univalent-lift", "extend an equivalence of bundles along a mono"), 6,
        "files");
    ulift_cmd->callback([&] {
        run = [&](Output& out) {
            Document di = load(paths[0]), dw = load(paths[1]), d1 = load(paths[2]),
                     d2 = load(paths[3]), db = load(paths[4]), dp = load(paths[5]);
            out.cfg = cf.settle({&di, &dw, &d1, &d2, &db, &dp});
            UnivalentLift lift = univalent_lift(
                need_map(di, paths[0]), need_map(dw, paths[1]), need_slice(d1, paths[2]),
                need_slice(d2, paths[3]), need_slice(db, paths[4]), need_map(dp, paths[5]),
                out.cfg);
            const char* route = lift.route == FactorKind::TrivialFibration ? "trivial_fibration"
                                : lift.route == FactorKind::TrivialCofibration
                                    ? "trivial_cofibration"
                                    : "factored";
            Document payload;
            payload.slice = lift.ebar1;
            payload.map = lift.wbar;
            payload.wom = lift.ebar1_wom;
            out.emit(json{{"fibration", rlp_json(lift.ebar1_fibration)},
                          {"max_fiber", lift.max_fiber},
                          {"restriction_iso", lift.restriction_iso.is_iso()},
                          {"route", route},
                          {"small", lift.small}},
                     "extension built over the larger base (route " + std::string(route) +
                         ", largest fiber " + std::to_string(lift.max_fiber) + ")",
                     payload);
            return kSuccess;
        };
    });

    // --- small replacements ----------------------------------------------
    int rl_level = 0;
    CLI::App* rl_cmd = takes(
        app.add_subcommand("replacement-level",
                           "enumerate capped equivalent replacements over a frame"),
        1, "p");
    rl_cmd->add_option("--level", rl_level, "frame dimension")->required();
    rl_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            ReplacementLevel lv = replacement_level(need_slice(doc, paths[0]), rl_level, out.cfg);
            out.emit(json{{"elements", lv.elements.size()}, {"level", lv.level}},
                     std::to_string(lv.elements.size()) + " replacements at level " +
                         std::to_string(lv.level));
            return kSuccess;
        };
    });

    CLI::App* rc_cmd = takes(
        app.add_subcommand("replacement-contractible",
                           "boundary filling in the complex of replacements, both routes"),
        1, "p");
    rc_cmd->callback([&] {
        run = [&](Output& out) {
            Document doc = load(paths[0]);
            out.cfg = cf.settle({&doc});
            ReplacementContractibility rc =
                check_replacements_contractible(need_slice(doc, paths[0]), out.cfg);
            json sizes = json::array();
            for (int n = 0; n <= rc.complex->max_dim(); ++n) sizes.push_back(rc.complex->size(n));
            out.emit(json{{"boundary_rlp", rlp_json(rc.boundary_rlp)},
                          {"contractible", rc.contractible()},
                          {"instances", rc.instances},
                          {"routes_agree", rc.routes_agree},
                          {"sizes", std::move(sizes)}},
                     rc.contractible()
                         ? "contractible within bounds; both routes agree on " +
                               std::to_string(rc.instances) + " boundary instances"
                         : "contractibility fails within bounds");
            return rc.contractible() ? kSuccess
                   : rc.boundary_rlp.status == RlpStatus::Exhausted ? kUnknown
                                                                    : kNegative;
        };
    });

    // --- oracles ----------------------------------------------------------
    std::string oracle_kind;
    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle", "independent brute-force checks backing the derived examples");
    oracle_cmd->add_option("kind", oracle_kind, "count-maps | hom-vertices | adjunction-bijection")
        ->required()
        ->check(CLI::IsMember({"count-maps", "hom-vertices", "adjunction-bijection"}));
    oracle_cmd->add_option("files", paths, "input documents")->expected(2, 3);
    oracle_cmd->callback([&] {
        run = [&](Output& out) {
            if (oracle_kind == "count-maps" || oracle_kind == "hom-vertices") {
                if (paths.size() != 2)
                    throw InputError("oracle " + oracle_kind + " expects two documents");
                Document d1 = load(paths[0]), d2 = load(paths[1]);
                out.cfg = cf.settle({&d1, &d2});
                long long count = oracle::count_maps(need_sset(d1, paths[0]), need_sset(d2, paths[1]),
                                             out.cfg.search_budget);
                out.emit(json{{"count", count}, {"kind", oracle_kind}},
                         oracle_kind + ": " + std::to_string(count));
                return kSuccess;
            }
            if (paths.size() != 3)
                throw InputError("oracle adjunction-bijection expects mono, p, q documents");
            Document di = load(paths[0]), dp = load(paths[1]), dq = load(paths[2]);
            out.cfg = cf.settle({&di, &dp, &dq});
            const SimplicialMap& i = need_map(di, paths[0]);
            const SliceObject& p = need_slice(dp, paths[1]);
            const SliceObject& q = need_slice(dq, paths[2]);
            if (!i.is_mono()) throw InputError("oracle: the first document must be a mono");
            // Left side through the library's adjoint, right side through
            // storage-level pullback; the counts agree exactly when the
            // transposition is a bijection.
            Pushforward pushed = pushforward(i, q, out.cfg);
            long long lhs =
                oracle::count_maps_over(p.total, pushed.object.total, p.proj, pushed.object.proj,
                                out.cfg.search_budget);
            PullbackSet restricted = pullback(i, p.proj);
            long long rhs = oracle::count_maps_over(restricted.set, q.total, restricted.proj_left,
                                            q.proj, out.cfg.search_budget);
            bool agree = lhs == rhs;
            out.emit(json{{"agree", agree}, {"into_pushforward", lhs}, {"restricted_to", rhs}},
                     "adjunction-bijection: " + std::to_string(lhs) + " vs " +
                         std::to_string(rhs) + (agree ? " (bijection verified)" : " (MISMATCH)"));
            return agree ? kSuccess : kNegative;
        };
    });

    CLI11_PARSE(app, argc, argv);
    cf.max_dim_set = opt_md->count() > 0;
    cf.fiber_cap_set = opt_fc->count() > 0;
    cf.budget_set = opt_bu->count() > 0;
    cf.seed_set = opt_se->count() > 0;

    Output out;
    out.machine = format == "machine";
    out.cfg = cf.settle({});

    try {
        return run(out);
    } catch (const BudgetError& e) {
        out.emit(json{{"error", e.what()}, {"kind", "budget"}}, std::string("error: ") + e.what());
        return kUnknown;
    } catch (const InputError& e) {
        out.emit(json{{"error", e.what()}, {"kind", "input"}}, std::string("error: ") + e.what());
        return kBadInput;
    } catch (const InternalError& e) {
        out.emit(json{{"error", e.what()}, {"kind", "internal"}},
                 std::string("internal error: ") + e.what());
        return kBadInput;
    }
}
