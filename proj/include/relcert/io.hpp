#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relcert/classifier.hpp"
#include "relcert/closure.hpp"
#include "relcert/obstruction.hpp"
#include "relcert/pairwise.hpp"
#include "relcert/problem.hpp"
#include "relcert/realizability.hpp"
#include "relcert/reductions.hpp"
#include "relcert/stability.hpp"

namespace relcert {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

namespace io_detail {

inline const Json& field(const Json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end())
        throw ValidationError("document is missing required field '" + std::string(name) +
                              "'");
    return *it;
}

inline Rat rat(const Json& j, const char* context) {
    if (!j.is_string())
        throw ValidationError("expected a rational string at " + std::string(context));
    return rat_from_string(j.get<std::string>());
}

inline Json rat_json(const Rat& x) { return rat_to_string(x); }

inline Json unary_json(const UnaryTable& u) {
    return Json::array({rat_json(u[0]), rat_json(u[1])});
}

inline UnaryTable unary_from(const Json& j, const char* context) {
    if (!j.is_array() || j.size() != 2)
        throw ValidationError("expected a two-entry unary table at " + std::string(context));
    return {rat(j[0], context), rat(j[1], context)};
}

inline Json pair_json(const PairTable& w) {
    return Json::array({Json::array({rat_json(w[0][0]), rat_json(w[0][1])}),
                        Json::array({rat_json(w[1][0]), rat_json(w[1][1])})});
}

inline PairTable pair_from(const Json& j, const char* context) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2)
        throw ValidationError("expected a 2x2 pair table at " + std::string(context));
    PairTable w{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                rat(j[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)], context);
    return w;
}

inline std::string pair_key(const CoordPair& key) {
    return std::to_string(key.first) + "," + std::to_string(key.second);
}

inline CoordPair pair_key_from(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw ValidationError("pair key '" + text + "' is not of the form \"i,j\"");
    try {
        const int i = std::stoi(text.substr(0, comma));
        const int j = std::stoi(text.substr(comma + 1));
        return {i, j};
    } catch (const std::exception&) {
        throw ValidationError("pair key '" + text + "' is not of the form \"i,j\"");
    }
}

} // namespace io_detail

// ---------------------------------------------------------------------------
// Problem documents
// ---------------------------------------------------------------------------

inline Json problem_to_json(const DecisionProblem& p) {
    Json utility = Json::object();
    for (int a = 0; a < p.num_actions(); ++a) {
        Json column = Json::array();
        for (StateIndex s = 0; s < p.num_states(); ++s)
            column.push_back(io_detail::rat_json(p.utility(a, s)));
        utility[p.action_id(a)] = std::move(column);
    }
    return Json{{"space", p.space().domains()},
                {"actions", p.actions()},
                {"utility", std::move(utility)}};
}

inline DecisionProblem problem_from_json(const Json& j,
                                         StateIndex budget = kDefaultStateBudget) {
    using io_detail::field;
    const CoordinateSpace space(field(j, "space").get<std::vector<int>>());
    const auto actions = field(j, "actions").get<std::vector<std::string>>();
    const Json& utility = field(j, "utility");
    std::vector<std::vector<Rat>> table;
    for (const auto& id : actions) {
        const auto it = utility.find(id);
        if (it == utility.end())
            throw ValidationError("utility table is missing action '" + id + "'");
        std::vector<Rat> column;
        for (const auto& entry : *it)
            column.push_back(io_detail::rat(entry, ("utility of '" + id + "'").c_str()));
        table.push_back(std::move(column));
    }
    return DecisionProblem(space, actions, std::move(table), budget);
}

// ---------------------------------------------------------------------------
// Slice documents
// ---------------------------------------------------------------------------

inline Json bundle_coeffs_to_json(const CoeffBundle& c) {
    Json unary = Json::array();
    for (const auto& u : c.unary) unary.push_back(io_detail::unary_json(u));
    Json pairs = Json::object();
    for (const auto& [key, w] : c.pairs)
        if (!table_is_zero(w)) pairs[io_detail::pair_key(key)] = io_detail::pair_json(w);
    return Json{{"c", io_detail::rat_json(c.constant)},
                {"unary", std::move(unary)},
                {"pairs", std::move(pairs)}};
}

inline CoeffBundle bundle_coeffs_from_json(const Json& j, int d) {
    using io_detail::field;
    CoeffBundle c = CoeffBundle::zero(d);
    c.constant = io_detail::rat(field(j, "c"), "coefficient constant");
    const Json& unary = field(j, "unary");
    if (static_cast<int>(unary.size()) != d)
        throw ValidationError("coefficient bundle has " + std::to_string(unary.size()) +
                              " unary tables for dimension " + std::to_string(d));
    for (int i = 0; i < d; ++i)
        c.unary[static_cast<std::size_t>(i)] =
            io_detail::unary_from(unary[static_cast<std::size_t>(i)], "unary table");
    for (const auto& [key_text, table] : field(j, "pairs").items())
        c.pairs.emplace(io_detail::pair_key_from(key_text),
                        io_detail::pair_from(table, key_text.c_str()));
    return c;
}

inline Json slice_to_json(const PairwiseSlice& slice) {
    Json coeffs = Json::object();
    for (int a = 0; a < slice.num_actions(); ++a)
        coeffs[slice.action_id(a)] = bundle_coeffs_to_json(slice.coeffs(a));
    return Json{{"d", slice.dimension()},
                {"actions", slice.actions()},
                {"coeffs", std::move(coeffs)}};
}

inline PairwiseSlice slice_from_json(const Json& j) {
    using io_detail::field;
    const int d = field(j, "d").get<int>();
    const auto actions = field(j, "actions").get<std::vector<std::string>>();
    const Json& coeffs = field(j, "coeffs");
    std::vector<CoeffBundle> bundles;
    for (const auto& id : actions) {
        const auto it = coeffs.find(id);
        if (it == coeffs.end())
            throw ValidationError("coeffs table is missing action '" + id + "'");
        bundles.push_back(bundle_coeffs_from_json(*it, d));
    }
    return PairwiseSlice(d, actions, std::move(bundles));
}

inline bool json_is_slice(const Json& j) { return j.contains("coeffs"); }
inline bool json_is_problem(const Json& j) { return j.contains("utility"); }

// ---------------------------------------------------------------------------
// Labeling documents
// ---------------------------------------------------------------------------

inline Json labeling_to_json(const Labeling& phi) { return Json{{"labels", phi.labels}}; }

inline Labeling labeling_from_json(const Json& j) {
    return Labeling{io_detail::field(j, "labels").get<std::vector<std::string>>()};
}

// ---------------------------------------------------------------------------
// Trace documents
// ---------------------------------------------------------------------------

inline Json step_to_json(const ClosureStep& step) {
    struct Visitor {
        Json operator()(const RelabelActionsStep& s) const {
            return Json{{"op", "relabel_actions"}, {"perm", s.perm}};
        }
        Json operator()(const RelabelCoordsStep& s) const {
            return Json{{"op", "relabel_coords"}, {"perm", s.perm}};
        }
        Json operator()(const AffineSliceStep& s) const {
            return Json{{"op", "affine"},
                        {"alpha", bundle_coeffs_to_json(s.alpha)},
                        {"beta", io_detail::rat_json(s.beta)}};
        }
        Json operator()(const AffineStatewiseStep& s) const {
            Json alpha = Json::array();
            Json beta = Json::array();
            for (const auto& a : s.alpha) alpha.push_back(io_detail::rat_json(a));
            for (const auto& b : s.beta) beta.push_back(io_detail::rat_json(b));
            return Json{{"op", "affine"}, {"alpha", std::move(alpha)},
                        {"beta", std::move(beta)}};
        }
        Json operator()(const DuplicateActionStep& s) const {
            return Json{{"op", "duplicate_action"}, {"source", s.source}};
        }
        Json operator()(const DuplicateStateStep& s) const {
            return Json{{"op", "duplicate_state"}, {"source", s.source}};
        }
        Json operator()(const ExtendIrrelevantStep&) const {
            return Json{{"op", "extend_irrelevant"}};
        }
    };
    return std::visit(Visitor{}, step);
}

inline ClosureStep step_from_json(const Json& j) {
    using io_detail::field;
    const auto op = field(j, "op").get<std::string>();
    if (op == "relabel_actions")
        return RelabelActionsStep{field(j, "perm").get<std::vector<int>>()};
    if (op == "relabel_coords")
        return RelabelCoordsStep{field(j, "perm").get<std::vector<int>>()};
    if (op == "affine") {
        const Json& alpha = field(j, "alpha");
        const Json& beta = field(j, "beta");
        if (alpha.is_object()) {
            const int d = static_cast<int>(field(alpha, "unary").size());
            return AffineSliceStep{bundle_coeffs_from_json(alpha, d),
                                   io_detail::rat(beta, "affine beta")};
        }
        AffineStatewiseStep step;
        for (const auto& a : alpha) step.alpha.push_back(io_detail::rat(a, "affine alpha"));
        for (const auto& b : beta) step.beta.push_back(io_detail::rat(b, "affine beta"));
        return step;
    }
    if (op == "duplicate_action")
        return DuplicateActionStep{field(j, "source").get<std::string>()};
    if (op == "duplicate_state")
        return DuplicateStateStep{field(j, "source").get<StateIndex>()};
    if (op == "extend_irrelevant") return ExtendIrrelevantStep{};
    throw ValidationError("unknown trace step op '" + op + "'");
}

inline Json steps_to_json(const std::vector<ClosureStep>& steps) {
    Json out = Json::array();
    for (const auto& s : steps) out.push_back(step_to_json(s));
    return out;
}

inline std::vector<ClosureStep> steps_from_json(const Json& j) {
    if (!j.is_array()) throw ValidationError("trace document must be an array of steps");
    std::vector<ClosureStep> steps;
    for (const auto& s : j) steps.push_back(step_from_json(s));
    return steps;
}

// ---------------------------------------------------------------------------
// Pattern scheme documents
// ---------------------------------------------------------------------------

inline Json pattern_to_json(const LocalPattern& p) {
    Json vertices = Json::array();
    for (const auto& labels : p.vertices) {
        Json tuple = Json::array();
        for (const auto& u : labels) tuple.push_back(io_detail::unary_json(u));
        vertices.push_back(std::move(tuple));
    }
    Json edges = Json::array();
    for (const auto& e : p.edges) {
        Json tables = Json::array();
        for (const auto& w : e.tables) tables.push_back(io_detail::pair_json(w));
        edges.push_back(Json{{"u", e.u}, {"v", e.v}, {"tables", std::move(tables)}});
    }
    return Json{{"radius", p.radius},
                {"root", p.root},
                {"num_actions", p.num_action_labels},
                {"vertices", std::move(vertices)},
                {"edges", std::move(edges)}};
}

inline LocalPattern pattern_from_json(const Json& j) {
    using io_detail::field;
    LocalPattern p;
    p.radius = field(j, "radius").get<int>();
    p.root = field(j, "root").get<int>();
    p.num_action_labels = field(j, "num_actions").get<int>();
    for (const auto& tuple : field(j, "vertices")) {
        std::vector<UnaryTable> labels;
        for (const auto& u : tuple)
            labels.push_back(io_detail::unary_from(u, "pattern vertex label"));
        p.vertices.push_back(std::move(labels));
    }
    for (const auto& e : field(j, "edges")) {
        LocalPattern::Edge edge;
        edge.u = field(e, "u").get<int>();
        edge.v = field(e, "v").get<int>();
        for (const auto& w : field(e, "tables"))
            edge.tables.push_back(io_detail::pair_from(w, "pattern edge table"));
        p.edges.push_back(std::move(edge));
    }
    return p;
}

inline Json scheme_to_json(const PatternScheme& s) {
    Json witness = Json::array();
    for (const auto& p : s.witness) witness.push_back(pattern_to_json(p));
    Json forbidden = Json::array();
    for (const auto& p : s.forbidden) forbidden.push_back(pattern_to_json(p));
    return Json{{"bounds", Json{{"r_max", s.bounds.r_max},
                                {"n_max", s.bounds.n_max},
                                {"a_max", s.bounds.a_max},
                                {"c_max", io_detail::rat_json(s.bounds.c_max)}}},
                {"witness", std::move(witness)},
                {"forbidden", std::move(forbidden)}};
}

inline PatternScheme scheme_from_json(const Json& j) {
    using io_detail::field;
    PatternScheme s;
    const Json& bounds = field(j, "bounds");
    s.bounds.r_max = field(bounds, "r_max").get<int>();
    s.bounds.n_max = field(bounds, "n_max").get<int>();
    s.bounds.a_max = field(bounds, "a_max").get<int>();
    s.bounds.c_max = io_detail::rat(field(bounds, "c_max"), "c_max");
    for (const auto& p : field(j, "witness")) s.witness.push_back(pattern_from_json(p));
    for (const auto& p : field(j, "forbidden")) s.forbidden.push_back(pattern_from_json(p));
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Witness bundle documents
// ---------------------------------------------------------------------------

inline Json invariance_report_to_json(const InvarianceReport& r) {
    return Json{{"subsets_checked", r.subsets_checked},
                {"full_subset_enumeration", r.full_subset_enumeration},
                {"relevance_checks", r.relevance_checks},
                {"new_coordinates", r.new_coordinates},
                {"affine_optimizer_checked", r.affine_optimizer_checked}};
}

inline Json bundle_report_to_json(const BundleReport& r) {
    return Json{{"replay_ok", r.replay_ok},
                {"flip_ok", r.flip_ok},
                {"invariance_ok", r.invariance_ok},
                {"base_predicate", r.base_predicate},
                {"translated_predicate", r.translated_predicate},
                {"invariance", invariance_report_to_json(r.invariance)},
                {"failures", r.failures}};
}

inline Json bundle_to_json(const WitnessBundle& bundle) {
    Json j{{"base", slice_to_json(bundle.base)},
           {"trace", steps_to_json(bundle.steps)},
           {"translated", slice_to_json(bundle.translated)},
           {"report", bundle_report_to_json(bundle.report)}};
    if (bundle.target.kind) j["kind"] = to_string(*bundle.target.kind);
    if (bundle.target.scheme) j["scheme"] = scheme_to_json(*bundle.target.scheme);
    return j;
}

inline WitnessBundle bundle_from_json(const Json& j) {
    using io_detail::field;
    WitnessBundle bundle;
    bundle.base = slice_from_json(field(j, "base"));
    bundle.steps = steps_from_json(field(j, "trace"));
    bundle.translated = slice_from_json(field(j, "translated"));
    if (j.contains("kind"))
        bundle.target = BundleTarget::builtin(
            target_kind_from_string(j.at("kind").get<std::string>()));
    else if (j.contains("scheme"))
        bundle.target = BundleTarget::from_scheme(scheme_from_json(j.at("scheme")));
    else
        throw ValidationError("bundle document carries neither 'kind' nor 'scheme'");
    if (j.contains("report")) {
        const Json& r = j.at("report");
        bundle.report.replay_ok = r.value("replay_ok", false);
        bundle.report.flip_ok = r.value("flip_ok", false);
        bundle.report.invariance_ok = r.value("invariance_ok", false);
        bundle.report.base_predicate = r.value("base_predicate", false);
        bundle.report.translated_predicate = r.value("translated_predicate", false);
        if (r.contains("failures"))
            bundle.report.failures = r.at("failures").get<std::vector<std::string>>();
        if (r.contains("invariance")) {
            const Json& inv = r.at("invariance");
            bundle.report.invariance.subsets_checked = inv.value("subsets_checked", 0u);
            bundle.report.invariance.full_subset_enumeration =
                inv.value("full_subset_enumeration", false);
            bundle.report.invariance.relevance_checks = inv.value("relevance_checks", 0u);
            bundle.report.invariance.new_coordinates = inv.value("new_coordinates", 0u);
            bundle.report.invariance.affine_optimizer_checked =
                inv.value("affine_optimizer_checked", false);
        }
    }
    return bundle;
}

// ---------------------------------------------------------------------------
// Admissibility spec documents
// ---------------------------------------------------------------------------

inline Json spec_to_json(const AdmissibilitySpec& spec, const CoordinateSpace& space) {
    Json j{{"variant", to_string(spec.variant)},
           {"space", space.domains()},
           {"outputs", spec.outputs},
           {"u_allowed", io_detail::rat_json(spec.u_allowed)},
           {"u_blocked", io_detail::rat_json(spec.u_blocked)}};
    switch (spec.variant) {
        case SpecVariant::Deterministic: {
            Json map = Json::array();
            for (const int o : spec.deterministic_map)
                map.push_back(spec.outputs[static_cast<std::size_t>(o)]);
            j["map"] = std::move(map);
            break;
        }
        case SpecVariant::SetValued: {
            Json sets = Json::array();
            for (const auto& fiber : spec.set_valued) {
                Json ids = Json::array();
                for (const int o : fiber) ids.push_back(spec.outputs[static_cast<std::size_t>(o)]);
                sets.push_back(std::move(ids));
            }
            j["sets"] = std::move(sets);
            break;
        }
        case SpecVariant::Relational: {
            Json pairs = Json::array();
            for (const auto& [s, o] : spec.pairs)
                pairs.push_back(Json::array({s, spec.outputs[static_cast<std::size_t>(o)]}));
            j["pairs"] = std::move(pairs);
            break;
        }
    }
    return j;
}

inline std::pair<AdmissibilitySpec, CoordinateSpace> spec_from_json(const Json& j) {
    using io_detail::field;
    AdmissibilitySpec spec;
    const CoordinateSpace space(field(j, "space").get<std::vector<int>>());
    spec.outputs = field(j, "outputs").get<std::vector<std::string>>();
    if (j.contains("u_allowed"))
        spec.u_allowed = io_detail::rat(j.at("u_allowed"), "u_allowed");
    if (j.contains("u_blocked"))
        spec.u_blocked = io_detail::rat(j.at("u_blocked"), "u_blocked");
    std::map<std::string, int> index;
    for (int o = 0; o < static_cast<int>(spec.outputs.size()); ++o)
        index.emplace(spec.outputs[static_cast<std::size_t>(o)], o);
    auto output_index = [&](const Json& id) {
        const auto it = index.find(id.get<std::string>());
        if (it == index.end())
            throw ValidationError("unknown output identifier '" + id.get<std::string>() +
                                  "'");
        return it->second;
    };
    const auto variant = field(j, "variant").get<std::string>();
    if (variant == "deterministic") {
        spec.variant = SpecVariant::Deterministic;
        for (const auto& id : field(j, "map")) spec.deterministic_map.push_back(output_index(id));
    } else if (variant == "set_valued") {
        spec.variant = SpecVariant::SetValued;
        for (const auto& fiber : field(j, "sets")) {
            std::set<int> out;
            for (const auto& id : fiber) out.insert(output_index(id));
            spec.set_valued.push_back(std::move(out));
        }
    } else if (variant == "relational") {
        spec.variant = SpecVariant::Relational;
        for (const auto& pair : field(j, "pairs")) {
            if (!pair.is_array() || pair.size() != 2)
                throw ValidationError("relational pair must be [state, output]");
            spec.pairs.emplace_back(pair[0].get<StateIndex>(), output_index(pair[1]));
        }
    } else {
        throw ValidationError("unknown spec variant '" + variant + "'");
    }
    spec.validate(space);
    return {std::move(spec), space};
}

// ---------------------------------------------------------------------------
// Stability certificate documents
// ---------------------------------------------------------------------------

inline Json certificate_to_json(const StabilityCertificate& c) {
    return Json{{"delta", io_detail::rat_json(c.delta)},
                {"min_gap", io_detail::rat_json(c.min_gap)},
                {"verdict", c.certified ? "certified" : "refused"},
                {"checked_profiles", c.checked_profiles}};
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError("parse error in '" + path + "': " + e.what());
    }
}

inline void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open file '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

} // namespace relcert
