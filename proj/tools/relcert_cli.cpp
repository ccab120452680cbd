// relcert: batch analysis of exact relevance certification for finite
// decision problems and binary pairwise slices.
//
// Exit codes: 0 success, 1 validation error, 2 resource limit,
//             3 theory-violation diagnostic, 4 verification failure.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "relcert/relcert.hpp"

using namespace relcert;

namespace {

struct RunConfig {
    StateIndex budget = kDefaultStateBudget;
    int subset_cap = kDefaultSubsetCap;
    std::uint64_t seed = 0;
    std::string format = "human";
    std::string out_path;

    bool machine() const { return format == "json"; }
};

Json stamp(const RunConfig& config) {
    return Json{{"version", kVersion}, {"seed", config.seed}};
}

void emit(const RunConfig& config, const Json& machine_doc, const std::string& human_text) {
    if (config.machine()) std::cout << dump_canonical(machine_doc);
    else std::cout << human_text;
}

void write_out(const RunConfig& config, const Json& doc) {
    if (!config.out_path.empty()) save_json(config.out_path, doc);
}

std::string render_coords(const std::vector<int>& coords) {
    std::string out = "{";
    for (std::size_t i = 0; i < coords.size(); ++i)
        out += (i ? "," : "") + std::to_string(coords[i]);
    return out + "}";
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const RunConfig& config, const std::string& path) {
    const Json doc = load_json(path);
    DecisionProblem problem;
    std::string kind;
    if (json_is_slice(doc)) {
        kind = "slice";
        problem = slice_from_json(doc).expand(config.budget);
    } else if (json_is_problem(doc)) {
        kind = "problem";
        problem = problem_from_json(doc, config.budget);
    } else {
        throw ValidationError("document is neither a problem (utility) nor a slice (coeffs)");
    }

    const auto q = quotient(problem);
    const auto profile =
        certification_profile(problem, {.verify = false, .subset_cap = config.subset_cap});
    const bool entropy_ok = true; // certification_profile asserts it on binary spaces

    Json classes = Json::array();
    std::string human;
    human += "kind: " + kind + "\n";
    const auto blocks = partition_blocks(q);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        Json states = Json::array();
        std::string state_text;
        for (const StateIndex s : blocks[k]) {
            states.push_back(problem.space().render(s));
            state_text += (state_text.empty() ? "" : ",") + problem.space().render(s);
        }
        Json optimizer = Json::array();
        std::string opt_text;
        for (const int a : q.classes[k]) {
            optimizer.push_back(problem.action_id(a));
            opt_text += (opt_text.empty() ? "" : ",") + problem.action_id(a);
        }
        classes.push_back(Json{{"states", std::move(states)},
                               {"optimizer", std::move(optimizer)}});
        human += "class " + std::to_string(k) + ": states {" + state_text + "} optimizer {" +
                 opt_text + "}\n";
    }
    human += "relevant: " + render_coords(profile.relevant) + "\n";
    human += "minimal sufficient: " + render_coords(profile.minimal_sufficient) + "\n";
    human += "srank: " + std::to_string(profile.srank) + "\n";
    human += "quotient classes m: " + std::to_string(profile.quotient_count) + "\n";
    human += std::string("m <= 2^srank: ") + (entropy_ok ? "ok" : "VIOLATED") + "\n";
    if (profile.relevant.empty())
        human += "empty set sufficient; all coordinates irrelevant\n";

    Json out = stamp(config);
    out["kind"] = kind;
    out["classes"] = std::move(classes);
    out["relevant"] = profile.relevant;
    out["minimal_sufficient"] = profile.minimal_sufficient;
    out["srank"] = profile.srank;
    out["m"] = profile.quotient_count;
    out["entropy_bound_ok"] = entropy_ok;
    emit(config, out, human);
    write_out(config, out);
    return 0;
}

// ---------------------------------------------------------------------------
// realize
// ---------------------------------------------------------------------------

int cmd_realize(const RunConfig& config, const std::string& path,
                const std::string& space_text) {
    std::vector<int> domains;
    std::stringstream ss(space_text);
    std::string part;
    while (std::getline(ss, part, ','))
        try {
            domains.push_back(std::stoi(part));
        } catch (const std::exception&) {
            throw ValidationError("bad --space entry '" + part + "'");
        }
    const CoordinateSpace space(domains);
    const auto phi = labeling_from_json(load_json(path));
    const auto problem = realize_labeling(space, phi, config.budget);
    Json out = stamp(config);
    out["problem"] = problem_to_json(problem);
    out["classes"] = quotient(problem).class_count();
    std::string human = "realized indicator problem with " +
                        std::to_string(problem.num_actions()) + " actions; quotient has " +
                        std::to_string(quotient(problem).class_count()) + " classes\n";
    write_out(config, out["problem"]);
    if (!config.out_path.empty()) human += "problem written to " + config.out_path + "\n";
    emit(config, out, human);
    return 0;
}

// ---------------------------------------------------------------------------
// witness / verify
// ---------------------------------------------------------------------------

int cmd_witness(const RunConfig& config, const std::string& kind_text, int n) {
    VerifyBundleOptions opts;
    opts.invariance.budget = config.budget;
    opts.invariance.subset_cap = config.subset_cap;
    opts.invariance.seed = config.seed;
    const auto bundle = make_family(target_kind_from_string(kind_text), n, opts);
    const Json doc = bundle_to_json(bundle);
    if (!config.out_path.empty()) save_json(config.out_path, doc);

    Json out = stamp(config);
    out["kind"] = kind_text;
    out["n"] = n;
    out["base_predicate"] = bundle.report.base_predicate;
    out["translated_predicate"] = bundle.report.translated_predicate;
    out["verified"] = bundle.report.pass();
    std::string human = "witness kind " + kind_text + " at n=" + std::to_string(n) +
                        ": predicate " + (bundle.report.base_predicate ? "true" : "false") +
                        " -> " + (bundle.report.translated_predicate ? "true" : "false") +
                        ", verified\n";
    if (!config.out_path.empty()) human += "bundle written to " + config.out_path + "\n";
    emit(config, out, human);
    return 0;
}

int cmd_verify(const RunConfig& config, const std::string& path) {
    const auto bundle = bundle_from_json(load_json(path));
    VerifyBundleOptions opts;
    opts.invariance.budget = config.budget;
    opts.invariance.subset_cap = config.subset_cap;
    opts.invariance.seed = config.seed;
    const auto report = verify_bundle(bundle, opts);

    Json out = stamp(config);
    out["report"] = bundle_report_to_json(report);
    out["pass"] = report.pass();
    std::string human;
    human += std::string("trace replay: ") + (report.replay_ok ? "ok" : "FAILED") + "\n";
    human += std::string("predicate flip: ") + (report.flip_ok ? "ok" : "FAILED") + "\n";
    human += std::string("certification invariance: ") +
             (report.invariance_ok ? "ok" : "FAILED") + "\n";
    for (const auto& f : report.failures) human += "failure: " + f + "\n";
    human += report.pass() ? "bundle verified\n" : "bundle verification FAILED\n";
    emit(config, out, human);
    write_out(config, out);
    return report.pass() ? 0 : 4;
}

// ---------------------------------------------------------------------------
// graph
// ---------------------------------------------------------------------------

int cmd_graph(const RunConfig& config, const std::string& path, const std::string& mode_text) {
    const auto slice = slice_from_json(load_json(path));
    GraphMode mode;
    if (mode_text == "raw") mode = GraphMode::Raw;
    else if (mode_text == "decision") mode = GraphMode::Decision;
    else if (mode_text == "supported") mode = GraphMode::Supported;
    else throw ValidationError("unknown graph mode '" + mode_text + "'");

    const auto g = interaction_graph(slice, mode, config.budget);
    std::string dot = "graph interaction {\n";
    for (int v = 0; v < g.d; ++v) dot += "  " + std::to_string(v) + ";\n";
    for (const auto& e : g.edges) {
        std::string label = rat_to_string(e.value) + " (" + slice.action_id(e.action_a);
        if (e.action_b) label += "," + slice.action_id(*e.action_b);
        label += ")";
        dot += "  " + std::to_string(e.i) + " -- " + std::to_string(e.j) + " [label=\"" +
               label + "\"];\n";
    }
    dot += "}\n";

    if (config.machine()) {
        Json edges = Json::array();
        for (const auto& e : g.edges) {
            Json edge{{"i", e.i}, {"j", e.j}, {"action", slice.action_id(e.action_a)},
                      {"value", rat_to_string(e.value)}};
            if (e.action_b) edge["action_b"] = slice.action_id(*e.action_b);
            edges.push_back(std::move(edge));
        }
        Json out = stamp(config);
        out["mode"] = mode_text;
        out["dot"] = dot;
        out["edges"] = std::move(edges);
        std::cout << dump_canonical(out);
        write_out(config, out);
    } else {
        std::cout << dot;
        if (!config.out_path.empty()) {
            std::ofstream f(config.out_path);
            f << dot;
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

int cmd_transform(const RunConfig& config, const std::string& path,
                  const std::string& trace_path) {
    const auto steps = steps_from_json(load_json(trace_path));
    const Json doc = load_json(path);
    InvarianceOptions opts;
    opts.budget = config.budget;
    opts.subset_cap = config.subset_cap;
    opts.seed = config.seed;

    Json out = stamp(config);
    Json result_doc;
    InvarianceReport report;
    if (json_is_slice(doc)) {
        const auto base = slice_from_json(doc);
        const auto applied = apply_trace(base, steps, config.budget);
        report = verify_invariance(base, applied.result, applied.trace, opts);
        result_doc = slice_to_json(applied.result);
        out["transport"] = Json{{"coord_map", applied.trace.transport.coord_map}};
    } else {
        const auto base = problem_from_json(doc, config.budget);
        const auto applied = apply_trace(base, steps, config.budget);
        report = verify_invariance(base, applied.result, applied.trace, opts);
        result_doc = problem_to_json(applied.result);
        out["transport"] = Json{{"coord_map", applied.trace.transport.coord_map}};
    }
    out["result"] = result_doc;
    out["invariance"] = invariance_report_to_json(report);
    std::string human = "trace applied: " + std::to_string(steps.size()) + " step(s)\n";
    human += "invariance verified on " + std::to_string(report.subsets_checked) +
             " coordinate subsets\n";
    if (report.affine_optimizer_checked) human += "affine trace: optimizer sets identical\n";
    if (!config.out_path.empty()) {
        save_json(config.out_path, result_doc);
        human += "result written to " + config.out_path + "\n";
    }
    emit(config, out, human);
    return 0;
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

int cmd_reduce(const RunConfig& config, const std::string& op, const std::string& path,
               const std::string& bits_mode) {
    Json out = stamp(config);
    std::string human;
    if (op == "induce") {
        const auto [spec, space] = spec_from_json(load_json(path));
        const auto problem = induce_problem(spec, space, config.budget);
        out["problem"] = problem_to_json(problem);
        human = "induced problem with " + std::to_string(problem.num_actions()) +
                " actions on " + std::to_string(problem.num_states()) + " states\n";
        if (problem.num_actions() > static_cast<int>(spec.outputs.size()))
            human += std::string("totalized with failure token ") + kFailureTokenDisplay +
                     " (" + kFailureTokenId + ")\n";
        write_out(config, out["problem"]);
    } else if (op == "transfer-check") {
        const auto [spec, space] = spec_from_json(load_json(path));
        const auto report =
            transfer_check(spec, space, {.verify = false, .subset_cap = config.subset_cap},
                           config.budget);
        out["partitions_equal"] = report.partitions_equal;
        out["class_count"] = report.class_count;
        out["subsets_checked"] = report.subsets_checked;
        out["relevance_checks"] = report.relevance_checks;
        out["totalized"] = report.totalized;
        human = "transfer check: relation-level and problem-level certification agree (" +
                std::to_string(report.class_count) + " classes)\n";
    } else if (op == "compress") {
        const Json doc = load_json(path);
        if (json_is_slice(doc)) {
            const auto c = compress_profiles(slice_from_json(doc), {}, config.budget);
            out["compressed"] = slice_to_json(c.compressed);
            out["profile_class_of_action"] = c.profile_class_of_action;
            out["representatives"] = c.representative;
            human = "compressed to " + std::to_string(c.compressed.num_actions()) +
                    " distinct profiles\n";
            write_out(config, out["compressed"]);
        } else {
            const auto c = compress_profiles(problem_from_json(doc, config.budget));
            out["compressed"] = problem_to_json(c.compressed);
            out["profile_class_of_action"] = c.profile_class_of_action;
            out["representatives"] = c.representative;
            human = "compressed to " + std::to_string(c.compressed.num_actions()) +
                    " distinct profiles\n";
            write_out(config, out["compressed"]);
        }
    } else if (op == "present-bits") {
        const auto problem = problem_from_json(load_json(path), config.budget);
        BitsMode mode;
        if (bits_mode == "indicator") mode = BitsMode::Indicator;
        else if (bits_mode == "binary-index") mode = BitsMode::BinaryIndex;
        else throw ValidationError("unknown bits mode '" + bits_mode + "'");
        const auto bits = present_as_bits(problem, mode, config.budget);
        out["mode"] = to_string(bits.mode);
        out["cube"] = problem_to_json(bits.cube);
        out["encode"] = bits.encode;
        human = std::string("presented on ") + std::to_string(bits.cube.dimension()) +
                " binary coordinates (" + to_string(bits.mode) + " mode)\n";
        write_out(config, out["cube"]);
    } else {
        throw ValidationError("unknown reduce op '" + op + "'");
    }
    emit(config, out, human);
    return 0;
}

// ---------------------------------------------------------------------------
// stability
// ---------------------------------------------------------------------------

int cmd_stability(const RunConfig& config, const std::string& d_path,
                  const std::string& dp_path) {
    const auto d = problem_from_json(load_json(d_path), config.budget);
    const auto dp = problem_from_json(load_json(dp_path), config.budget);
    const auto cert = global_stability_certificate(d, dp, {.verify = true,
                                                           .subset_cap = config.subset_cap});
    Json out = stamp(config);
    out["certificate"] = certificate_to_json(cert);
    std::string human;
    if (cert.certified) {
        human = "certified: min_gap " + rat_to_string(cert.min_gap) + " > 2*delta with delta " +
                rat_to_string(cert.delta) + "\n";
        if (cert.checked_profiles) human += "profiles brute-force verified identical\n";
    } else {
        human = "refused: min_gap " + rat_to_string(cert.min_gap) +
                " does not exceed 2*delta with delta " + rat_to_string(cert.delta) +
                " (no claim either way)\n";
    }
    emit(config, out, human);
    write_out(config, out["certificate"]);
    return 0;
}

// ---------------------------------------------------------------------------
// classify / falsify
// ---------------------------------------------------------------------------

int cmd_classify(const RunConfig& config, const std::string& scheme_path,
                 const std::string& slice_path) {
    const auto scheme = scheme_from_json(load_json(scheme_path));
    const auto slice = slice_from_json(load_json(slice_path));
    const bool verdict = evaluate_scheme(scheme, slice);
    Json out = stamp(config);
    out["verdict"] = verdict;
    emit(config, out, std::string("verdict: ") + (verdict ? "true" : "false") + "\n");
    return 0;
}

int cmd_falsify(const RunConfig& config, const std::string& builtin,
                const std::string& scheme_path, int candidates, std::uint64_t time_budget_ms) {
    BundleTarget target;
    if (!builtin.empty() && !scheme_path.empty())
        throw ValidationError("give either a builtin target or a scheme, not both");
    if (!builtin.empty())
        target = BundleTarget::builtin(target_kind_from_string(builtin));
    else if (!scheme_path.empty())
        target = BundleTarget::from_scheme(scheme_from_json(load_json(scheme_path)));
    else
        throw ValidationError("falsify needs --builtin or --scheme");

    FalsifyConfig fc;
    fc.random_candidates = candidates;
    fc.seed = config.seed;
    fc.time_budget = std::chrono::milliseconds(time_budget_ms);
    fc.budget = config.budget;
    fc.verify.invariance.budget = config.budget;
    fc.verify.invariance.subset_cap = config.subset_cap;
    fc.verify.invariance.seed = config.seed;
    const auto outcome = falsify_classifier(target, fc);

    Json out = stamp(config);
    out["found"] = outcome.bundle.has_value();
    out["bases_tried"] = outcome.stats.bases_tried;
    out["translates_tried"] = outcome.stats.translates_tried;
    out["timed_out"] = outcome.stats.timed_out;
    std::string human = "seed: " + std::to_string(config.seed) + "\n";
    if (outcome.bundle) {
        out["bundle"] = bundle_to_json(*outcome.bundle);
        human += "orbit-gap witness found: the classifier is not closure-law invariant\n";
        if (!config.out_path.empty()) {
            save_json(config.out_path, out["bundle"]);
            human += "bundle written to " + config.out_path + "\n";
        }
    } else {
        human += "no disagreement found within budget (" +
                std::to_string(outcome.stats.bases_tried) + " bases, " +
                std::to_string(outcome.stats.translates_tried) +
                " translates); this is NOT a claim of invariance\n";
    }
    emit(config, out, human);
    return 0;
}

// ---------------------------------------------------------------------------
// taxonomy
// ---------------------------------------------------------------------------

int cmd_taxonomy(const RunConfig& config) {
    check_table_integrity();
    Json rows = Json::array();
    std::string human;
    for (const auto& row : landscape_table()) {
        rows.push_back(Json{{"family", row.family},
                            {"role", to_string(row.role)},
                            {"mechanism", row.mechanism}});
        human += row.family + " | " + to_string(row.role) + " | " + row.mechanism + "\n";
    }
    std::set<std::string> mechanisms;
    for (const auto& row : landscape_table()) mechanisms.insert(row.mechanism);
    Json out = stamp(config);
    out["rows"] = std::move(rows);
    out["mechanisms"] = std::vector<std::string>(mechanisms.begin(), mechanisms.end());
    human += "15 families, 8 primitive mechanisms\n";
    emit(config, out, human);
    write_out(config, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact relevance certification toolkit"};
    app.require_subcommand(1);

    RunConfig config;
    app.add_option("--budget", config.budget, "max enumerated states")
        ->capture_default_str();
    app.add_option("--subset-cap", config.subset_cap,
                   "max dimension for full subset scans")
        ->capture_default_str();
    app.add_option("--seed", config.seed, "random seed")->capture_default_str();
    app.add_option("--format", config.format, "output format: human|json")
        ->check(CLI::IsMember({"human", "json"}))
        ->capture_default_str();
    app.add_option("--out", config.out_path, "write the primary artifact to this file");

    std::string file, trace_path, mode = "raw", kind, op, bits_mode = "binary-index";
    std::string d_path, dp_path, scheme_path, slice_path, builtin;
    int n = 3, candidates = 200;
    std::uint64_t time_budget_ms = 60000;

    auto* analyze = app.add_subcommand("analyze", "certify a problem or slice document");
    analyze->add_option("file", file)->required();

    std::string space_text;
    auto* realize = app.add_subcommand("realize", "indicator problem from a labeling");
    realize->add_option("file", file)->required();
    realize->add_option("--space", space_text, "comma-separated cardinalities")->required();

    auto* witness = app.add_subcommand("witness", "build a verified orbit-gap bundle");
    witness->add_option("--kind", kind, "dominant_pair|margin_bounded|ghost_action|offset_signature")
        ->required();
    witness->add_option("--n", n, "dimension (>= 3)")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "verify a witness bundle document");
    verify->add_option("file", file)->required();

    auto* graph = app.add_subcommand("graph", "interaction graph as DOT");
    graph->add_option("file", file)->required();
    graph->add_option("--mode", mode, "raw|decision|supported")->capture_default_str();

    auto* transform = app.add_subcommand("transform", "apply a closure trace");
    transform->add_option("file", file)->required();
    transform->add_option("--trace", trace_path, "trace document")->required();

    auto* reduce = app.add_subcommand("reduce", "semantic reductions");
    reduce->add_option("--op", op, "induce|transfer-check|compress|present-bits")->required();
    reduce->add_option("file", file)->required();
    reduce->add_option("--mode", bits_mode, "present-bits mode: indicator|binary-index")
        ->capture_default_str();

    auto* stability = app.add_subcommand("stability", "global stability certificate");
    stability->add_option("d", d_path)->required();
    stability->add_option("d_prime", dp_path)->required();

    auto* classify = app.add_subcommand("classify", "evaluate a pattern scheme on a slice");
    classify->add_option("--scheme", scheme_path)->required();
    classify->add_option("slice", slice_path)->required();

    auto* falsify = app.add_subcommand("falsify", "search for an orbit-gap disagreement");
    falsify->add_option("--builtin", builtin, "built-in target predicate id");
    falsify->add_option("--scheme", scheme_path, "pattern scheme document");
    falsify->add_option("--candidates", candidates, "random candidate count")
        ->capture_default_str();
    falsify->add_option("--time-budget-ms", time_budget_ms, "search time budget")
        ->capture_default_str();

    app.add_subcommand("taxonomy", "the landscape table");

    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(config, file);
        if (realize->parsed()) return cmd_realize(config, file, space_text);
        if (witness->parsed()) return cmd_witness(config, kind, n);
        if (verify->parsed()) return cmd_verify(config, file);
        if (graph->parsed()) return cmd_graph(config, file, mode);
        if (transform->parsed()) return cmd_transform(config, file, trace_path);
        if (reduce->parsed()) return cmd_reduce(config, op, file, bits_mode);
        if (stability->parsed()) return cmd_stability(config, d_path, dp_path);
        if (classify->parsed()) return cmd_classify(config, scheme_path, slice_path);
        if (falsify->parsed())
            return cmd_falsify(config, builtin, scheme_path, candidates, time_budget_ms);
        return cmd_taxonomy(config);
    } catch (const TheoryViolation& e) {
        std::cerr << "theory violation: " << e.what() << "\n";
        return 3;
    } catch (const VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 4;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
