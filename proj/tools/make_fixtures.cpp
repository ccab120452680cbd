// Regenerates the documents under fixtures/. Run from the repo root:
//   ./build/tools/relcert_fixtures fixtures

#include <iostream>
#include <string>

#include "relcert/relcert.hpp"

using namespace relcert;

namespace {

DecisionProblem standing_example() {
    return DecisionProblem(CoordinateSpace({2, 2}), {"a", "b"},
                           {{Rat(0), Rat(0), Rat(1), Rat(1)},
                            {Rat(0), Rat(0), Rat(0), Rat(0)}});
}

PairwiseSlice dominant_pair_base() {
    return PairwiseSlice(3, {"a", "b"},
                         {CoeffBundle::pair_term(3, 0, 1, Rat(2)), CoeffBundle::zero(3)});
}

AdmissibilitySpec pac_pass_bits() {
    AdmissibilitySpec spec;
    spec.variant = SpecVariant::SetValued;
    spec.outputs = {"h0", "h1", "h2"};
    const CoordinateSpace cube({2, 2, 2});
    for (StateIndex s = 0; s < cube.state_count(); ++s) {
        std::set<int> fiber{0};
        if (cube.coord_value(s, 1) == 1) fiber.insert(1);
        spec.set_valued.push_back(std::move(fiber));
    }
    return spec;
}

AdmissibilitySpec parity_payload() {
    AdmissibilitySpec spec;
    spec.variant = SpecVariant::Deterministic;
    spec.outputs = {"even", "odd"};
    const CoordinateSpace cube({2, 2, 2});
    for (StateIndex s = 0; s < cube.state_count(); ++s) {
        int parity = 0;
        for (int i = 0; i < 3; ++i) parity ^= cube.coord_value(s, i);
        spec.deterministic_map.push_back(parity);
    }
    return spec;
}

PatternScheme anchor_edge_scheme() {
    PatternScheme scheme;
    scheme.bounds = {1, 2, 2, Rat(8)};
    LocalPattern p;
    p.radius = 1;
    p.num_action_labels = 2;
    p.vertices.assign(2, std::vector<UnaryTable>(2, UnaryTable{Rat(0), Rat(0)}));
    PairTable w{};
    w[1][1] = Rat(2);
    p.edges.push_back({0, 1, {w, PairTable{}}});
    scheme.witness.push_back(p);
    return scheme;
}

} // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "fixtures";
    auto path = [&](const std::string& name) { return dir + "/" + name; };

    save_json(path("standing_example.problem.json"), problem_to_json(standing_example()));

    const DecisionProblem constant(
        CoordinateSpace({2, 3}), {"act0", "act1"},
        {std::vector<Rat>(6, Rat(7, 2)), std::vector<Rat>(6, Rat(7, 2))});
    save_json(path("constant.problem.json"), problem_to_json(constant));

    const auto base = dominant_pair_base();
    save_json(path("dominant_pair_base.slice.json"), slice_to_json(base));

    const std::vector<ClosureStep> orbit_steps{
        AffineSliceStep{CoeffBundle::pair_term(3, 1, 2, Rat(3)), Rat(1)}};
    save_json(path("orbit_affine.trace.json"), steps_to_json(orbit_steps));
    save_json(path("dominant_pair_translate.slice.json"),
              slice_to_json(apply_trace(base, orbit_steps).result));

    const std::vector<ClosureStep> extend_swap{ExtendIrrelevantStep{},
                                               RelabelCoordsStep{{0, 2, 1}}};
    save_json(path("extend_swap.trace.json"), steps_to_json(extend_swap));

    {
        Labeling phi;
        const CoordinateSpace cube({2, 2});
        for (StateIndex s = 0; s < cube.state_count(); ++s) {
            const int parity = cube.coord_value(s, 0) ^ cube.coord_value(s, 1);
            phi.labels.push_back(parity ? "odd" : "even");
        }
        save_json(path("parity.labeling.json"), labeling_to_json(phi));
    }

    save_json(path("pac_pass_bits.spec.json"),
              spec_to_json(pac_pass_bits(), CoordinateSpace({2, 2, 2})));
    save_json(path("parity_payload.spec.json"),
              spec_to_json(parity_payload(), CoordinateSpace({2, 2, 2})));

    for (const auto kind : {TargetKind::DominantPair, TargetKind::MarginBounded,
                            TargetKind::GhostAction, TargetKind::OffsetSignature}) {
        const auto bundle = make_family(kind, 3);
        save_json(path(std::string(to_string(kind)) + "_n3.bundle.json"),
                  bundle_to_json(bundle));
    }

    // Forced-failure fixture: one translated coefficient nudged off the
    // replayed value.
    {
        auto bundle = make_family(TargetKind::DominantPair, 3);
        auto coeffs = bundle.translated.all_coeffs();
        coeffs[0].constant += Rat(1, 7);
        bundle.translated = PairwiseSlice(bundle.translated.dimension(),
                                          bundle.translated.actions(), coeffs);
        save_json(path("tampered_dominant_pair.bundle.json"), bundle_to_json(bundle));
    }

    save_json(path("constant_true.scheme.json"), scheme_to_json(PatternScheme::constant_true()));
    save_json(path("constant_false.scheme.json"),
              scheme_to_json(PatternScheme::constant_false()));
    save_json(path("anchor_edge.scheme.json"), scheme_to_json(anchor_edge_scheme()));

    // Stability demo pair: per-state strict gap 5 against perturbations <= 1.
    {
        const CoordinateSpace space({2, 2});
        std::vector<std::vector<Rat>> u = {{Rat(5), Rat(0), Rat(5), Rat(0)},
                                           {Rat(0), Rat(5), Rat(0), Rat(5)}};
        const DecisionProblem d(space, {"a", "b"}, u);
        std::vector<std::vector<Rat>> up = {{Rat(5), Rat(1), Rat(4), Rat(0)},
                                            {Rat(1), Rat(5), Rat(0), Rat(4)}};
        const DecisionProblem dp(space, {"a", "b"}, up);
        save_json(path("stable_d.problem.json"), problem_to_json(d));
        save_json(path("stable_d_prime.problem.json"), problem_to_json(dp));
    }

    std::cout << "fixtures written to " << dir << "\n";
    return 0;
}
