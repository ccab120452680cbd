// Transfers a certified-risk admissibility relation into an exact-relevance
// question: which pass bits recover the certified hypothesis set?

#include <iostream>

#include "relcert/relcert.hpp"

using namespace relcert;

int main() {
    // Three hypotheses scored on pass bits (p0, p1, p2). On the subdomain
    // modeled here h0 always certifies and h2 never does, so the admissible
    // set is {h0} plus h1 exactly when p1 is set.
    const CoordinateSpace cube({2, 2, 2});
    AdmissibilitySpec spec;
    spec.variant = SpecVariant::SetValued;
    spec.outputs = {"h0", "h1", "h2"};
    for (StateIndex s = 0; s < cube.state_count(); ++s) {
        std::set<int> fiber{0};
        if (cube.coord_value(s, 1) == 1) fiber.insert(1);
        spec.set_valued.push_back(std::move(fiber));
    }

    const auto problem = induce_problem(spec, cube);
    for (const State& x : {State{1, 1, 0}, State{0, 1, 0}, State{1, 0, 0}}) {
        const StateIndex s = cube.index_of(x);
        std::cout << "state " << cube.render(s) << ": certified set {";
        const auto opt = optimizer_set_ids(problem, s);
        for (std::size_t i = 0; i < opt.size(); ++i) std::cout << (i ? "," : "") << opt[i];
        std::cout << "}\n";
    }

    const auto report = transfer_check(spec, cube);
    std::cout << "admissible-output equivalence = optimizer quotient: "
              << (report.partitions_equal ? "yes" : "no") << " (" << report.class_count
              << " classes)\n";

    const auto profile = certification_profile(problem);
    std::cout << "relevant pass bits: {";
    for (std::size_t i = 0; i < profile.relevant.size(); ++i)
        std::cout << (i ? "," : "") << "p" << profile.relevant[i];
    std::cout << "}\n";
    std::cout << "p1 alone sufficient: " << (is_sufficient(problem, {1}) ? "yes" : "no")
              << "\n";
    return 0;
}
