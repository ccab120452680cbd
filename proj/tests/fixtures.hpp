#pragma once

#include <vector>

#include "relcert/pairwise.hpp"
#include "relcert/problem.hpp"

namespace relcert::testing {

/// Two-bit, two-action problem with U(a,x) = x0 and U(b,x) = 0.
inline DecisionProblem standing_example() {
    const CoordinateSpace space({2, 2});
    std::vector<std::vector<Rat>> utility = {
        {Rat(0), Rat(0), Rat(1), Rat(1)}, // a: x0
        {Rat(0), Rat(0), Rat(0), Rat(0)}, // b: 0
    };
    return DecisionProblem(space, {"a", "b"}, std::move(utility));
}

inline DecisionProblem constant_problem(std::vector<int> domains, int num_actions = 2) {
    const CoordinateSpace space(std::move(domains));
    std::vector<std::vector<Rat>> utility(
        static_cast<std::size_t>(num_actions),
        std::vector<Rat>(space.state_count(), Rat(7, 2)));
    std::vector<std::string> actions;
    for (int a = 0; a < num_actions; ++a) actions.push_back("act" + std::to_string(a));
    return DecisionProblem(space, std::move(actions), std::move(utility));
}

/// U(a,x) = 2 x0 x1, U(b,x) = 0 on a binary cube of dimension d >= 3.
inline PairwiseSlice dominant_pair_base(int d = 3) {
    std::vector<CoeffBundle> coeffs{CoeffBundle::pair_term(d, 0, 1, Rat(2)),
                                    CoeffBundle::zero(d)};
    return PairwiseSlice(d, {"a", "b"}, std::move(coeffs));
}

/// The action-independent pair term 3 x1 x2 from the worked orbit example.
inline CoeffBundle orbit_alpha(int d = 3) { return CoeffBundle::pair_term(d, 1, 2, Rat(3)); }

} // namespace relcert::testing
