#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "relcert/certify.hpp"
#include "relcert/problem.hpp"

namespace relcert {

/// Total labeling of a state space, one label per state in lexicographic
/// order. The label alphabet is whatever appears, in first-appearance order.
struct Labeling {
    std::vector<std::string> labels;

    std::vector<std::string> alphabet() const {
        std::vector<std::string> out;
        std::set<std::string> seen;
        for (const auto& l : labels)
            if (seen.insert(l).second) out.push_back(l);
        return out;
    }
};

/// Indicator realization: action set is the label range, utility 1 on the
/// designated action and 0 elsewhere, so Opt(s) = {phi(s)} and the quotient
/// is exactly the kernel partition of phi.
inline DecisionProblem realize_labeling(const CoordinateSpace& space, const Labeling& phi,
                                        StateIndex budget = kDefaultStateBudget) {
    check_budget(space.state_count(), budget);
    if (phi.labels.size() != space.state_count())
        throw ValidationError("labeling is not total on the state space (" +
                              std::to_string(phi.labels.size()) + " labels for " +
                              std::to_string(space.state_count()) + " states)");
    const auto actions = phi.alphabet();
    if (actions.empty()) throw ValidationError("labeling over an empty state space");
    std::map<std::string, int> index;
    for (int a = 0; a < static_cast<int>(actions.size()); ++a)
        index.emplace(actions[static_cast<std::size_t>(a)], a);
    std::vector<std::vector<Rat>> utility(actions.size(),
                                          std::vector<Rat>(space.state_count(), Rat(0)));
    for (StateIndex s = 0; s < space.state_count(); ++s)
        utility[static_cast<std::size_t>(index.at(phi.labels[s]))][s] = Rat(1);
    return DecisionProblem(space, actions, std::move(utility), budget);
}

/// Realizes an arbitrary equivalence relation, given as a list of state
/// blocks, as the optimizer quotient of an indicator problem.
inline DecisionProblem realize_equivalence(const CoordinateSpace& space,
                                           const std::vector<std::vector<StateIndex>>& blocks,
                                           StateIndex budget = kDefaultStateBudget) {
    check_budget(space.state_count(), budget);
    std::vector<std::int64_t> block_of(space.state_count(), -1);
    std::string offenders;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (const StateIndex s : blocks[b]) {
            if (s >= space.state_count()) {
                offenders += " state " + std::to_string(s) + " out of range;";
                continue;
            }
            if (block_of[s] != -1)
                offenders += " state " + space.render(s) + " in blocks " +
                             std::to_string(block_of[s]) + " and " + std::to_string(b) + ";";
            block_of[s] = static_cast<std::int64_t>(b);
        }
    }
    for (StateIndex s = 0; s < space.state_count(); ++s)
        if (block_of[s] == -1) offenders += " state " + space.render(s) + " missing;";
    if (!offenders.empty())
        throw ValidationError("blocks do not partition the state space:" + offenders);
    Labeling phi;
    phi.labels.reserve(space.state_count());
    for (StateIndex s = 0; s < space.state_count(); ++s)
        phi.labels.push_back("class_" + std::to_string(block_of[s]));
    return realize_labeling(space, phi, budget);
}

/// The partition carried by a quotient, as blocks of states in class order.
inline std::vector<std::vector<StateIndex>> partition_blocks(const QuotientPartition& q) {
    std::vector<std::vector<StateIndex>> blocks(q.class_count());
    for (StateIndex s = 0; s < q.class_of.size(); ++s)
        blocks[q.class_of[s]].push_back(s);
    return blocks;
}

} // namespace relcert
