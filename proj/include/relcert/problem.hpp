#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "relcert/rational.hpp"
#include "relcert/space.hpp"

namespace relcert {

/// Finite decision problem: product state space, ordered action identifiers,
/// and a total exact-rational utility table. Immutable after construction;
/// every operation on it is a pure function.
class DecisionProblem {
public:
    DecisionProblem() = default;

    /// The table holds one column per action in declaration order, each column
    /// listing utilities in lexicographic state order.
    DecisionProblem(CoordinateSpace space, std::vector<std::string> actions,
                    std::vector<std::vector<Rat>> utility,
                    StateIndex budget = kDefaultStateBudget)
        : space_(std::move(space)), actions_(std::move(actions)), utility_(std::move(utility)) {
        check_budget(space_.state_count(), budget);
        if (actions_.empty()) throw ValidationError("action list is empty");
        std::map<std::string, int> seen;
        for (int a = 0; a < num_actions(); ++a) {
            if (!seen.emplace(actions_[static_cast<std::size_t>(a)], a).second)
                throw ValidationError("duplicate action identifier '" +
                                      actions_[static_cast<std::size_t>(a)] + "'");
        }
        if (utility_.size() != actions_.size())
            throw ValidationError("utility table has wrong number of action columns");
        for (const auto& col : utility_)
            if (col.size() != space_.state_count())
                throw ValidationError("utility column not total on the state space");
        index_by_id_ = std::move(seen);
    }

    const CoordinateSpace& space() const { return space_; }
    int dimension() const { return space_.dimension(); }
    StateIndex num_states() const { return space_.state_count(); }
    int num_actions() const { return static_cast<int>(actions_.size()); }
    const std::vector<std::string>& actions() const { return actions_; }
    const std::string& action_id(int a) const { return actions_[static_cast<std::size_t>(a)]; }

    int action_index(const std::string& id) const {
        const auto it = index_by_id_.find(id);
        if (it == index_by_id_.end())
            throw ValidationError("unknown action identifier '" + id + "'");
        return it->second;
    }

    const Rat& utility(int a, StateIndex s) const {
        return utility_[static_cast<std::size_t>(a)][s];
    }
    const std::vector<std::vector<Rat>>& utility_table() const { return utility_; }

    int coord_value(StateIndex s, int i) const { return space_.coord_value(s, i); }

    friend bool operator==(const DecisionProblem& a, const DecisionProblem& b) {
        return a.space_ == b.space_ && a.actions_ == b.actions_ && a.utility_ == b.utility_;
    }

private:
    CoordinateSpace space_;
    std::vector<std::string> actions_;
    std::vector<std::vector<Rat>> utility_; // utility_[action][state]
    std::map<std::string, int> index_by_id_;
};

} // namespace relcert
