#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relcert/certify.hpp"
#include "relcert/pairwise.hpp"
#include "relcert/problem.hpp"

namespace relcert {

enum class Role { Core, Lifted, Degenerate };

inline const char* to_string(Role r) {
    switch (r) {
        case Role::Core: return "core";
        case Role::Lifted: return "lifted";
        case Role::Degenerate: return "degenerate";
    }
    return "?";
}

struct FamilyRecord {
    std::string family;
    Role role = Role::Core;
    std::string mechanism;
};

/// The fifteen-family landscape with its 6/4/5 role partition and the
/// projection onto eight primitive mechanisms. Statically embedded;
/// check_table_integrity() re-derives the counts.
inline const std::vector<FamilyRecord>& landscape_table() {
    static const std::vector<FamilyRecord> table = {
        {"bounded actions", Role::Core, "bounded actions"},
        {"separable utility", Role::Core, "separable utility"},
        {"low tensor rank", Role::Core, "low tensor rank"},
        {"tree structure", Role::Core, "tree structure"},
        {"bounded treewidth", Role::Core, "bounded treewidth"},
        {"coordinate symmetry", Role::Core, "coordinate symmetry"},
        {"product distribution", Role::Lifted, "separable utility"},
        {"bounded support", Role::Lifted, "bounded actions"},
        {"bounded horizon", Role::Lifted, "bounded treewidth"},
        {"full observability", Role::Lifted, "tree structure"},
        {"single action", Role::Degenerate, "constant-optimizer collapse"},
        {"strict global dominance", Role::Degenerate, "constant-optimizer collapse"},
        {"constant optimal set", Role::Degenerate, "constant-optimizer collapse"},
        {"multiplicative-separable constant-sign", Role::Degenerate,
         "constant-optimizer collapse"},
        {"bounded state space", Role::Degenerate, "finite explicit enumeration"},
    };
    return table;
}

inline void check_table_integrity() {
    const auto& table = landscape_table();
    if (table.size() != 15) throw TheoryViolation("landscape table must have 15 rows");
    std::map<Role, int> counts;
    std::set<std::string> mechanisms, families;
    for (const auto& row : table) {
        ++counts[row.role];
        mechanisms.insert(row.mechanism);
        if (!families.insert(row.family).second)
            throw TheoryViolation("duplicate family row '" + row.family + "'");
    }
    if (counts[Role::Core] != 6 || counts[Role::Lifted] != 4 || counts[Role::Degenerate] != 5)
        throw TheoryViolation("landscape role partition is not 6/4/5");
    if (mechanisms.size() != 8)
        throw TheoryViolation("mechanism projection must have size 8, got " +
                              std::to_string(mechanisms.size()));
}

/// Detectors for the mechanisms decidable at desk scale. Each corresponds to
/// one row of the landscape table; low tensor rank and general bounded
/// treewidth have no detectors.
enum class Detector {
    SingleAction,
    ConstantOptimizer,
    StrictGlobalDominance,
    BoundedActions,     // takes k
    Separable,          // slice only
    CoordinateSymmetric, // slice only
    ParentTree,         // slice only
    BoundedStateSpace,  // takes k
};

inline const char* to_string(Detector d) {
    switch (d) {
        case Detector::SingleAction: return "single_action";
        case Detector::ConstantOptimizer: return "constant_optimizer";
        case Detector::StrictGlobalDominance: return "strict_global_dominance";
        case Detector::BoundedActions: return "bounded_actions";
        case Detector::Separable: return "separable";
        case Detector::CoordinateSymmetric: return "coordinate_symmetric";
        case Detector::ParentTree: return "parent_tree";
        case Detector::BoundedStateSpace: return "bounded_state_space";
    }
    return "?";
}

inline const std::string& family_of_detector(Detector d) {
    static const std::map<Detector, std::string> families = {
        {Detector::SingleAction, "single action"},
        {Detector::ConstantOptimizer, "constant optimal set"},
        {Detector::StrictGlobalDominance, "strict global dominance"},
        {Detector::BoundedActions, "bounded actions"},
        {Detector::Separable, "separable utility"},
        {Detector::CoordinateSymmetric, "coordinate symmetry"},
        {Detector::ParentTree, "tree structure"},
        {Detector::BoundedStateSpace, "bounded state space"},
    };
    return families.at(d);
}

/// Width-<=1 tree decomposition: bags of size at most two arranged in a tree.
struct TreeDecomposition {
    std::vector<std::vector<int>> bags;
    std::vector<std::pair<std::size_t, std::size_t>> tree_edges;
};

struct DetectResult {
    bool hit = false;
    std::optional<TreeDecomposition> decomposition; // ParentTree only
};

namespace detail {

template <typename Problem>
bool strict_global_dominance(const Problem& p) {
    for (int a = 0; a < p.num_actions(); ++a) {
        bool dominates = true;
        for (StateIndex s = 0; s < p.num_states() && dominates; ++s)
            for (int b = 0; b < p.num_actions() && dominates; ++b)
                if (b != a && !(p.utility(a, s) > p.utility(b, s))) dominates = false;
        if (dominates) return true;
    }
    return false;
}

/// Builds the width-<=1 decomposition for a parent forest: one bag {parent, v}
/// per parented vertex, singleton bags for isolated vertices, child bags
/// attached where their parent already lives, and component anchors chained.
inline std::optional<TreeDecomposition>
parent_tree_decomposition(int d, const std::vector<std::vector<int>>& parents_of) {
    std::vector<int> parent(static_cast<std::size_t>(d), -1);
    std::vector<bool> has_child(static_cast<std::size_t>(d), false);
    for (int v = 0; v < d; ++v) {
        if (parents_of[static_cast<std::size_t>(v)].size() > 1) return std::nullopt;
        if (!parents_of[static_cast<std::size_t>(v)].empty()) {
            parent[static_cast<std::size_t>(v)] = parents_of[static_cast<std::size_t>(v)][0];
            has_child[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])] = true;
        }
    }
    TreeDecomposition td;
    std::vector<int> own_bag(static_cast<std::size_t>(d), -1);
    std::vector<int> first_child(static_cast<std::size_t>(d), -1);
    for (int v = 0; v < d; ++v) {
        const int p = parent[static_cast<std::size_t>(v)];
        if (p >= 0) {
            own_bag[static_cast<std::size_t>(v)] = static_cast<int>(td.bags.size());
            if (first_child[static_cast<std::size_t>(p)] == -1)
                first_child[static_cast<std::size_t>(p)] = v;
            td.bags.push_back({p, v});
        } else if (!has_child[static_cast<std::size_t>(v)]) {
            own_bag[static_cast<std::size_t>(v)] = static_cast<int>(td.bags.size());
            td.bags.push_back({v});
        }
    }
    auto anchor = [&](int v) {
        return own_bag[static_cast<std::size_t>(v)] != -1
                   ? own_bag[static_cast<std::size_t>(v)]
                   : own_bag[static_cast<std::size_t>(first_child[static_cast<std::size_t>(v)])];
    };
    for (int v = 0; v < d; ++v) {
        const int p = parent[static_cast<std::size_t>(v)];
        if (p < 0) continue;
        const int mine = own_bag[static_cast<std::size_t>(v)];
        const int theirs = anchor(p);
        if (mine != theirs)
            td.tree_edges.emplace_back(static_cast<std::size_t>(theirs),
                                       static_cast<std::size_t>(mine));
    }
    // Chain the anchors of distinct components so the bag graph is a tree.
    std::vector<int> component_anchor;
    for (int v = 0; v < d; ++v)
        if (parent[static_cast<std::size_t>(v)] < 0) component_anchor.push_back(anchor(v));
    for (std::size_t k = 1; k < component_anchor.size(); ++k)
        td.tree_edges.emplace_back(static_cast<std::size_t>(component_anchor[k - 1]),
                                   static_cast<std::size_t>(component_anchor[k]));
    return td;
}

} // namespace detail

inline DetectResult detect(const PairwiseSlice& slice, Detector detector, std::uint64_t k = 0,
                           StateIndex budget = kDefaultStateBudget) {
    DetectResult out;
    switch (detector) {
        case Detector::SingleAction:
            out.hit = slice.num_actions() == 1;
            return out;
        case Detector::ConstantOptimizer:
            out.hit = quotient(slice.expand(budget)).class_count() == 1;
            return out;
        case Detector::StrictGlobalDominance:
            out.hit = detail::strict_global_dominance(slice.expand(budget));
            return out;
        case Detector::BoundedActions:
            if (k == 0) throw ValidationError("bounded_actions needs a bound k >= 1");
            out.hit = static_cast<std::uint64_t>(slice.num_actions()) <= k;
            return out;
        case Detector::Separable: {
            out.hit = true;
            for (int i = 0; i < slice.dimension() && out.hit; ++i)
                for (int j = i + 1; j < slice.dimension() && out.hit; ++j)
                    for (int a = 0; a < slice.num_actions(); ++a)
                        if (mixed_difference(slice, i, j, a) != 0) {
                            out.hit = false;
                            break;
                        }
            return out;
        }
        case Detector::CoordinateSymmetric:
            out.hit = symmetry_check(slice, budget);
            return out;
        case Detector::ParentTree: {
            const auto g = interaction_graph(slice, GraphMode::Decision, budget);
            std::vector<std::vector<int>> parents_of(
                static_cast<std::size_t>(slice.dimension()));
            for (const auto& e : g.edges)
                parents_of[static_cast<std::size_t>(e.j)].push_back(e.i);
            auto td = detail::parent_tree_decomposition(slice.dimension(), parents_of);
            out.hit = td.has_value();
            out.decomposition = std::move(td);
            return out;
        }
        case Detector::BoundedStateSpace:
            if (k == 0) throw ValidationError("bounded_state_space needs a bound k >= 1");
            out.hit = slice.dimension() < 63 && (StateIndex(1) << slice.dimension()) <= k;
            return out;
    }
    throw ValidationError("unknown detector");
}

inline DetectResult detect(const DecisionProblem& p, Detector detector, std::uint64_t k = 0) {
    DetectResult out;
    switch (detector) {
        case Detector::SingleAction:
            out.hit = p.num_actions() == 1;
            return out;
        case Detector::ConstantOptimizer:
            out.hit = quotient(p).class_count() == 1;
            return out;
        case Detector::StrictGlobalDominance:
            out.hit = detail::strict_global_dominance(p);
            return out;
        case Detector::BoundedActions:
            if (k == 0) throw ValidationError("bounded_actions needs a bound k >= 1");
            out.hit = static_cast<std::uint64_t>(p.num_actions()) <= k;
            return out;
        case Detector::BoundedStateSpace:
            if (k == 0) throw ValidationError("bounded_state_space needs a bound k >= 1");
            out.hit = p.num_states() <= k;
            return out;
        case Detector::Separable:
        case Detector::CoordinateSymmetric:
        case Detector::ParentTree:
            throw ValidationError(std::string("detector '") + to_string(detector) +
                                  "' requires a pairwise slice");
    }
    throw ValidationError("unknown detector");
}

struct RoleClassification {
    std::set<Role> roles;
    std::map<std::string, Role> family_roles; // family -> role, per hit

    bool unclassified() const { return roles.empty(); }
};

/// Maps detector hits through the landscape table; multiple hits report all
/// roles, no hit reports unclassified (the basis is not a complete
/// classification).
inline RoleClassification classify_role(const std::vector<Detector>& hits) {
    check_table_integrity();
    RoleClassification out;
    for (const Detector hit : hits) {
        const auto& family = family_of_detector(hit);
        for (const auto& row : landscape_table())
            if (row.family == family) {
                out.roles.insert(row.role);
                out.family_roles.emplace(family, row.role);
            }
    }
    return out;
}

} // namespace relcert
