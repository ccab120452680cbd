#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "relcert/certify.hpp"
#include "relcert/pairwise.hpp"
#include "relcert/problem.hpp"

namespace relcert {

/// Decision problem over an explicit state-slot list. Slots carry coordinate
/// tuples from a base product space but need not enumerate it exactly once,
/// which is what state duplication requires. Certification is defined on
/// slots verbatim: agreement on a coordinate set still means agreement of the
/// stored tuples.
class AbstractProblem {
public:
    AbstractProblem() = default;

    AbstractProblem(CoordinateSpace space, std::vector<State> slots,
                    std::vector<std::string> actions, std::vector<std::vector<Rat>> utility)
        : space_(std::move(space)), slots_(std::move(slots)), actions_(std::move(actions)),
          utility_(std::move(utility)) {
        if (actions_.empty()) throw ValidationError("action list is empty");
        std::map<std::string, int> seen;
        for (int a = 0; a < num_actions(); ++a)
            if (!seen.emplace(actions_[static_cast<std::size_t>(a)], a).second)
                throw ValidationError("duplicate action identifier '" +
                                      actions_[static_cast<std::size_t>(a)] + "'");
        if (utility_.size() != actions_.size())
            throw ValidationError("utility table has wrong number of action columns");
        for (const auto& col : utility_)
            if (col.size() != slots_.size())
                throw ValidationError("utility column not total on the slot list");
        for (const auto& slot : slots_)
            (void)space_.index_of(slot); // validates range and dimension
        index_by_id_ = std::move(seen);
    }

    static AbstractProblem from_problem(const DecisionProblem& p) {
        std::vector<State> slots;
        slots.reserve(p.num_states());
        for (StateIndex s = 0; s < p.num_states(); ++s) slots.push_back(p.space().state_at(s));
        return AbstractProblem(p.space(), std::move(slots), p.actions(), p.utility_table());
    }

    const CoordinateSpace& space() const { return space_; }
    StateIndex num_states() const { return slots_.size(); }
    int num_actions() const { return static_cast<int>(actions_.size()); }
    const std::vector<std::string>& actions() const { return actions_; }
    const std::string& action_id(int a) const { return actions_[static_cast<std::size_t>(a)]; }
    int action_index(const std::string& id) const {
        const auto it = index_by_id_.find(id);
        if (it == index_by_id_.end())
            throw ValidationError("unknown action identifier '" + id + "'");
        return it->second;
    }
    const Rat& utility(int a, StateIndex k) const {
        return utility_[static_cast<std::size_t>(a)][k];
    }
    const std::vector<std::vector<Rat>>& utility_table() const { return utility_; }
    const std::vector<State>& slots() const { return slots_; }
    int coord_value(StateIndex k, int i) const {
        return slots_[k][static_cast<std::size_t>(i)];
    }

    friend bool operator==(const AbstractProblem& a, const AbstractProblem& b) {
        return a.space_ == b.space_ && a.slots_ == b.slots_ && a.actions_ == b.actions_ &&
               a.utility_ == b.utility_;
    }

private:
    CoordinateSpace space_;
    std::vector<State> slots_;
    std::vector<std::string> actions_;
    std::vector<std::vector<Rat>> utility_; // utility_[action][slot]
    std::map<std::string, int> index_by_id_;
};

// ---------------------------------------------------------------------------
// Closure steps
// ---------------------------------------------------------------------------

/// Renames action identifiers in place: the utility column at position k
/// keeps its values and takes the identifier previously at position perm[k].
struct RelabelActionsStep {
    std::vector<int> perm;
};

/// Moves coordinate i to position perm[i]; domains and state tuples follow.
struct RelabelCoordsStep {
    std::vector<int> perm;
};

/// Slice-tier positive affine move: U' = alpha(x) + beta * U with an
/// action-independent pairwise bundle alpha and one positive scale.
struct AffineSliceStep {
    CoeffBundle alpha;
    Rat beta = Rat(1);
};

/// Statewise positive affine move on explicit utility tables.
struct AffineStatewiseStep {
    std::vector<Rat> alpha;
    std::vector<Rat> beta;
};

/// Appends a fresh action with a copied utility column.
struct DuplicateActionStep {
    std::string source;
};

/// Appends a copy of an existing state slot. Abstract tier only.
struct DuplicateStateStep {
    StateIndex source = 0;
};

/// Adds one binary coordinate that never affects utility.
struct ExtendIrrelevantStep {};

using ClosureStep = std::variant<RelabelActionsStep, RelabelCoordsStep, AffineSliceStep,
                                 AffineStatewiseStep, DuplicateActionStep, DuplicateStateStep,
                                 ExtendIrrelevantStep>;

inline std::string step_name(const ClosureStep& step) {
    struct Visitor {
        std::string operator()(const RelabelActionsStep&) const { return "relabel_actions"; }
        std::string operator()(const RelabelCoordsStep&) const { return "relabel_coords"; }
        std::string operator()(const AffineSliceStep&) const { return "affine"; }
        std::string operator()(const AffineStatewiseStep&) const { return "affine"; }
        std::string operator()(const DuplicateActionStep&) const { return "duplicate_action"; }
        std::string operator()(const DuplicateStateStep&) const { return "duplicate_state"; }
        std::string operator()(const ExtendIrrelevantStep&) const { return "extend_irrelevant"; }
    };
    return std::visit(Visitor{}, step);
}

/// How one step (or a whole trace) moves the base presentation's indices:
/// forward images of coordinates and states, and the identifier bijection on
/// the original actions.
struct StepTransport {
    std::vector<int> coord_map;          // original coordinate -> new coordinate
    std::vector<StateIndex> state_map;   // original state -> representative
    std::map<std::string, std::string> action_map;

    static StepTransport identity(int dimension, StateIndex states,
                                  const std::vector<std::string>& actions) {
        StepTransport t;
        t.coord_map.resize(static_cast<std::size_t>(dimension));
        for (int i = 0; i < dimension; ++i) t.coord_map[static_cast<std::size_t>(i)] = i;
        t.state_map.resize(states);
        for (StateIndex s = 0; s < states; ++s) t.state_map[s] = s;
        for (const auto& a : actions) t.action_map.emplace(a, a);
        return t;
    }

    /// Composition: `next` is relative to the object this transport maps into.
    StepTransport then(const StepTransport& next) const {
        StepTransport out;
        out.coord_map.reserve(coord_map.size());
        for (const int i : coord_map)
            out.coord_map.push_back(next.coord_map[static_cast<std::size_t>(i)]);
        out.state_map.reserve(state_map.size());
        for (const StateIndex s : state_map) out.state_map.push_back(next.state_map[s]);
        for (const auto& [from, mid] : action_map)
            out.action_map.emplace(from, next.action_map.at(mid));
        return out;
    }

    std::vector<int> transport_coords(const std::vector<int>& coords) const {
        std::vector<int> out;
        out.reserve(coords.size());
        for (const int i : coords) out.push_back(coord_map[static_cast<std::size_t>(i)]);
        std::sort(out.begin(), out.end());
        return out;
    }
};

/// An applied sequence of closure steps with materialized cumulative
/// transports, replayable against the recorded base.
struct ClosureTrace {
    std::vector<ClosureStep> steps;
    StepTransport transport;
};

namespace detail {

inline void validate_permutation(const std::vector<int>& perm, std::size_t n,
                                 const char* what) {
    if (perm.size() != n)
        throw ValidationError(std::string(what) + " permutation has wrong size");
    std::vector<bool> seen(n, false);
    for (const int v : perm) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)])
            throw ValidationError(std::string(what) + " permutation is not a bijection");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

inline std::string fresh_action_id(const std::vector<std::string>& existing,
                                   const std::string& source) {
    std::string candidate = source + "_dup";
    auto taken = [&](const std::string& id) {
        return std::find(existing.begin(), existing.end(), id) != existing.end();
    };
    int counter = 2;
    while (taken(candidate)) candidate = source + "_dup" + std::to_string(counter++);
    return candidate;
}

template <typename Obj>
[[noreturn]] void tier_error(const ClosureStep& step, const char* tier) {
    throw ValidationError("step '" + step_name(step) + "' is not supported on the " +
                          std::string(tier) + " tier");
}

inline std::map<std::string, std::string>
renaming_action_map(const std::vector<std::string>& actions, const std::vector<int>& perm) {
    std::map<std::string, std::string> m;
    for (std::size_t k = 0; k < actions.size(); ++k)
        m.emplace(actions[k], actions[static_cast<std::size_t>(perm[k])]);
    return m;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Step application: slice tier
// ---------------------------------------------------------------------------

inline std::pair<PairwiseSlice, StepTransport>
apply_step(const PairwiseSlice& slice, const ClosureStep& step,
           StateIndex budget = kDefaultStateBudget) {
    const int d = slice.dimension();
    const StateIndex cube = CoordinateSpace::binary_cube(d).state_count();
    check_budget(cube, budget);
    StepTransport t = StepTransport::identity(d, cube, slice.actions());

    if (const auto* relabel = std::get_if<RelabelActionsStep>(&step)) {
        detail::validate_permutation(relabel->perm, slice.actions().size(), "action");
        std::vector<std::string> ids(slice.actions().size());
        for (std::size_t k = 0; k < ids.size(); ++k)
            ids[k] = slice.actions()[static_cast<std::size_t>(relabel->perm[k])];
        t.action_map = detail::renaming_action_map(slice.actions(), relabel->perm);
        return {PairwiseSlice(d, std::move(ids), slice.all_coeffs()), t};
    }
    if (const auto* relabel = std::get_if<RelabelCoordsStep>(&step)) {
        detail::validate_permutation(relabel->perm, static_cast<std::size_t>(d), "coordinate");
        const auto& perm = relabel->perm;
        std::vector<CoeffBundle> coeffs;
        coeffs.reserve(static_cast<std::size_t>(slice.num_actions()));
        for (int a = 0; a < slice.num_actions(); ++a) {
            const auto& c = slice.coeffs(a);
            CoeffBundle nc = CoeffBundle::zero(d);
            nc.constant = c.constant;
            for (int i = 0; i < d; ++i)
                nc.unary[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
                    c.unary[static_cast<std::size_t>(i)];
            for (const auto& [key, w] : c.pairs) {
                int ni = perm[static_cast<std::size_t>(key.first)];
                int nj = perm[static_cast<std::size_t>(key.second)];
                PairTable nw = w;
                if (ni > nj) {
                    std::swap(ni, nj);
                    nw[0][1] = w[1][0];
                    nw[1][0] = w[0][1];
                }
                nc.pairs.emplace(CoordPair{ni, nj}, nw);
            }
            coeffs.push_back(std::move(nc));
        }
        t.coord_map = perm;
        const CoordinateSpace old_space = CoordinateSpace::binary_cube(d);
        for (StateIndex s = 0; s < cube; ++s) {
            const State x = old_space.state_at(s);
            State y(x.size());
            for (int i = 0; i < d; ++i)
                y[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
                    x[static_cast<std::size_t>(i)];
            t.state_map[s] = old_space.index_of(y);
        }
        return {PairwiseSlice(d, slice.actions(), std::move(coeffs)), t};
    }
    if (const auto* affine = std::get_if<AffineSliceStep>(&step)) {
        if (affine->beta <= 0)
            throw ValidationError("affine scale must be positive, got " +
                                  rat_to_string(affine->beta));
        if (static_cast<int>(affine->alpha.unary.size()) != d)
            throw ValidationError("affine alpha bundle has wrong dimension");
        for (const auto& [key, w] : affine->alpha.pairs) {
            (void)w;
            if (key.first < 0 || key.second >= d || key.first >= key.second)
                throw ValidationError("affine alpha pair key out of range");
        }
        std::vector<CoeffBundle> coeffs;
        coeffs.reserve(static_cast<std::size_t>(slice.num_actions()));
        for (int a = 0; a < slice.num_actions(); ++a) {
            const auto& c = slice.coeffs(a);
            CoeffBundle nc = CoeffBundle::zero(d);
            nc.constant = affine->beta * c.constant + affine->alpha.constant;
            for (int i = 0; i < d; ++i)
                for (int v = 0; v < 2; ++v)
                    nc.unary[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] =
                        affine->beta * c.unary[static_cast<std::size_t>(i)]
                                              [static_cast<std::size_t>(v)] +
                        affine->alpha.unary[static_cast<std::size_t>(i)]
                                           [static_cast<std::size_t>(v)];
            std::set<CoordPair> keys;
            for (const auto& [key, w] : c.pairs) (void)w, keys.insert(key);
            for (const auto& [key, w] : affine->alpha.pairs) (void)w, keys.insert(key);
            for (const auto& key : keys) {
                PairTable nw{};
                for (int xi = 0; xi < 2; ++xi)
                    for (int xj = 0; xj < 2; ++xj)
                        nw[static_cast<std::size_t>(xi)][static_cast<std::size_t>(xj)] =
                            affine->beta *
                                slice.pair_value(a, key.first, key.second, xi, xj) +
                            [&] {
                                const auto it = affine->alpha.pairs.find(key);
                                return it == affine->alpha.pairs.end()
                                           ? Rat(0)
                                           : it->second[static_cast<std::size_t>(xi)]
                                                       [static_cast<std::size_t>(xj)];
                            }();
                nc.pairs.emplace(key, nw);
            }
            coeffs.push_back(std::move(nc));
        }
        return {PairwiseSlice(d, slice.actions(), std::move(coeffs)), t};
    }
    if (const auto* dup = std::get_if<DuplicateActionStep>(&step)) {
        const int src = slice.action_index(dup->source);
        auto ids = slice.actions();
        ids.push_back(detail::fresh_action_id(ids, dup->source));
        auto coeffs = slice.all_coeffs();
        coeffs.push_back(coeffs[static_cast<std::size_t>(src)]);
        return {PairwiseSlice(d, std::move(ids), std::move(coeffs)), t};
    }
    if (std::holds_alternative<ExtendIrrelevantStep>(step)) {
        check_budget(cube * 2, budget);
        std::vector<CoeffBundle> coeffs;
        for (int a = 0; a < slice.num_actions(); ++a) {
            CoeffBundle nc = slice.coeffs(a);
            nc.unary.push_back(UnaryTable{Rat(0), Rat(0)});
            coeffs.push_back(std::move(nc));
        }
        for (StateIndex s = 0; s < cube; ++s) t.state_map[s] = s * 2;
        return {PairwiseSlice(d + 1, slice.actions(), std::move(coeffs)), t};
    }
    detail::tier_error<PairwiseSlice>(step, "slice");
}

// ---------------------------------------------------------------------------
// Step application: product-problem tier
// ---------------------------------------------------------------------------

inline std::pair<DecisionProblem, StepTransport>
apply_step(const DecisionProblem& p, const ClosureStep& step,
           StateIndex budget = kDefaultStateBudget) {
    const int d = p.dimension();
    StepTransport t = StepTransport::identity(d, p.num_states(), p.actions());

    if (const auto* relabel = std::get_if<RelabelActionsStep>(&step)) {
        detail::validate_permutation(relabel->perm, p.actions().size(), "action");
        std::vector<std::string> ids(p.actions().size());
        for (std::size_t k = 0; k < ids.size(); ++k)
            ids[k] = p.actions()[static_cast<std::size_t>(relabel->perm[k])];
        t.action_map = detail::renaming_action_map(p.actions(), relabel->perm);
        return {DecisionProblem(p.space(), std::move(ids), p.utility_table(), budget), t};
    }
    if (const auto* relabel = std::get_if<RelabelCoordsStep>(&step)) {
        detail::validate_permutation(relabel->perm, static_cast<std::size_t>(d), "coordinate");
        const auto& perm = relabel->perm;
        std::vector<int> new_domains(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            new_domains[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
                p.space().domain(i);
        const CoordinateSpace new_space(new_domains);
        std::vector<std::vector<Rat>> utility(
            p.actions().size(), std::vector<Rat>(p.num_states(), Rat(0)));
        for (StateIndex s = 0; s < p.num_states(); ++s) {
            const State x = p.space().state_at(s);
            State y(x.size());
            for (int i = 0; i < d; ++i)
                y[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
                    x[static_cast<std::size_t>(i)];
            const StateIndex ns = new_space.index_of(y);
            t.state_map[s] = ns;
            for (int a = 0; a < p.num_actions(); ++a)
                utility[static_cast<std::size_t>(a)][ns] = p.utility(a, s);
        }
        t.coord_map = perm;
        return {DecisionProblem(new_space, p.actions(), std::move(utility), budget), t};
    }
    if (const auto* affine = std::get_if<AffineStatewiseStep>(&step)) {
        if (affine->alpha.size() != p.num_states() || affine->beta.size() != p.num_states())
            throw ValidationError("statewise affine tables must be total on the state space");
        for (StateIndex s = 0; s < p.num_states(); ++s)
            if (affine->beta[s] <= 0)
                throw ValidationError("affine scale must be positive at state " +
                                      p.space().render(s));
        auto utility = p.utility_table();
        for (auto& col : utility)
            for (StateIndex s = 0; s < p.num_states(); ++s)
                col[s] = affine->alpha[s] + affine->beta[s] * col[s];
        return {DecisionProblem(p.space(), p.actions(), std::move(utility), budget), t};
    }
    if (const auto* dup = std::get_if<DuplicateActionStep>(&step)) {
        const int src = p.action_index(dup->source);
        auto ids = p.actions();
        ids.push_back(detail::fresh_action_id(ids, dup->source));
        auto utility = p.utility_table();
        utility.push_back(utility[static_cast<std::size_t>(src)]);
        return {DecisionProblem(p.space(), std::move(ids), std::move(utility), budget), t};
    }
    if (std::holds_alternative<ExtendIrrelevantStep>(step)) {
        auto domains = p.space().domains();
        domains.push_back(2);
        const CoordinateSpace new_space(domains);
        check_budget(new_space.state_count(), budget);
        std::vector<std::vector<Rat>> utility(p.actions().size());
        for (int a = 0; a < p.num_actions(); ++a) {
            auto& col = utility[static_cast<std::size_t>(a)];
            col.reserve(new_space.state_count());
            for (StateIndex s = 0; s < p.num_states(); ++s) {
                col.push_back(p.utility(a, s));
                col.push_back(p.utility(a, s));
            }
        }
        for (StateIndex s = 0; s < p.num_states(); ++s) t.state_map[s] = s * 2;
        return {DecisionProblem(new_space, p.actions(), std::move(utility), budget), t};
    }
    detail::tier_error<DecisionProblem>(step, "product-problem");
}

// ---------------------------------------------------------------------------
// Step application: abstract tier
// ---------------------------------------------------------------------------

inline std::pair<AbstractProblem, StepTransport>
apply_step(const AbstractProblem& p, const ClosureStep& step,
           StateIndex budget = kDefaultStateBudget) {
    const int d = p.space().dimension();
    check_budget(p.num_states(), budget);
    StepTransport t = StepTransport::identity(d, p.num_states(), p.actions());

    if (const auto* relabel = std::get_if<RelabelActionsStep>(&step)) {
        detail::validate_permutation(relabel->perm, p.actions().size(), "action");
        std::vector<std::string> ids(p.actions().size());
        for (std::size_t k = 0; k < ids.size(); ++k)
            ids[k] = p.actions()[static_cast<std::size_t>(relabel->perm[k])];
        t.action_map = detail::renaming_action_map(p.actions(), relabel->perm);
        return {AbstractProblem(p.space(), p.slots(), std::move(ids), p.utility_table()), t};
    }
    if (const auto* relabel = std::get_if<RelabelCoordsStep>(&step)) {
        detail::validate_permutation(relabel->perm, static_cast<std::size_t>(d), "coordinate");
        const auto& perm = relabel->perm;
        std::vector<int> new_domains(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            new_domains[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
                p.space().domain(i);
        std::vector<State> slots;
        slots.reserve(p.num_states());
        for (const auto& x : p.slots()) {
            State y(x.size());
            for (int i = 0; i < d; ++i)
                y[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
                    x[static_cast<std::size_t>(i)];
            slots.push_back(std::move(y));
        }
        t.coord_map = perm;
        return {AbstractProblem(CoordinateSpace(new_domains), std::move(slots), p.actions(),
                                p.utility_table()),
                t};
    }
    if (const auto* affine = std::get_if<AffineStatewiseStep>(&step)) {
        if (affine->alpha.size() != p.num_states() || affine->beta.size() != p.num_states())
            throw ValidationError("statewise affine tables must be total on the slot list");
        for (StateIndex s = 0; s < p.num_states(); ++s)
            if (affine->beta[s] <= 0)
                throw ValidationError("affine scale must be positive at slot " +
                                      std::to_string(s));
        auto utility = p.utility_table();
        for (auto& col : utility)
            for (StateIndex s = 0; s < p.num_states(); ++s)
                col[s] = affine->alpha[s] + affine->beta[s] * col[s];
        return {AbstractProblem(p.space(), p.slots(), p.actions(), std::move(utility)), t};
    }
    if (const auto* dup = std::get_if<DuplicateActionStep>(&step)) {
        const int src = p.action_index(dup->source);
        auto ids = p.actions();
        ids.push_back(detail::fresh_action_id(ids, dup->source));
        auto utility = p.utility_table();
        utility.push_back(utility[static_cast<std::size_t>(src)]);
        return {AbstractProblem(p.space(), p.slots(), std::move(ids), std::move(utility)), t};
    }
    if (const auto* dup = std::get_if<DuplicateStateStep>(&step)) {
        if (dup->source >= p.num_states())
            throw ValidationError("duplicate-state source slot out of range");
        auto slots = p.slots();
        slots.push_back(slots[dup->source]);
        auto utility = p.utility_table();
        for (auto& col : utility) col.push_back(col[dup->source]);
        return {AbstractProblem(p.space(), std::move(slots), p.actions(), std::move(utility)),
                t};
    }
    if (std::holds_alternative<ExtendIrrelevantStep>(step)) {
        auto domains = p.space().domains();
        domains.push_back(2);
        check_budget(p.num_states() * 2, budget);
        std::vector<State> slots;
        slots.reserve(p.num_states() * 2);
        for (const auto& x : p.slots()) {
            for (int b = 0; b < 2; ++b) {
                State y = x;
                y.push_back(b);
                slots.push_back(std::move(y));
            }
        }
        std::vector<std::vector<Rat>> utility(p.actions().size());
        for (int a = 0; a < p.num_actions(); ++a) {
            auto& col = utility[static_cast<std::size_t>(a)];
            col.reserve(p.num_states() * 2);
            for (StateIndex s = 0; s < p.num_states(); ++s) {
                col.push_back(p.utility(a, s));
                col.push_back(p.utility(a, s));
            }
        }
        for (StateIndex s = 0; s < p.num_states(); ++s) t.state_map[s] = s * 2;
        return {AbstractProblem(CoordinateSpace(domains), std::move(slots), p.actions(),
                                std::move(utility)),
                t};
    }
    detail::tier_error<AbstractProblem>(step, "abstract");
}

// ---------------------------------------------------------------------------
// Trace application
// ---------------------------------------------------------------------------

template <typename Obj>
struct TraceApplication {
    Obj result;
    ClosureTrace trace;
};

inline StepTransport identity_transport(const PairwiseSlice& s) {
    return StepTransport::identity(
        s.dimension(), CoordinateSpace::binary_cube(s.dimension()).state_count(), s.actions());
}
inline StepTransport identity_transport(const DecisionProblem& p) {
    return StepTransport::identity(p.dimension(), p.num_states(), p.actions());
}
inline StepTransport identity_transport(const AbstractProblem& p) {
    return StepTransport::identity(p.space().dimension(), p.num_states(), p.actions());
}

template <typename Obj>
TraceApplication<Obj> apply_trace(const Obj& base, const std::vector<ClosureStep>& steps,
                                  StateIndex budget = kDefaultStateBudget) {
    Obj current = base;
    StepTransport cumulative = identity_transport(base);
    for (std::size_t idx = 0; idx < steps.size(); ++idx) {
        try {
            auto [next, transport] = apply_step(current, steps[idx], budget);
            cumulative = cumulative.then(transport);
            current = std::move(next);
        } catch (const ValidationError& e) {
            throw ValidationError("trace step " + std::to_string(idx) + " (" +
                                  step_name(steps[idx]) + "): " + e.what());
        }
    }
    ClosureTrace trace;
    trace.steps = steps;
    trace.transport = std::move(cumulative);
    return {std::move(current), std::move(trace)};
}

// ---------------------------------------------------------------------------
// Certification-invariance verification
// ---------------------------------------------------------------------------

struct InvarianceOptions {
    int subset_cap = kDefaultSubsetCap; // full 2^d subset scan up to this dimension
    int sampled_subsets = 32;           // sample size beyond the cap
    std::uint64_t seed = 0;
    StateIndex budget = kDefaultStateBudget;
};

struct InvarianceReport {
    std::size_t subsets_checked = 0;
    bool full_subset_enumeration = false;
    std::size_t relevance_checks = 0;
    std::size_t new_coordinates = 0;
    bool affine_optimizer_checked = false;
};

inline bool trace_is_affine_only(const ClosureTrace& trace) {
    for (const auto& step : trace.steps)
        if (!std::holds_alternative<AffineSliceStep>(step) &&
            !std::holds_alternative<AffineStatewiseStep>(step))
            return false;
    return true;
}

namespace detail {

inline std::string coords_to_string(const std::vector<int>& coords) {
    std::string out = "{";
    for (std::size_t k = 0; k < coords.size(); ++k)
        out += (k ? "," : "") + std::to_string(coords[k]);
    return out + "}";
}

/// Brute-force check that the trace transport carries the base certification
/// structure onto the result, per the closure-transport table.
template <typename BaseView, typename ResultView>
InvarianceReport verify_invariance_views(const BaseView& base, const ResultView& result,
                                         const ClosureTrace& trace, bool affine_only,
                                         const InvarianceOptions& opts) {
    const int base_d = base.space().dimension();
    const int result_d = result.space().dimension();
    if (static_cast<int>(trace.transport.coord_map.size()) != base_d)
        throw ValidationError("trace transport does not match the base dimension");
    InvarianceReport report;
    const QuotientPartition qb = quotient(base);
    const QuotientPartition qr = quotient(result);

    std::vector<std::vector<int>> subsets;
    if (full_subset_scan_feasible(base_d, opts.subset_cap)) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << base_d); ++mask)
            subsets.push_back(subset_from_mask(mask, base_d));
        report.full_subset_enumeration = true;
    } else {
        std::set<std::vector<int>> sampled;
        sampled.insert({});
        std::vector<int> full;
        for (int i = 0; i < base_d; ++i) full.push_back(i);
        sampled.insert(std::move(full));
        for (int i = 0; i < base_d; ++i) sampled.insert({i});
        std::mt19937_64 rng(opts.seed);
        for (int k = 0; k < opts.sampled_subsets; ++k) {
            std::vector<int> subset;
            for (int i = 0; i < base_d; ++i)
                if (rng() % 2) subset.push_back(i);
            sampled.insert(std::move(subset));
        }
        subsets.assign(sampled.begin(), sampled.end());
    }
    for (const auto& coords : subsets) {
        const bool suff_base = is_sufficient_given_quotient(base, coords, qb);
        const auto lifted = trace.transport.transport_coords(coords);
        const bool suff_result = is_sufficient_given_quotient(result, lifted, qr);
        if (suff_base != suff_result)
            throw TheoryViolation("sufficiency not preserved under transport: base " +
                                  coords_to_string(coords) + " -> result " +
                                  coords_to_string(lifted));
        ++report.subsets_checked;
    }

    for (int i = 0; i < base_d; ++i) {
        std::vector<int> base_rest;
        for (int j = 0; j < base_d; ++j)
            if (j != i) base_rest.push_back(j);
        const int ti = trace.transport.coord_map[static_cast<std::size_t>(i)];
        std::vector<int> result_rest;
        for (int j = 0; j < result_d; ++j)
            if (j != ti) result_rest.push_back(j);
        const bool rel_base = !is_sufficient_given_quotient(base, base_rest, qb);
        const bool rel_result = !is_sufficient_given_quotient(result, result_rest, qr);
        if (rel_base != rel_result)
            throw TheoryViolation("relevance not preserved for base coordinate " +
                                  std::to_string(i));
        ++report.relevance_checks;
    }

    std::vector<bool> is_original(static_cast<std::size_t>(result_d), false);
    for (const int j : trace.transport.coord_map) is_original[static_cast<std::size_t>(j)] = true;
    for (int j = 0; j < result_d; ++j) {
        if (is_original[static_cast<std::size_t>(j)]) continue;
        std::vector<int> rest;
        for (int k = 0; k < result_d; ++k)
            if (k != j) rest.push_back(k);
        if (!is_sufficient_given_quotient(result, rest, qr))
            throw TheoryViolation("extension coordinate " + std::to_string(j) +
                                  " is relevant in the result");
        ++report.new_coordinates;
    }

    if (affine_only) {
        if (base.num_states() != result.num_states() ||
            base.num_actions() != result.num_actions())
            throw TheoryViolation("affine trace changed the problem shape");
        for (StateIndex s = 0; s < base.num_states(); ++s)
            if (detail::optimizer_set_at(base, s) != detail::optimizer_set_at(result, s))
                throw TheoryViolation("affine trace changed the optimizer set at state " +
                                      std::to_string(s));
        report.affine_optimizer_checked = true;
    }
    return report;
}

} // namespace detail

template <typename Problem>
InvarianceReport verify_invariance(const Problem& base, const Problem& result,
                                   const ClosureTrace& trace,
                                   const InvarianceOptions& opts = {}) {
    return detail::verify_invariance_views(base, result, trace, trace_is_affine_only(trace),
                                           opts);
}

inline InvarianceReport verify_invariance(const PairwiseSlice& base,
                                          const PairwiseSlice& result,
                                          const ClosureTrace& trace,
                                          const InvarianceOptions& opts = {}) {
    return detail::verify_invariance_views(base.expand(opts.budget),
                                           result.expand(opts.budget), trace,
                                           trace_is_affine_only(trace), opts);
}

} // namespace relcert
