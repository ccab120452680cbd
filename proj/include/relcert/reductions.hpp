#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relcert/certify.hpp"
#include "relcert/pairwise.hpp"
#include "relcert/problem.hpp"

namespace relcert {

/// Reserved identifier for the totalizing failure token; rendered as the
/// bottom symbol in human-facing reports.
inline constexpr const char* kFailureTokenId = "_bottom";
inline constexpr const char* kFailureTokenDisplay = "⊥";

enum class SpecVariant { Deterministic, SetValued, Relational };

inline const char* to_string(SpecVariant v) {
    switch (v) {
        case SpecVariant::Deterministic: return "deterministic";
        case SpecVariant::SetValued: return "set_valued";
        case SpecVariant::Relational: return "relational";
    }
    return "?";
}

/// A state-indexed admissible-output specification over a finite ordered
/// output universe, in one of three shapes: a deterministic payload map, a
/// set-valued payload with a strict allowed/blocked gap, or a relation given
/// by admissible (state, output) pairs.
struct AdmissibilitySpec {
    SpecVariant variant = SpecVariant::Deterministic;
    std::vector<std::string> outputs;

    std::vector<int> deterministic_map;               // [state] -> output index
    std::vector<std::set<int>> set_valued;            // [state] -> output indices
    std::vector<std::pair<StateIndex, int>> pairs;    // relational

    Rat u_allowed = Rat(1);
    Rat u_blocked = Rat(0);

    void validate(const CoordinateSpace& space) const {
        std::set<std::string> seen;
        for (const auto& id : outputs) {
            if (!seen.insert(id).second)
                throw ValidationError("duplicate output identifier '" + id + "'");
            if (id == kFailureTokenId || id == kFailureTokenDisplay)
                throw ValidationError("output identifier collides with the failure token");
        }
        const auto n_out = static_cast<int>(outputs.size());
        switch (variant) {
            case SpecVariant::Deterministic:
                if (deterministic_map.size() != space.state_count())
                    throw ValidationError("deterministic payload is not total");
                for (const int o : deterministic_map)
                    if (o < 0 || o >= n_out)
                        throw ValidationError("payload output index out of range");
                break;
            case SpecVariant::SetValued:
                if (set_valued.size() != space.state_count())
                    throw ValidationError("set-valued payload is not total");
                for (const auto& fiber : set_valued)
                    for (const int o : fiber)
                        if (o < 0 || o >= n_out)
                            throw ValidationError("payload output index out of range");
                break;
            case SpecVariant::Relational:
                for (const auto& [s, o] : pairs) {
                    if (s >= space.state_count())
                        throw ValidationError("relational pair references unknown state " +
                                              std::to_string(s));
                    if (o < 0 || o >= n_out)
                        throw ValidationError("relational pair references unknown output");
                }
                break;
        }
        if (u_blocked >= u_allowed)
            throw ValidationError("allowed/blocked utility gap must be strict: " +
                                  rat_to_string(u_blocked) + " !< " + rat_to_string(u_allowed));
    }

    /// The admissible-output fiber at a state, as output indices.
    std::set<int> admissible(StateIndex s) const {
        switch (variant) {
            case SpecVariant::Deterministic: return {deterministic_map[s]};
            case SpecVariant::SetValued: return set_valued[s];
            case SpecVariant::Relational: {
                std::set<int> fiber;
                for (const auto& [state, o] : pairs)
                    if (state == s) fiber.insert(o);
                return fiber;
            }
        }
        return {};
    }

    bool has_empty_fiber(const CoordinateSpace& space) const {
        for (StateIndex s = 0; s < space.state_count(); ++s)
            if (admissible(s).empty()) return true;
        return false;
    }
};

/// Builds the decision problem whose optimizer sets realize the spec's
/// admissible-output fibers: allowed outputs get u_allowed, blocked ones
/// u_blocked, and empty fibers are totalized with the reserved failure token,
/// which is optimal exactly where the fiber is empty.
inline DecisionProblem induce_problem(const AdmissibilitySpec& spec,
                                      const CoordinateSpace& space,
                                      StateIndex budget = kDefaultStateBudget) {
    check_budget(space.state_count(), budget);
    spec.validate(space);
    const bool totalize =
        spec.variant != SpecVariant::Deterministic && spec.has_empty_fiber(space);
    if (spec.outputs.empty() && !totalize)
        throw ValidationError("empty output universe with no empty fibers to totalize");

    std::vector<std::string> actions = spec.outputs;
    if (totalize) actions.push_back(kFailureTokenId);
    std::vector<std::vector<Rat>> utility(actions.size(),
                                          std::vector<Rat>(space.state_count(), spec.u_blocked));
    for (StateIndex s = 0; s < space.state_count(); ++s) {
        const auto fiber = spec.admissible(s);
        for (const int o : fiber) utility[static_cast<std::size_t>(o)][s] = spec.u_allowed;
        if (totalize && fiber.empty()) utility.back()[s] = spec.u_allowed;
    }
    return DecisionProblem(space, std::move(actions), std::move(utility), budget);
}

struct TransferReport {
    bool partitions_equal = false;
    std::size_t class_count = 0;
    std::size_t subsets_checked = 0;
    std::size_t relevance_checks = 0;
    bool totalized = false;
};

namespace detail {

/// Relation-level sufficiency: agreement on `coords` forces equal
/// admissible-output sets. Computed straight from the spec, independent of
/// the induced problem.
inline bool relation_sufficient(const AdmissibilitySpec& spec, const CoordinateSpace& space,
                                const std::vector<int>& coords) {
    std::map<std::vector<int>, std::set<int>> fiber_of_key;
    for (StateIndex s = 0; s < space.state_count(); ++s) {
        std::vector<int> key;
        key.reserve(coords.size());
        for (const int i : coords) key.push_back(space.coord_value(s, i));
        auto adm = spec.admissible(s);
        auto [it, fresh] = fiber_of_key.emplace(std::move(key), adm);
        if (!fresh && it->second != adm) return false;
    }
    return true;
}

} // namespace detail

/// Cross-checks the relation-level semantics against the induced problem:
/// the admissible-output equivalence must equal the optimizer quotient, and
/// relation-level sufficiency/relevance must match the problem-level ones.
inline TransferReport transfer_check(const AdmissibilitySpec& spec,
                                     const CoordinateSpace& space,
                                     const CertifyOptions& opts = {},
                                     StateIndex budget = kDefaultStateBudget) {
    const DecisionProblem induced = induce_problem(spec, space, budget);
    TransferReport report;
    report.totalized = induced.num_actions() > static_cast<int>(spec.outputs.size());

    // Admissible-output equivalence classes, in first-appearance order.
    std::vector<std::uint32_t> rel_class(space.state_count());
    std::map<std::set<int>, std::uint32_t> class_of_fiber;
    for (StateIndex s = 0; s < space.state_count(); ++s) {
        auto [it, fresh] = class_of_fiber.emplace(
            spec.admissible(s), static_cast<std::uint32_t>(class_of_fiber.size()));
        rel_class[s] = it->second;
    }
    const QuotientPartition induced_quotient = quotient(induced);
    report.class_count = class_of_fiber.size();
    QuotientPartition rel_partition;
    rel_partition.class_of = rel_class;
    rel_partition.classes.resize(class_of_fiber.size());
    report.partitions_equal = rel_partition.same_blocks(induced_quotient);
    if (!report.partitions_equal)
        throw TheoryViolation(
            "admissible-output equivalence differs from the induced optimizer quotient");

    const int d = space.dimension();
    if (full_subset_scan_feasible(d, opts.subset_cap)) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << d); ++mask) {
            const auto coords = subset_from_mask(mask, d);
            const bool rel = detail::relation_sufficient(spec, space, coords);
            const bool prob = is_sufficient_given_quotient(induced, coords, induced_quotient);
            if (rel != prob)
                throw TheoryViolation("relation-level and problem-level sufficiency differ "
                                      "on subset mask " + std::to_string(mask));
            ++report.subsets_checked;
        }
    }
    for (int i = 0; i < d; ++i) {
        std::vector<int> rest;
        for (int j = 0; j < d; ++j)
            if (j != i) rest.push_back(j);
        const bool rel = !detail::relation_sufficient(spec, space, rest);
        const bool prob = !is_sufficient_given_quotient(induced, rest, induced_quotient);
        if (rel != prob)
            throw TheoryViolation("relation-level and problem-level relevance differ at " +
                                  std::to_string(i));
        ++report.relevance_checks;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Distinct-profile compression
// ---------------------------------------------------------------------------

template <typename T>
struct Compression {
    T compressed;
    std::vector<int> profile_class_of_action; // [original action] -> class
    std::vector<std::string> representative;  // [class] -> surviving action id
};

namespace detail {

inline std::pair<std::vector<int>, std::vector<int>>
profile_classes(const std::vector<std::vector<Rat>>& utility) {
    std::map<std::vector<Rat>, int> class_of_profile;
    std::vector<int> class_of_action;
    std::vector<int> representative_action;
    for (std::size_t a = 0; a < utility.size(); ++a) {
        auto [it, fresh] =
            class_of_profile.emplace(utility[a], static_cast<int>(class_of_profile.size()));
        if (fresh) representative_action.push_back(static_cast<int>(a));
        class_of_action.push_back(it->second);
    }
    return {class_of_action, representative_action};
}

template <typename Problem>
void assert_compression_equivalent(const Problem& original, const Problem& compressed,
                                   const CertifyOptions& opts) {
    const int d = original.space().dimension();
    if (full_subset_scan_feasible(d, opts.subset_cap)) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << d); ++mask) {
            const auto coords = subset_from_mask(mask, d);
            if (is_sufficient(original, coords) != is_sufficient(compressed, coords))
                throw TheoryViolation("profile compression changed sufficiency on mask " +
                                      std::to_string(mask));
        }
    } else {
        for (int i = 0; i < d; ++i)
            if (is_relevant(original, i) != is_relevant(compressed, i))
                throw TheoryViolation("profile compression changed relevance at " +
                                      std::to_string(i));
    }
}

} // namespace detail

/// Merges actions with identical utility profiles; the compressed problem has
/// exactly one action per distinct profile, keeping first-appearance ids.
inline Compression<DecisionProblem> compress_profiles(const DecisionProblem& p,
                                                      const CertifyOptions& opts = {}) {
    const auto [class_of_action, representative_action] =
        detail::profile_classes(p.utility_table());
    Compression<DecisionProblem> out;
    out.profile_class_of_action = class_of_action;
    std::vector<std::string> actions;
    std::vector<std::vector<Rat>> utility;
    for (const int a : representative_action) {
        actions.push_back(p.action_id(a));
        utility.push_back(p.utility_table()[static_cast<std::size_t>(a)]);
        out.representative.push_back(p.action_id(a));
    }
    out.compressed = DecisionProblem(p.space(), std::move(actions), std::move(utility));
    if (opts.verify) detail::assert_compression_equivalent(p, out.compressed, opts);
    return out;
}

/// Slice version: profiles are compared on the exact expansion, and the
/// surviving actions keep their coefficient bundles.
inline Compression<PairwiseSlice> compress_profiles(const PairwiseSlice& slice,
                                                    const CertifyOptions& opts = {},
                                                    StateIndex budget = kDefaultStateBudget) {
    const DecisionProblem expanded = slice.expand(budget);
    const auto [class_of_action, representative_action] =
        detail::profile_classes(expanded.utility_table());
    Compression<PairwiseSlice> out;
    out.profile_class_of_action = class_of_action;
    std::vector<std::string> actions;
    std::vector<CoeffBundle> coeffs;
    for (const int a : representative_action) {
        actions.push_back(slice.action_id(a));
        coeffs.push_back(slice.coeffs(a));
        out.representative.push_back(slice.action_id(a));
    }
    out.compressed = PairwiseSlice(slice.dimension(), std::move(actions), std::move(coeffs));
    if (opts.verify)
        detail::assert_compression_equivalent(expanded, out.compressed.expand(budget), opts);
    return out;
}

// ---------------------------------------------------------------------------
// Boolean presentations
// ---------------------------------------------------------------------------

enum class BitsMode { Indicator, BinaryIndex };

inline const char* to_string(BitsMode m) {
    return m == BitsMode::Indicator ? "indicator" : "binary_index";
}

/// A problem re-presented on a binary cube together with the encoding map.
/// Surplus bit patterns alias the highest original state index, so
/// certification questions about genuine states are answered only through
/// `encode`.
struct BitsPresentation {
    BitsMode mode = BitsMode::Indicator;
    DecisionProblem cube;
    std::vector<StateIndex> encode; // original state -> cube state

    /// Original state's quotient class, read through the encoding.
    std::uint32_t class_through_encoding(const QuotientPartition& cube_quotient,
                                         StateIndex original) const {
        return cube_quotient.class_of[encode[original]];
    }
};

inline BitsPresentation present_as_bits(const DecisionProblem& p, BitsMode mode,
                                        StateIndex budget = kDefaultStateBudget) {
    const StateIndex n = p.num_states();
    int bits = 0;
    if (mode == BitsMode::Indicator) {
        if (n > 63) throw ResourceError("indicator presentation needs one bit per state");
        bits = static_cast<int>(n);
    } else {
        while ((StateIndex(1) << bits) < n) ++bits;
    }
    const CoordinateSpace cube_space = CoordinateSpace::binary_cube(bits);
    check_budget(cube_space.state_count(), budget);

    // decode: cube pattern -> original state, aliasing non-genuine patterns
    // to the highest state index.
    std::vector<StateIndex> decode(cube_space.state_count(), n - 1);
    std::vector<StateIndex> encode(n, 0);
    if (mode == BitsMode::Indicator) {
        for (StateIndex s = 0; s < n; ++s) {
            State x(static_cast<std::size_t>(bits), 0);
            x[static_cast<std::size_t>(s)] = 1;
            const StateIndex pattern = cube_space.index_of(x);
            encode[s] = pattern;
            decode[pattern] = s;
        }
    } else {
        for (StateIndex s = 0; s < n; ++s) {
            State x(static_cast<std::size_t>(bits), 0);
            for (int b = 0; b < bits; ++b)
                x[static_cast<std::size_t>(b)] = static_cast<int>((s >> (bits - 1 - b)) & 1);
            const StateIndex pattern = cube_space.index_of(x);
            encode[s] = pattern;
            decode[pattern] = s;
        }
    }

    std::vector<std::vector<Rat>> utility(p.actions().size());
    for (int a = 0; a < p.num_actions(); ++a) {
        auto& col = utility[static_cast<std::size_t>(a)];
        col.reserve(cube_space.state_count());
        for (StateIndex pattern = 0; pattern < cube_space.state_count(); ++pattern)
            col.push_back(p.utility(a, decode[pattern]));
    }
    BitsPresentation out;
    out.mode = mode;
    out.cube = DecisionProblem(cube_space, p.actions(), std::move(utility), budget);
    out.encode = std::move(encode);
    return out;
}

} // namespace relcert
