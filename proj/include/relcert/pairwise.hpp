#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relcert/certify.hpp"
#include "relcert/problem.hpp"

namespace relcert {

using PairTable = std::array<std::array<Rat, 2>, 2>; // [x_i][x_j]
using UnaryTable = std::array<Rat, 2>;               // [x_i]
using CoordPair = std::pair<int, int>;               // i < j

inline bool table_is_zero(const PairTable& w) {
    return w[0][0] == 0 && w[0][1] == 0 && w[1][0] == 0 && w[1][1] == 0;
}

/// Action-independent pairwise coefficient bundle: a constant, one two-point
/// unary table per coordinate, and pair tables keyed i < j. Used both as one
/// action's coefficients inside a slice and as the alpha term of slice-tier
/// affine steps.
struct CoeffBundle {
    Rat constant = Rat(0);
    std::vector<UnaryTable> unary; // size d
    std::map<CoordPair, PairTable> pairs;

    static CoeffBundle zero(int d) {
        CoeffBundle b;
        b.unary.assign(static_cast<std::size_t>(d), UnaryTable{Rat(0), Rat(0)});
        return b;
    }

    /// Single pair term: scale * x_i * x_j (i != j, any order).
    static CoeffBundle pair_term(int d, int i, int j, const Rat& scale) {
        CoeffBundle b = zero(d);
        if (i > j) std::swap(i, j);
        PairTable w{};
        w[0][0] = w[0][1] = w[1][0] = Rat(0);
        w[1][1] = scale;
        b.pairs.emplace(CoordPair{i, j}, w);
        return b;
    }

    /// Drops all-zero pair tables; equality of bundles compares pruned forms.
    void prune() {
        for (auto it = pairs.begin(); it != pairs.end();) {
            if (table_is_zero(it->second)) it = pairs.erase(it);
            else ++it;
        }
    }

    friend bool operator==(const CoeffBundle& a, const CoeffBundle& b) {
        if (a.constant != b.constant || a.unary != b.unary) return false;
        auto pruned = [](const CoeffBundle& c) {
            std::map<CoordPair, PairTable> m;
            for (const auto& [k, w] : c.pairs)
                if (!table_is_zero(w)) m.emplace(k, w);
            return m;
        };
        return pruned(a) == pruned(b);
    }
};

/// Binary pairwise utility presentation: per action, constant + unary +
/// pairwise coefficient tables over a d-dimensional binary cube.
class PairwiseSlice {
public:
    PairwiseSlice() = default;

    PairwiseSlice(int d, std::vector<std::string> actions, std::vector<CoeffBundle> coeffs)
        : d_(d), actions_(std::move(actions)), coeffs_(std::move(coeffs)) {
        if (d_ < 1) throw ValidationError("slice dimension must be >= 1");
        if (actions_.empty()) throw ValidationError("slice action list is empty");
        if (coeffs_.size() != actions_.size())
            throw ValidationError("coefficient bundle count != action count");
        std::map<std::string, int> seen;
        for (int a = 0; a < num_actions(); ++a)
            if (!seen.emplace(actions_[static_cast<std::size_t>(a)], a).second)
                throw ValidationError("duplicate action identifier '" +
                                      actions_[static_cast<std::size_t>(a)] + "'");
        for (auto& c : coeffs_) {
            if (static_cast<int>(c.unary.size()) != d_)
                throw ValidationError("unary table count != dimension");
            for (const auto& [key, w] : c.pairs) {
                (void)w;
                if (key.first < 0 || key.second >= d_ || key.first >= key.second)
                    throw ValidationError("pair table key out of range or not i<j");
            }
            c.prune();
        }
        index_by_id_ = std::move(seen);
    }

    int dimension() const { return d_; }
    int num_actions() const { return static_cast<int>(actions_.size()); }
    const std::vector<std::string>& actions() const { return actions_; }
    const std::string& action_id(int a) const { return actions_[static_cast<std::size_t>(a)]; }
    int action_index(const std::string& id) const {
        const auto it = index_by_id_.find(id);
        if (it == index_by_id_.end())
            throw ValidationError("unknown action identifier '" + id + "'");
        return it->second;
    }
    const CoeffBundle& coeffs(int a) const { return coeffs_[static_cast<std::size_t>(a)]; }
    const std::vector<CoeffBundle>& all_coeffs() const { return coeffs_; }

    /// Pair coefficient with symmetrized lookup: stored only for i < j.
    Rat pair_value(int a, int i, int j, int xi, int xj) const {
        if (i > j) {
            std::swap(i, j);
            std::swap(xi, xj);
        }
        const auto& pairs = coeffs_[static_cast<std::size_t>(a)].pairs;
        const auto it = pairs.find({i, j});
        if (it == pairs.end()) return Rat(0);
        return it->second[static_cast<std::size_t>(xi)][static_cast<std::size_t>(xj)];
    }

    /// U(a, x) = c_a + sum_i u_{a,i}(x_i) + sum_{i<j} w_{a,ij}(x_i, x_j).
    Rat evaluate(int a, const State& x) const {
        const auto& c = coeffs_[static_cast<std::size_t>(a)];
        Rat u = c.constant;
        for (int i = 0; i < d_; ++i)
            u += c.unary[static_cast<std::size_t>(i)]
                        [static_cast<std::size_t>(x[static_cast<std::size_t>(i)])];
        for (const auto& [key, w] : c.pairs)
            u += w[static_cast<std::size_t>(x[static_cast<std::size_t>(key.first)])]
                  [static_cast<std::size_t>(x[static_cast<std::size_t>(key.second)])];
        return u;
    }

    /// Exact expansion to the total utility table on the binary cube.
    DecisionProblem expand(StateIndex budget = kDefaultStateBudget) const {
        const CoordinateSpace space = CoordinateSpace::binary_cube(d_);
        check_budget(space.state_count(), budget);
        std::vector<std::vector<Rat>> utility(actions_.size());
        for (int a = 0; a < num_actions(); ++a) {
            auto& col = utility[static_cast<std::size_t>(a)];
            col.reserve(space.state_count());
            for (StateIndex s = 0; s < space.state_count(); ++s)
                col.push_back(evaluate(a, space.state_at(s)));
        }
        return DecisionProblem(space, actions_, std::move(utility), budget);
    }

    friend bool operator==(const PairwiseSlice& a, const PairwiseSlice& b) {
        return a.d_ == b.d_ && a.actions_ == b.actions_ && a.coeffs_ == b.coeffs_;
    }

private:
    int d_ = 0;
    std::vector<std::string> actions_;
    std::vector<CoeffBundle> coeffs_;
    std::map<std::string, int> index_by_id_;
};

/// Second finite difference of U(a, .) on the (i, j) coordinate square with
/// every other coordinate held at 0.
inline Rat mixed_difference(const PairwiseSlice& slice, int i, int j, int a) {
    const int d = slice.dimension();
    if (i == j) throw ValidationError("mixed difference requires distinct coordinates");
    if (i < 0 || j < 0 || i >= d || j >= d)
        throw ValidationError("coordinate index out of range");
    State x(static_cast<std::size_t>(d), 0);
    auto at = [&](int xi, int xj) {
        x[static_cast<std::size_t>(i)] = xi;
        x[static_cast<std::size_t>(j)] = xj;
        return slice.evaluate(a, x);
    };
    return at(0, 0) - at(1, 0) - at(0, 1) + at(1, 1);
}

/// Mixed difference of the action-gap function U(a, .) - U(b, .).
inline Rat gap_mixed_difference(const PairwiseSlice& slice, int i, int j, int a, int b) {
    if (a == b) throw ValidationError("gap mixed difference requires distinct actions");
    return mixed_difference(slice, i, j, a) - mixed_difference(slice, i, j, b);
}

enum class GraphMode { Raw, Decision, Supported };

inline const char* to_string(GraphMode m) {
    switch (m) {
        case GraphMode::Raw: return "raw";
        case GraphMode::Decision: return "decision";
        case GraphMode::Supported: return "supported";
    }
    return "?";
}

/// One interaction edge plus the witness that produced it: the action (raw
/// mode) or action pair (gap modes) and the nonzero mixed-difference value.
struct EdgeWitness {
    int i = 0;
    int j = 0;
    int action_a = 0;
    std::optional<int> action_b; // present in decision/supported modes
    Rat value;
};

struct InteractionGraph {
    int d = 0;
    GraphMode mode = GraphMode::Raw;
    std::vector<EdgeWitness> edges; // sorted by (i, j), one witness per edge

    bool has_edge(int i, int j) const {
        if (i > j) std::swap(i, j);
        for (const auto& e : edges)
            if (e.i == i && e.j == j) return true;
        return false;
    }
    std::size_t edge_count() const { return edges.size(); }
};

/// Actions that are optimal somewhere on the expanded cube.
inline std::vector<bool> supported_actions(const PairwiseSlice& slice,
                                           StateIndex budget = kDefaultStateBudget) {
    const DecisionProblem expanded = slice.expand(budget);
    std::vector<bool> supported(static_cast<std::size_t>(slice.num_actions()), false);
    for (StateIndex s = 0; s < expanded.num_states(); ++s)
        for (const int a : detail::optimizer_set_at(expanded, s))
            supported[static_cast<std::size_t>(a)] = true;
    return supported;
}

/// Interaction graph in one of three modes: raw (some action has a nonzero
/// mixed difference on the pair), decision (some action gap does), supported
/// (decision restricted to optimizer-supported actions).
inline InteractionGraph interaction_graph(const PairwiseSlice& slice, GraphMode mode,
                                          StateIndex budget = kDefaultStateBudget) {
    const int d = slice.dimension();
    InteractionGraph g;
    g.d = d;
    g.mode = mode;
    std::vector<bool> in_scope(static_cast<std::size_t>(slice.num_actions()), true);
    if (mode == GraphMode::Supported) in_scope = supported_actions(slice, budget);

    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            std::optional<EdgeWitness> witness;
            if (mode == GraphMode::Raw) {
                for (int a = 0; a < slice.num_actions() && !witness; ++a) {
                    const Rat delta = mixed_difference(slice, i, j, a);
                    if (delta != 0) witness = EdgeWitness{i, j, a, std::nullopt, delta};
                }
            } else {
                for (int a = 0; a < slice.num_actions() && !witness; ++a) {
                    if (!in_scope[static_cast<std::size_t>(a)]) continue;
                    for (int b = a + 1; b < slice.num_actions() && !witness; ++b) {
                        if (!in_scope[static_cast<std::size_t>(b)]) continue;
                        const Rat delta = gap_mixed_difference(slice, i, j, a, b);
                        if (delta != 0) witness = EdgeWitness{i, j, a, b, delta};
                    }
                }
            }
            if (witness) g.edges.push_back(std::move(*witness));
        }
    }
    return g;
}

/// A state at which some adjacent transposition changes some action's
/// utility, if one exists.
inline std::optional<State> symmetry_counterexample(const PairwiseSlice& slice,
                                                    StateIndex budget = kDefaultStateBudget) {
    const int d = slice.dimension();
    if (d == 1) return std::nullopt;
    const DecisionProblem expanded = slice.expand(budget);
    const auto& space = expanded.space();
    for (int t = 0; t + 1 < d; ++t) {
        for (StateIndex s = 0; s < space.state_count(); ++s) {
            State x = space.state_at(s);
            State y = x;
            std::swap(y[static_cast<std::size_t>(t)], y[static_cast<std::size_t>(t + 1)]);
            const StateIndex sy = space.index_of(y);
            for (int a = 0; a < expanded.num_actions(); ++a)
                if (expanded.utility(a, s) != expanded.utility(a, sy)) return x;
        }
    }
    return std::nullopt;
}

/// True iff the expanded utility is invariant under every coordinate
/// permutation; adjacent transpositions generate them all.
inline bool symmetry_check(const PairwiseSlice& slice,
                           StateIndex budget = kDefaultStateBudget) {
    return !symmetry_counterexample(slice, budget).has_value();
}

enum class DichotomyVerdict { UnaryCollapse, CompleteInteraction, NotApplicable };

inline const char* to_string(DichotomyVerdict v) {
    switch (v) {
        case DichotomyVerdict::UnaryCollapse: return "unary_collapse";
        case DichotomyVerdict::CompleteInteraction: return "complete_interaction";
        case DichotomyVerdict::NotApplicable: return "not_applicable";
    }
    return "?";
}

struct DichotomyReport {
    DichotomyVerdict verdict = DichotomyVerdict::NotApplicable;
    std::optional<State> symmetry_counterexample;
    std::size_t decision_edge_count = 0;
};

/// For coordinate-symmetric slices the decision-relevant graph is either
/// edgeless or complete; an intermediate count would violate the dichotomy
/// and raises a diagnostic.
inline DichotomyReport dichotomy_report(const PairwiseSlice& slice,
                                        StateIndex budget = kDefaultStateBudget) {
    DichotomyReport report;
    report.symmetry_counterexample = symmetry_counterexample(slice, budget);
    if (report.symmetry_counterexample) {
        report.verdict = DichotomyVerdict::NotApplicable;
        return report;
    }
    const int d = slice.dimension();
    const auto g = interaction_graph(slice, GraphMode::Decision, budget);
    report.decision_edge_count = g.edge_count();
    const std::size_t complete =
        static_cast<std::size_t>(d) * static_cast<std::size_t>(d - 1) / 2;
    if (g.edge_count() == 0) report.verdict = DichotomyVerdict::UnaryCollapse;
    else if (g.edge_count() == complete) report.verdict = DichotomyVerdict::CompleteInteraction;
    else
        throw TheoryViolation("symmetric slice with intermediate decision edge count " +
                              std::to_string(g.edge_count()) + " of " +
                              std::to_string(complete));
    return report;
}

enum class TargetKind { DominantPair, MarginBounded, GhostAction, OffsetSignature };

inline const char* to_string(TargetKind k) {
    switch (k) {
        case TargetKind::DominantPair: return "dominant_pair";
        case TargetKind::MarginBounded: return "margin_bounded";
        case TargetKind::GhostAction: return "ghost_action";
        case TargetKind::OffsetSignature: return "offset_signature";
    }
    return "?";
}

inline TargetKind target_kind_from_string(const std::string& s) {
    if (s == "dominant_pair") return TargetKind::DominantPair;
    if (s == "margin_bounded") return TargetKind::MarginBounded;
    if (s == "ghost_action") return TargetKind::GhostAction;
    if (s == "offset_signature") return TargetKind::OffsetSignature;
    throw ValidationError("unknown target predicate kind '" + s + "'");
}

namespace detail {

inline Rat max_pair_delta_magnitude(const PairwiseSlice& slice) {
    Rat best(0);
    for (int i = 0; i < slice.dimension(); ++i)
        for (int j = i + 1; j < slice.dimension(); ++j)
            for (int a = 0; a < slice.num_actions(); ++a) {
                const Rat mag = rat_abs(mixed_difference(slice, i, j, a));
                if (mag > best) best = mag;
            }
    return best;
}

} // namespace detail

/// The four representation-level obstruction-family target predicates, with
/// the anchor pair fixed at {0,1}.
inline bool target_predicate(const PairwiseSlice& slice, TargetKind kind) {
    const int d = slice.dimension();
    if (kind == TargetKind::MarginBounded) {
        if (d < 2) throw ValidationError("margin_bounded requires d >= 2");
    } else if (d < 3) {
        throw ValidationError(std::string(to_string(kind)) +
                              " requires d >= 3 (anchor pair {0,1} plus a third pair)");
    }

    switch (kind) {
        case TargetKind::DominantPair: {
            // Unique (pair, action) of maximal |Delta|, and it is anchored at {0,1}.
            Rat best(-1);
            int count = 0;
            bool anchored = false;
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j)
                    for (int a = 0; a < slice.num_actions(); ++a) {
                        const Rat mag = rat_abs(mixed_difference(slice, i, j, a));
                        if (mag > best) {
                            best = mag;
                            count = 1;
                            anchored = (i == 0 && j == 1);
                        } else if (mag == best) {
                            ++count;
                        }
                    }
            return count == 1 && anchored;
        }
        case TargetKind::MarginBounded: {
            const Rat threshold = Rat(2) * detail::max_pair_delta_magnitude(slice);
            for (int a = 0; a < slice.num_actions(); ++a)
                for (const auto& u : slice.coeffs(a).unary)
                    if (rat_abs(u[0]) > threshold || rat_abs(u[1]) > threshold) return false;
            return true;
        }
        case TargetKind::GhostAction: {
            for (int a = 0; a < slice.num_actions(); ++a) {
                const auto& u0 = slice.coeffs(a).unary[0];
                if (u0[0] == Rat(-1) && u0[1] == Rat(-1) &&
                    rat_abs(mixed_difference(slice, 0, 1, a)) == Rat(1))
                    return true;
            }
            return false;
        }
        case TargetKind::OffsetSignature: {
            for (int a = 0; a < slice.num_actions(); ++a)
                for (int b = 0; b < slice.num_actions(); ++b) {
                    if (a == b) continue;
                    if (rat_abs(mixed_difference(slice, 0, 1, a)) == Rat(1) &&
                        mixed_difference(slice, 0, 1, b) == Rat(0))
                        return true;
                }
            return false;
        }
    }
    throw ValidationError("unknown target kind");
}

} // namespace relcert
