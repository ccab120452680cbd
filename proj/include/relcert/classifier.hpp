#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "relcert/pairwise.hpp"

namespace relcert {

/// Canonical finite pairwise syntax of a slice: one vertex per coordinate,
/// labeled with the tuple of unary tables across actions in declaration
/// order; an edge wherever some action has a nonzero pair table, labeled with
/// the tuple of pair tables across actions.
struct SyntaxGraph {
    int d = 0;
    int num_actions = 0;
    std::vector<std::vector<UnaryTable>> vertex_labels;   // [vertex][action]
    std::map<CoordPair, std::vector<PairTable>> edge_labels; // [edge][action]

    bool has_edge(int i, int j) const {
        if (i > j) std::swap(i, j);
        return edge_labels.count({i, j}) > 0;
    }
    std::vector<int> neighbors(int v) const {
        std::vector<int> out;
        for (const auto& [key, labels] : edge_labels) {
            (void)labels;
            if (key.first == v) out.push_back(key.second);
            else if (key.second == v) out.push_back(key.first);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline SyntaxGraph syntax_graph(const PairwiseSlice& slice) {
    SyntaxGraph g;
    g.d = slice.dimension();
    g.num_actions = slice.num_actions();
    g.vertex_labels.resize(static_cast<std::size_t>(g.d));
    for (int v = 0; v < g.d; ++v) {
        auto& labels = g.vertex_labels[static_cast<std::size_t>(v)];
        labels.reserve(static_cast<std::size_t>(g.num_actions));
        for (int a = 0; a < g.num_actions; ++a)
            labels.push_back(slice.coeffs(a).unary[static_cast<std::size_t>(v)]);
    }
    std::set<CoordPair> edge_keys;
    for (int a = 0; a < g.num_actions; ++a)
        for (const auto& [key, w] : slice.coeffs(a).pairs)
            if (!table_is_zero(w)) edge_keys.insert(key);
    for (const auto& key : edge_keys) {
        std::vector<PairTable> labels;
        labels.reserve(static_cast<std::size_t>(g.num_actions));
        for (int a = 0; a < g.num_actions; ++a) {
            PairTable w{};
            for (int xi = 0; xi < 2; ++xi)
                for (int xj = 0; xj < 2; ++xj)
                    w[static_cast<std::size_t>(xi)][static_cast<std::size_t>(xj)] =
                        slice.pair_value(a, key.first, key.second, xi, xj);
            labels.push_back(w);
        }
        g.edge_labels.emplace(key, std::move(labels));
    }
    return g;
}

/// Induced rooted subgraph on the vertices within edge-distance r of the
/// root, self-contained (labels copied) so occurrence checks need no backing
/// graph.
struct RootedNeighborhood {
    int root = 0;
    int num_actions = 0;
    std::vector<int> vertices;                   // original ids, sorted
    std::map<int, int> distance;                 // original id -> distance from root
    std::map<int, std::vector<UnaryTable>> vertex_labels;
    std::map<CoordPair, std::vector<PairTable>> edge_labels; // original id pairs, i < j
};

inline RootedNeighborhood rooted_neighborhood(const SyntaxGraph& g, int v, int r) {
    if (v < 0 || v >= g.d) throw ValidationError("neighborhood root out of range");
    if (r < 0) throw ValidationError("neighborhood radius must be >= 0");
    RootedNeighborhood n;
    n.root = v;
    n.num_actions = g.num_actions;
    std::queue<int> frontier;
    frontier.push(v);
    n.distance[v] = 0;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        if (n.distance[u] == r) continue;
        for (const int w : g.neighbors(u))
            if (!n.distance.count(w)) {
                n.distance[w] = n.distance[u] + 1;
                frontier.push(w);
            }
    }
    for (const auto& [u, dist] : n.distance) {
        (void)dist;
        n.vertices.push_back(u);
        n.vertex_labels.emplace(u, g.vertex_labels[static_cast<std::size_t>(u)]);
    }
    std::sort(n.vertices.begin(), n.vertices.end());
    for (const auto& [key, labels] : g.edge_labels)
        if (n.distance.count(key.first) && n.distance.count(key.second))
            n.edge_labels.emplace(key, labels);
    return n;
}

/// Bounds of a pattern scheme: neighborhood radius, pattern size, action
/// alphabet size, and coefficient magnitude.
struct PatternBounds {
    int r_max = 1;
    int n_max = 2;
    int a_max = 2;
    Rat c_max = Rat(8);
};

/// Rooted local pattern: vertices labeled with unary-table tuples over the
/// pattern's own action alphabet, edges labeled with pair-table tuples, and a
/// declared radius bounding how far from the root its image may reach.
struct LocalPattern {
    int radius = 0;
    int num_action_labels = 1;
    int root = 0;
    std::vector<std::vector<UnaryTable>> vertices; // [vertex][action label]
    struct Edge {
        int u = 0;
        int v = 0;
        std::vector<PairTable> tables; // [action label], oriented (x_u, x_v)
    };
    std::vector<Edge> edges;

    void validate(const PatternBounds& bounds) const {
        if (vertices.empty()) throw ValidationError("pattern has no vertices");
        if (root < 0 || root >= static_cast<int>(vertices.size()))
            throw ValidationError("pattern root out of range");
        if (radius < 0 || radius > bounds.r_max)
            throw ValidationError("pattern radius exceeds r_max");
        if (static_cast<int>(vertices.size()) > bounds.n_max)
            throw ValidationError("pattern vertex count exceeds n_max");
        if (num_action_labels < 1 || num_action_labels > bounds.a_max)
            throw ValidationError("pattern action label count exceeds a_max");
        auto check_mag = [&](const Rat& x) {
            if (rat_abs(x) > bounds.c_max)
                throw ValidationError("pattern coefficient magnitude exceeds c_max");
        };
        for (const auto& labels : vertices) {
            if (static_cast<int>(labels.size()) != num_action_labels)
                throw ValidationError("pattern vertex label tuple has wrong arity");
            for (const auto& u : labels) {
                check_mag(u[0]);
                check_mag(u[1]);
            }
        }
        for (const auto& e : edges) {
            if (e.u < 0 || e.v < 0 || e.u >= static_cast<int>(vertices.size()) ||
                e.v >= static_cast<int>(vertices.size()) || e.u == e.v)
                throw ValidationError("pattern edge endpoint out of range");
            if (static_cast<int>(e.tables.size()) != num_action_labels)
                throw ValidationError("pattern edge label tuple has wrong arity");
            for (const auto& w : e.tables)
                for (int xi = 0; xi < 2; ++xi)
                    for (int xj = 0; xj < 2; ++xj)
                        check_mag(w[static_cast<std::size_t>(xi)][static_cast<std::size_t>(xj)]);
        }
    }
};

namespace detail {

/// Tries every root-preserving injective embedding of the pattern into the
/// neighborhood together with every bijection of action alphabets. The action
/// bijection must be consistent across all vertex and edge labels, so a
/// pattern can only occur in slices with exactly its action-label count.
inline bool occurs_impl(const LocalPattern& pattern, const RootedNeighborhood& n) {
    const int pv = static_cast<int>(pattern.vertices.size());
    if (pattern.num_action_labels != n.num_actions) return false;
    if (pv > static_cast<int>(n.vertices.size())) return false;

    std::vector<int> sigma(static_cast<std::size_t>(pattern.num_action_labels));
    std::iota(sigma.begin(), sigma.end(), 0);

    // Candidate images for each pattern vertex: within the pattern's declared
    // radius of the root; the root maps to the root.
    std::vector<int> ball;
    for (const int u : n.vertices)
        if (n.distance.at(u) <= pattern.radius) ball.push_back(u);

    do {
        std::vector<int> image(static_cast<std::size_t>(pv), -1);
        std::set<int> used;
        auto vertex_ok = [&](int p, int target) {
            const auto& plabels = pattern.vertices[static_cast<std::size_t>(p)];
            const auto& nlabels = n.vertex_labels.at(target);
            for (int l = 0; l < pattern.num_action_labels; ++l)
                if (plabels[static_cast<std::size_t>(l)] !=
                    nlabels[static_cast<std::size_t>(sigma[static_cast<std::size_t>(l)])])
                    return false;
            return true;
        };
        auto edges_ok = [&](int p) {
            for (const auto& e : pattern.edges) {
                if (e.u != p && e.v != p) continue;
                const int other = e.u == p ? e.v : e.u;
                if (image[static_cast<std::size_t>(other)] == -1) continue;
                int a = image[static_cast<std::size_t>(e.u)];
                int b = image[static_cast<std::size_t>(e.v)];
                const bool flipped = a > b;
                if (flipped) std::swap(a, b);
                const auto it = n.edge_labels.find({a, b});
                if (it == n.edge_labels.end()) return false;
                for (int l = 0; l < pattern.num_action_labels; ++l) {
                    const PairTable& pt = e.tables[static_cast<std::size_t>(l)];
                    const PairTable& nt =
                        it->second[static_cast<std::size_t>(sigma[static_cast<std::size_t>(l)])];
                    for (int xu = 0; xu < 2; ++xu)
                        for (int xv = 0; xv < 2; ++xv) {
                            const Rat& nval =
                                flipped ? nt[static_cast<std::size_t>(xv)]
                                            [static_cast<std::size_t>(xu)]
                                        : nt[static_cast<std::size_t>(xu)]
                                            [static_cast<std::size_t>(xv)];
                            if (pt[static_cast<std::size_t>(xu)][static_cast<std::size_t>(xv)] !=
                                nval)
                                return false;
                        }
                }
            }
            return true;
        };

        // Backtracking over pattern vertices, root first.
        std::vector<int> order(static_cast<std::size_t>(pv));
        std::iota(order.begin(), order.end(), 0);
        std::swap(order[0], order[static_cast<std::size_t>(pattern.root)]);

        auto search = [&](auto&& self, std::size_t idx) -> bool {
            if (idx == order.size()) return true;
            const int p = order[idx];
            const auto& candidates = (p == pattern.root) ? std::vector<int>{n.root} : ball;
            for (const int target : candidates) {
                if (used.count(target)) continue;
                if (!vertex_ok(p, target)) continue;
                image[static_cast<std::size_t>(p)] = target;
                used.insert(target);
                if (edges_ok(p) && self(self, idx + 1)) return true;
                used.erase(target);
                image[static_cast<std::size_t>(p)] = -1;
            }
            return false;
        };
        if (search(search, 0)) return true;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return false;
}

} // namespace detail

/// True iff there is a root-preserving injective label-exact embedding of the
/// pattern into the neighborhood under one consistent action bijection.
inline bool occurs(const LocalPattern& pattern, const RootedNeighborhood& neighborhood) {
    return detail::occurs_impl(pattern, neighborhood);
}

/// Finite-structural predicate given by witness and forbidden rooted local
/// patterns under declared bounds.
struct PatternScheme {
    PatternBounds bounds;
    std::vector<LocalPattern> witness;
    std::vector<LocalPattern> forbidden;

    void validate() const {
        if (witness.empty() && forbidden.empty())
            throw ValidationError(
                "scheme with empty witness and forbidden families; encode constants with "
                "the impossible two-vertex radius-zero pattern instead");
        for (const auto& p : witness) p.validate(bounds);
        for (const auto& p : forbidden) p.validate(bounds);
    }

    /// A radius-zero pattern with two distinct vertices; it cannot occur in
    /// any slice, since both vertices would have to land on the root.
    static LocalPattern impossible_pattern(int num_action_labels = 1) {
        LocalPattern p;
        p.radius = 0;
        p.num_action_labels = num_action_labels;
        p.root = 0;
        p.vertices.assign(2, std::vector<UnaryTable>(
                                 static_cast<std::size_t>(num_action_labels),
                                 UnaryTable{Rat(0), Rat(0)}));
        return p;
    }

    static PatternScheme constant_true() {
        PatternScheme s;
        s.forbidden.push_back(impossible_pattern());
        return s;
    }

    static PatternScheme constant_false() {
        PatternScheme s;
        s.witness.push_back(impossible_pattern());
        return s;
    }
};

/// The bounded-pattern disjunction: a nonempty witness family asserting some
/// occurrence, or a nonempty forbidden family asserting none. Empty families
/// disable their branch.
inline bool evaluate_scheme(const PatternScheme& scheme, const PairwiseSlice& slice) {
    scheme.validate();
    const SyntaxGraph g = syntax_graph(slice);
    std::vector<RootedNeighborhood> hoods;
    hoods.reserve(static_cast<std::size_t>(g.d));
    for (int v = 0; v < g.d; ++v)
        hoods.push_back(rooted_neighborhood(g, v, scheme.bounds.r_max));

    if (!scheme.witness.empty()) {
        for (const auto& n : hoods)
            for (const auto& p : scheme.witness)
                if (occurs(p, n)) return true;
    }
    if (!scheme.forbidden.empty()) {
        for (const auto& n : hoods)
            for (const auto& p : scheme.forbidden)
                if (occurs(p, n)) return false;
        return true;
    }
    return false;
}

struct StabilizationReport {
    bool stable = false;       // constant across the sample and equal to the default
    bool constant_value = false;
    std::size_t sample_size = 0;
};

/// Above the scheme's action bound no pattern can occur (the bijection
/// convention leaves no room), so the verdict must be the forbidden-branch
/// default on every such slice.
inline StabilizationReport
action_stabilization_check(const PatternScheme& scheme,
                           const std::vector<PairwiseSlice>& sample) {
    scheme.validate();
    if (sample.empty()) throw ValidationError("stabilization check needs a nonempty sample");
    for (const auto& slice : sample)
        if (slice.num_actions() <= scheme.bounds.a_max)
            throw ValidationError("sample slice does not exceed the scheme's action bound");
    const bool expected = !scheme.forbidden.empty();
    StabilizationReport report;
    report.sample_size = sample.size();
    report.constant_value = expected;
    report.stable = true;
    for (const auto& slice : sample)
        if (evaluate_scheme(scheme, slice) != expected) {
            report.stable = false;
            break;
        }
    return report;
}

} // namespace relcert
