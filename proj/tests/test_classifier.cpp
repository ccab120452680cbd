#include <catch2/catch_amalgamated.hpp>

#include "relcert/classifier.hpp"
#include "relcert/obstruction.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace relcert;
using namespace relcert::testing;

namespace {

PairwiseSlice unary_only_slice(int d, int num_actions, std::mt19937_64& rng) {
    return random_slice(rng, d, num_actions, /*pair_density=*/0.0);
}

/// Pattern matching "the root has an incident edge labeled exactly like the
/// dominant-pair base's anchor edge".
LocalPattern anchor_edge_pattern() {
    LocalPattern p;
    p.radius = 1;
    p.num_action_labels = 2;
    p.root = 0;
    p.vertices.assign(2, std::vector<UnaryTable>(2, UnaryTable{Rat(0), Rat(0)}));
    PairTable wa{};
    wa[1][1] = Rat(2);
    p.edges.push_back({0, 1, {wa, PairTable{}}});
    return p;
}

} // namespace

TEST_CASE("syntax graph of the worked example") {
    const auto base = dominant_pair_base(3);
    const auto g = syntax_graph(base);
    REQUIRE(g.d == 3);
    REQUIRE(g.edge_labels.size() == 1);
    REQUIRE(g.has_edge(0, 1));
    REQUIRE_FALSE(g.has_edge(1, 2));
    REQUIRE(g.vertex_labels[0][0] == UnaryTable{Rat(0), Rat(0)});

    const auto bundle = make_family(TargetKind::DominantPair, 3);
    const auto gv = syntax_graph(bundle.translated);
    REQUIRE(gv.edge_labels.size() == 2);
    REQUIRE(gv.has_edge(0, 1));
    REQUIRE(gv.has_edge(1, 2));
}

TEST_CASE("purely unary slices have edgeless syntax graphs") {
    std::mt19937_64 rng(17);
    const auto slice = unary_only_slice(4, 2, rng);
    REQUIRE(syntax_graph(slice).edge_labels.empty());
}

TEST_CASE("rooted neighborhoods") {
    const auto g = syntax_graph(dominant_pair_base(3));

    SECTION("radius zero is the labeled root alone") {
        const auto n = rooted_neighborhood(g, 1, 0);
        REQUIRE(n.vertices == std::vector<int>{1});
        REQUIRE(n.edge_labels.empty());
        REQUIRE(n.root == 1);
    }
    SECTION("radius one around vertex 0 picks up the anchor edge") {
        const auto n = rooted_neighborhood(g, 0, 1);
        REQUIRE(n.vertices == std::vector<int>{0, 1});
        REQUIRE(n.edge_labels.size() == 1);
        REQUIRE(n.distance.at(1) == 1);
    }
    SECTION("isolated vertices stay singletons at any radius") {
        const auto n = rooted_neighborhood(g, 2, 5);
        REQUIRE(n.vertices == std::vector<int>{2});
    }
    SECTION("bounds validation") {
        REQUIRE_THROWS_AS(rooted_neighborhood(g, 7, 1), ValidationError);
        REQUIRE_THROWS_AS(rooted_neighborhood(g, 0, -1), ValidationError);
    }
}

TEST_CASE("pattern occurrence") {
    const auto base = dominant_pair_base(3);
    const auto g = syntax_graph(base);

    SECTION("single-root pattern with matching labels occurs") {
        LocalPattern p;
        p.radius = 0;
        p.num_action_labels = 2;
        p.vertices.assign(1, std::vector<UnaryTable>(2, UnaryTable{Rat(0), Rat(0)}));
        REQUIRE(occurs(p, rooted_neighborhood(g, 0, 1)));
    }
    SECTION("the impossible two-vertex radius-zero pattern never occurs") {
        const auto p = PatternScheme::impossible_pattern(2);
        for (int v = 0; v < 3; ++v)
            REQUIRE_FALSE(occurs(p, rooted_neighborhood(g, v, 2)));
    }
    SECTION("a pattern demanding three action labels cannot embed in a 2-action slice") {
        LocalPattern p;
        p.radius = 0;
        p.num_action_labels = 3;
        p.vertices.assign(1, std::vector<UnaryTable>(3, UnaryTable{Rat(0), Rat(0)}));
        REQUIRE_FALSE(occurs(p, rooted_neighborhood(g, 0, 1)));
    }
    SECTION("anchor-edge pattern occurs at both anchor endpoints only") {
        const auto p = anchor_edge_pattern();
        REQUIRE(occurs(p, rooted_neighborhood(g, 0, 1)));
        REQUIRE(occurs(p, rooted_neighborhood(g, 1, 1)));
        REQUIRE_FALSE(occurs(p, rooted_neighborhood(g, 2, 1)));
    }
    SECTION("label-exact matching rejects different coefficients") {
        auto p = anchor_edge_pattern();
        p.edges[0].tables[0][1][1] = Rat(99);
        REQUIRE_FALSE(occurs(p, rooted_neighborhood(g, 0, 1)));
    }
}

TEST_CASE("occurrence is monotone in the neighborhood radius") {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 40; ++trial) {
        const auto slice = random_slice(rng, 5, 2);
        const auto g = syntax_graph(slice);
        const auto p = anchor_edge_pattern();
        for (int v = 0; v < g.d; ++v)
            for (int r = 0; r < 3; ++r)
                if (occurs(p, rooted_neighborhood(g, v, r)))
                    REQUIRE(occurs(p, rooted_neighborhood(g, v, r + 1)));
    }
}

TEST_CASE("constant schemes evaluate as constants on a random corpus") {
    std::mt19937_64 rng(5555);
    const auto truthy = PatternScheme::constant_true();
    const auto falsy = PatternScheme::constant_false();
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<int> d_dist(1, 5);
        std::uniform_int_distribution<int> a_dist(1, 4);
        const auto slice = random_slice(rng, d_dist(rng), a_dist(rng));
        REQUIRE(evaluate_scheme(truthy, slice));
        REQUIRE_FALSE(evaluate_scheme(falsy, slice));
    }
}

TEST_CASE("witness scheme for the anchor edge separates base from unary slices") {
    PatternScheme scheme;
    scheme.bounds = {1, 2, 2, Rat(8)};
    scheme.witness.push_back(anchor_edge_pattern());
    scheme.validate();

    REQUIRE(evaluate_scheme(scheme, dominant_pair_base(3)));
    std::mt19937_64 rng(31);
    REQUIRE_FALSE(evaluate_scheme(scheme, unary_only_slice(3, 2, rng)));
}

TEST_CASE("scheme validation") {
    PatternScheme empty;
    REQUIRE_THROWS_AS(empty.validate(), ValidationError);

    PatternScheme overbound;
    auto p = anchor_edge_pattern();
    p.edges[0].tables[0][1][1] = Rat(1000);
    overbound.bounds = {1, 2, 2, Rat(8)};
    overbound.witness.push_back(p);
    REQUIRE_THROWS_AS(overbound.validate(), ValidationError);

    PatternScheme oversized;
    oversized.bounds = {1, 1, 2, Rat(8)};
    oversized.witness.push_back(anchor_edge_pattern()); // two vertices > n_max 1
    REQUIRE_THROWS_AS(oversized.validate(), ValidationError);
}

TEST_CASE("scheme verdicts stabilize above the action bound") {
    std::mt19937_64 rng(141);

    PatternScheme witness_only;
    witness_only.bounds = {1, 2, 2, Rat(8)};
    witness_only.witness.push_back(anchor_edge_pattern());

    PatternScheme forbidden_only = PatternScheme::constant_true();

    std::vector<PairwiseSlice> sample;
    for (int extra = 1; extra <= 3; ++extra)
        sample.push_back(random_slice(rng, 3, witness_only.bounds.a_max + extra));

    const auto witness_report = action_stabilization_check(witness_only, sample);
    REQUIRE(witness_report.stable);
    REQUIRE_FALSE(witness_report.constant_value); // empty forbidden family

    const auto forbidden_report = action_stabilization_check(forbidden_only, sample);
    REQUIRE(forbidden_report.stable);
    REQUIRE(forbidden_report.constant_value);

    // Slices at or below the bound are rejected as a sample.
    std::vector<PairwiseSlice> small{random_slice(rng, 3, 2)};
    REQUIRE_THROWS_AS(action_stabilization_check(witness_only, small), ValidationError);
}

TEST_CASE("verdicts above the action bound are constant on random corpora") {
    std::mt19937_64 rng(161);
    PatternScheme scheme;
    scheme.bounds = {1, 2, 2, Rat(8)};
    scheme.witness.push_back(anchor_edge_pattern());
    scheme.forbidden.push_back(PatternScheme::impossible_pattern(2));
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_int_distribution<int> a_dist(3, 6);
        std::uniform_int_distribution<int> d_dist(1, 4);
        const auto slice = random_slice(rng, d_dist(rng), a_dist(rng));
        // Above the bound only the forbidden branch can fire, and it holds
        // vacuously.
        REQUIRE(evaluate_scheme(scheme, slice));
    }
}
