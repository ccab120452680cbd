#include <catch2/catch_amalgamated.hpp>

#include "relcert/realizability.hpp"

#include "oracles.hpp"

using namespace relcert;
using namespace relcert::testing;

TEST_CASE("identity labeling realizes a quotient of size m") {
    for (const int m : {1, 2, 5, 9}) {
        const CoordinateSpace space({m});
        Labeling phi;
        for (int s = 0; s < m; ++s) phi.labels.push_back("t" + std::to_string(s));
        const auto p = realize_labeling(space, phi);
        const auto q = quotient(p);
        REQUIRE(q.class_count() == static_cast<std::size_t>(m));
        for (StateIndex s = 0; s < p.num_states(); ++s) {
            REQUIRE(optimizer_set_ids(p, s) == std::vector<std::string>{phi.labels[s]});
            REQUIRE(q.class_of[s] == s); // singleton classes in state order
        }
    }
}

TEST_CASE("constant labeling gives one class and empty relevant set") {
    const CoordinateSpace space({2, 2, 2});
    const Labeling phi{std::vector<std::string>(8, "only")};
    const auto p = realize_labeling(space, phi);
    REQUIRE(quotient(p).class_count() == 1);
    const auto profile = certification_profile(p, {.verify = true});
    REQUIRE(profile.relevant.empty());
}

TEST_CASE("parity labeling on the 3-cube has two classes, all coordinates relevant") {
    const CoordinateSpace space({2, 2, 2});
    Labeling phi;
    for (StateIndex s = 0; s < space.state_count(); ++s) {
        int parity = 0;
        for (int i = 0; i < 3; ++i) parity ^= space.coord_value(s, i);
        phi.labels.push_back(parity ? "odd" : "even");
    }
    const auto p = realize_labeling(space, phi);
    REQUIRE(quotient(p).class_count() == 2);
    REQUIRE(oracle_relevant_set(p) == std::vector<int>{0, 1, 2});
    const auto profile = certification_profile(p, {.verify = true});
    REQUIRE(profile.relevant == std::vector<int>{0, 1, 2});
}

TEST_CASE("labeling must be total") {
    const CoordinateSpace space({2, 2});
    REQUIRE_THROWS_AS(realize_labeling(space, Labeling{{"x"}}), ValidationError);
}

TEST_CASE("random labelings: exact kernel recovery on spaces up to 64 states") {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> d_dist(1, 3);
        std::uniform_int_distribution<int> card_dist(1, 4);
        const int d = d_dist(rng);
        std::vector<int> domains;
        for (int i = 0; i < d; ++i) domains.push_back(card_dist(rng));
        const CoordinateSpace space(domains);
        std::uniform_int_distribution<int> label_dist(0, 5);
        Labeling phi;
        for (StateIndex s = 0; s < space.state_count(); ++s)
            phi.labels.push_back("L" + std::to_string(label_dist(rng)));
        const auto p = realize_labeling(space, phi);
        const auto q = quotient(p);
        REQUIRE(q.class_count() == phi.alphabet().size());
        for (StateIndex s = 0; s < space.state_count(); ++s)
            for (StateIndex t = 0; t < space.state_count(); ++t)
                REQUIRE((q.class_of[s] == q.class_of[t]) ==
                        (phi.labels[s] == phi.labels[t]));
    }
}

TEST_CASE("realize_equivalence reproduces the input partition") {
    const CoordinateSpace space({2, 2});

    SECTION("discrete partition") {
        std::vector<std::vector<StateIndex>> blocks{{0}, {1}, {2}, {3}};
        const auto p = realize_equivalence(space, blocks);
        REQUIRE(partition_blocks(quotient(p)) == blocks);
    }
    SECTION("indiscrete partition") {
        std::vector<std::vector<StateIndex>> blocks{{0, 1, 2, 3}};
        const auto p = realize_equivalence(space, blocks);
        REQUIRE(quotient(p).class_count() == 1);
    }
    SECTION("xor partition {{00,11},{01,10}} makes both coordinates relevant") {
        std::vector<std::vector<StateIndex>> blocks{{0, 3}, {1, 2}};
        const auto p = realize_equivalence(space, blocks);
        const auto got = partition_blocks(quotient(p));
        REQUIRE(got.size() == 2);
        REQUIRE(got[0] == std::vector<StateIndex>{0, 3});
        REQUIRE(got[1] == std::vector<StateIndex>{1, 2});
        REQUIRE(oracle_relevant_set(p) == std::vector<int>{0, 1});
    }
    SECTION("offending blocks are reported") {
        REQUIRE_THROWS_WITH(realize_equivalence(space, {{0, 1}, {1, 2, 3}}),
                            Catch::Matchers::ContainsSubstring("blocks 0 and 1"));
        REQUIRE_THROWS_WITH(realize_equivalence(space, {{0, 1}}),
                            Catch::Matchers::ContainsSubstring("missing"));
    }
}

TEST_CASE("realize_equivalence round-trips partition extraction") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_problem(rng, 3, 3, 3);
        const auto blocks = partition_blocks(quotient(p));
        const auto realized = realize_equivalence(p.space(), blocks);
        REQUIRE(partition_blocks(quotient(realized)) == blocks);
    }
}
