#include <catch2/catch_amalgamated.hpp>

#include "relcert/obstruction.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace relcert;
using namespace relcert::testing;

namespace {

FiniteUniverse random_universe(std::mt19937_64& rng, std::size_t max_slices,
                               std::size_t max_edges) {
    std::uniform_int_distribution<std::size_t> n_dist(1, max_slices);
    const std::size_t n = n_dist(rng);
    std::vector<PairwiseSlice> slices;
    for (std::size_t i = 0; i < n; ++i) slices.push_back(random_slice(rng, 3, 2));
    std::uniform_int_distribution<std::size_t> e_dist(0, max_edges);
    std::uniform_int_distribution<std::size_t> v_dist(0, n - 1);
    std::vector<FiniteUniverse::Edge> edges;
    const std::size_t m = e_dist(rng);
    for (std::size_t k = 0; k < m; ++k)
        edges.push_back({v_dist(rng), v_dist(rng), std::nullopt});
    return FiniteUniverse(std::move(slices), std::move(edges));
}

std::set<std::size_t> random_subset(std::mt19937_64& rng, std::size_t n) {
    std::set<std::size_t> q;
    for (std::size_t i = 0; i < n; ++i)
        if (rng() % 2) q.insert(i);
    return q;
}

bool constant_on_components(const FiniteUniverse& u, const std::set<std::size_t>& q) {
    std::map<std::size_t, bool> value;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto [it, fresh] = value.emplace(u.component_of(i), q.count(i) > 0);
        if (!fresh && it->second != (q.count(i) > 0)) return false;
    }
    return true;
}

} // namespace

TEST_CASE("dominant-pair family reproduces the worked example at n = 3") {
    const auto bundle = make_family(TargetKind::DominantPair, 3);
    REQUIRE(mixed_difference(bundle.base, 0, 1, 0) == Rat(2));
    REQUIRE(mixed_difference(bundle.translated, 0, 1, 0) == Rat(2));
    REQUIRE(mixed_difference(bundle.translated, 1, 2, 0) == Rat(3));
    REQUIRE(bundle.report.base_predicate);
    REQUIRE_FALSE(bundle.report.translated_predicate);
    REQUIRE(bundle.report.pass());
    REQUIRE(bundle.report.invariance.affine_optimizer_checked);

    // Same quotient: optimizer sets equal at all 8 states.
    const auto pb = bundle.base.expand();
    const auto pv = bundle.translated.expand();
    for (StateIndex s = 0; s < pb.num_states(); ++s)
        REQUIRE(optimizer_set(pb, s) == optimizer_set(pv, s));
}

TEST_CASE("all four families verify at n = 3 and n = 4") {
    for (const auto kind : {TargetKind::DominantPair, TargetKind::MarginBounded,
                            TargetKind::GhostAction, TargetKind::OffsetSignature}) {
        for (const int n : {3, 4}) {
            CAPTURE(to_string(kind), n);
            const auto bundle = make_family(kind, n);
            REQUIRE(bundle.report.pass());
            // Signature holds on the base and fails on the translate.
            REQUIRE(bundle.report.base_predicate);
            REQUIRE_FALSE(bundle.report.translated_predicate);
            // Identical certification on both sides.
            const auto profile_base = certification_profile(bundle.base.expand());
            const auto profile_translated = certification_profile(bundle.translated.expand());
            REQUIRE(profile_base == profile_translated);
        }
    }
    REQUIRE_THROWS_AS(make_family(TargetKind::DominantPair, 2), ValidationError);
}

TEST_CASE("ghost family's ghost action is never optimal") {
    const auto bundle = make_family(TargetKind::GhostAction, 3);
    const auto p = bundle.base.expand();
    const int ghost = p.action_index("g");
    for (StateIndex s = 0; s < p.num_states(); ++s) {
        const auto opt = optimizer_set(p, s);
        REQUIRE(std::find(opt.begin(), opt.end(), ghost) == opt.end());
    }
}

TEST_CASE("verify_bundle from reconstructed data passes") {
    const auto original = make_family(TargetKind::OffsetSignature, 3);
    WitnessBundle cold;
    cold.base = original.base;
    cold.steps = original.steps;
    cold.translated = original.translated;
    cold.target = original.target;
    const auto report = verify_bundle(cold);
    REQUIRE(report.pass());
    REQUIRE(report.failures.empty());
}

TEST_CASE("tampered bundles fail verification with named invariants") {
    auto bundle = make_family(TargetKind::DominantPair, 3);

    SECTION("tampered translated coefficient breaks replay") {
        auto coeffs = bundle.translated.all_coeffs();
        coeffs[0].constant += Rat(1, 7);
        bundle.translated =
            PairwiseSlice(bundle.translated.dimension(), bundle.translated.actions(), coeffs);
        const auto report = verify_bundle(bundle);
        REQUIRE_FALSE(report.pass());
        REQUIRE_FALSE(report.replay_ok);
        REQUIRE_THAT(report.failures.front(),
                     Catch::Matchers::ContainsSubstring("trace replay"));
    }
    SECTION("a target kind that does not flip fails the disagreement check") {
        bundle.target = BundleTarget::builtin(TargetKind::GhostAction);
        const auto report = verify_bundle(bundle);
        REQUIRE_FALSE(report.pass());
        REQUIRE(report.replay_ok);
        REQUIRE_FALSE(report.flip_ok);
    }
}

TEST_CASE("falsify_classifier finds bundles for every built-in target") {
    for (const auto kind : {TargetKind::DominantPair, TargetKind::MarginBounded,
                            TargetKind::GhostAction, TargetKind::OffsetSignature}) {
        CAPTURE(to_string(kind));
        const auto outcome = falsify_classifier(BundleTarget::builtin(kind));
        REQUIRE(outcome.bundle.has_value());
        REQUIRE(outcome.bundle->report.pass());
        REQUIRE_FALSE(outcome.stats.timed_out);
    }
}

TEST_CASE("falsify_classifier finds nothing for the constant-true scheme") {
    FalsifyConfig config;
    config.random_candidates = 40;
    const auto outcome =
        falsify_classifier(BundleTarget::from_scheme(PatternScheme::constant_true()), config);
    REQUIRE_FALSE(outcome.bundle.has_value());
    REQUIRE(outcome.stats.bases_tried > 0);
    REQUIRE(outcome.stats.translates_tried > 0);
}

TEST_CASE("hull basics on the worked-example universe") {
    const auto bundle = make_family(TargetKind::DominantPair, 3);
    FiniteUniverse universe({bundle.base, bundle.translated},
                            {{0, 1, bundle.steps.front()}});
    universe.validate_edges();

    REQUIRE(hull(universe, {}).empty());
    REQUIRE(hull(universe, {0, 1}) == std::set<std::size_t>{0, 1});
    REQUIRE(hull(universe, {0}) == std::set<std::size_t>{0, 1});

    const auto separation = hull_separation(universe, {0});
    REQUIRE_FALSE(separation.classifiable);
    REQUIRE(separation.orbit_gap == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("edge replay validation catches wrong endpoints") {
    const auto bundle = make_family(TargetKind::DominantPair, 3);
    FiniteUniverse broken({bundle.base, bundle.base}, {{0, 1, bundle.steps.front()}});
    REQUIRE_THROWS_AS(broken.validate_edges(), VerificationError);
}

TEST_CASE("hull is a closure operator on random universes") {
    std::mt19937_64 rng(8080);
    for (int trial = 0; trial < 60; ++trial) {
        const auto universe = random_universe(rng, 12, 10);
        const auto q = random_subset(rng, universe.size());
        const auto h = hull(universe, q);
        // Extensive.
        for (const auto i : q) REQUIRE(h.count(i) == 1);
        // Idempotent.
        REQUIRE(hull(universe, h) == h);
        // Monotone: drop elements from q.
        std::set<std::size_t> smaller;
        for (const auto i : q)
            if (rng() % 2) smaller.insert(i);
        const auto hs = hull(universe, smaller);
        for (const auto i : hs) REQUIRE(h.count(i) == 1);
    }
}

TEST_CASE("fixed points of hull are exactly the orbit-constant predicates") {
    std::mt19937_64 rng(9090);
    for (int trial = 0; trial < 80; ++trial) {
        const auto universe = random_universe(rng, 12, 10);
        const auto q = random_subset(rng, universe.size());
        const bool fixed = hull(universe, q) == q;
        REQUIRE(fixed == constant_on_components(universe, q));
    }
}

TEST_CASE("hull separation verdict matches absence of mixed classes") {
    std::mt19937_64 rng(10101);
    for (int trial = 0; trial < 80; ++trial) {
        const auto universe = random_universe(rng, 12, 10);
        const auto q = random_subset(rng, universe.size());
        const auto separation = hull_separation(universe, q);
        REQUIRE(separation.classifiable == constant_on_components(universe, q));
        if (separation.classifiable) {
            REQUIRE(separation.least_classifier == hull(universe, q));
            // Least among reachability-constant supersets of Q: every
            // union-of-components containing Q contains Hull(Q).
            std::set<std::size_t> p;
            for (std::size_t i = 0; i < universe.size(); ++i)
                for (const auto j : q)
                    if (universe.reachable(i, j)) {
                        p.insert(i);
                        break;
                    }
            for (const auto i : separation.least_classifier) REQUIRE(p.count(i) == 1);
            REQUIRE(separation.least_classifier == p);
        } else {
            const auto [u, v] = separation.orbit_gap;
            REQUIRE(q.count(u) == 1);
            REQUIRE(q.count(v) == 0);
            REQUIRE(universe.reachable(u, v));
        }
    }
}

TEST_CASE("a full reachability class as Q is its own least classifier") {
    std::mt19937_64 rng(232323);
    for (int trial = 0; trial < 30; ++trial) {
        const auto universe = random_universe(rng, 10, 8);
        // Q = the component of vertex 0.
        std::set<std::size_t> q;
        for (std::size_t i = 0; i < universe.size(); ++i)
            if (universe.reachable(0, i)) q.insert(i);
        const auto separation = hull_separation(universe, q);
        REQUIRE(separation.classifiable);
        REQUIRE(separation.least_classifier == q);
    }
}
