// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance and time limit is pinned here.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "relcert/relcert.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace relcert;
using namespace relcert::testing;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        ok = false;
        if (detail.empty()) detail = why;
    }
    void expect(bool condition, const std::string& why) {
        if (!condition) fail(why);
    }
};

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// --------------------------------------------------------------------------
// 1. Standing example, exact, < 1 ms.
// --------------------------------------------------------------------------
void criterion_1(Check& check) {
    const auto p = standing_example(); // construction outside the timed region
    const auto start = Clock::now();
    const auto q = quotient(p);
    const auto profile = certification_profile(p);
    const bool coord1_irrelevant = !is_relevant(p, 1);
    const double elapsed = ms_since(start);

    check.expect(q.class_count() == 2, "class count != 2");
    check.expect(partition_blocks(q) ==
                     std::vector<std::vector<StateIndex>>{{0, 1}, {2, 3}},
                 "quotient blocks differ from {{00,01},{10,11}}");
    check.expect(q.classes[0] == std::vector<int>{0, 1} && q.classes[1] == std::vector<int>{0},
                 "optimizer sets differ from {a,b},{a}");
    check.expect(profile.relevant == std::vector<int>{0}, "relevant set != {0}");
    check.expect(coord1_irrelevant, "coordinate 1 not irrelevant");
    check.expect(elapsed < 1.0, "took " + std::to_string(elapsed) + " ms (limit 1 ms)");
}

// --------------------------------------------------------------------------
// 2. Worked orbit example, exact, < 10 ms.
// --------------------------------------------------------------------------
void criterion_2(Check& check) {
    const auto start = Clock::now();
    const auto base = dominant_pair_base(3);
    const auto applied =
        apply_trace(base, {AffineSliceStep{orbit_alpha(3), Rat(1)}});
    const auto& v = applied.result;

    check.expect(mixed_difference(base, 0, 1, 0) == Rat(2), "Delta_01(a) != 2 in U");
    check.expect(mixed_difference(v, 0, 1, 0) == Rat(2), "Delta_01(a) != 2 in V");
    check.expect(mixed_difference(v, 1, 2, 0) == Rat(3), "Delta_12(a) != 3 in V");

    const auto pb = base.expand();
    const auto pv = v.expand();
    for (StateIndex s = 0; s < 8; ++s) {
        const State x = pb.space().state_at(s);
        const Rat expected = Rat(2) * x[0] * x[1];
        check.expect(pv.utility(0, s) - pv.utility(1, s) == expected,
                     "V(a,x)-V(b,x) != 2x0x1 at state " + pb.space().render(s));
        check.expect(optimizer_set(pb, s) == optimizer_set(pv, s),
                     "optimizer sets differ at state " + pb.space().render(s));
    }
    check.expect(target_predicate(base, TargetKind::DominantPair), "dominant_pair false on U");
    check.expect(!target_predicate(v, TargetKind::DominantPair), "dominant_pair true on V");
    for (std::uint32_t mask = 0; mask < 8; ++mask) {
        const auto coords = subset_from_mask(mask, 3);
        check.expect(is_sufficient(pb, coords) == is_sufficient(pv, coords),
                     "sufficiency differs on subset mask " + std::to_string(mask));
    }
    const double elapsed = ms_since(start);
    check.expect(elapsed < 10.0, "took " + std::to_string(elapsed) + " ms (limit 10 ms)");
}

// --------------------------------------------------------------------------
// 3. Realizability: 200 random labelings on spaces <= 64 states, < 1 s.
// --------------------------------------------------------------------------
void criterion_3(Check& check) {
    const auto start = Clock::now();
    std::mt19937_64 rng(300);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> d_dist(1, 3);
        std::uniform_int_distribution<int> card_dist(1, 4);
        const int d = d_dist(rng);
        std::vector<int> domains;
        for (int i = 0; i < d; ++i) domains.push_back(card_dist(rng));
        const CoordinateSpace space(domains);
        std::uniform_int_distribution<int> label_dist(0, 6);
        Labeling phi;
        for (StateIndex s = 0; s < space.state_count(); ++s)
            phi.labels.push_back("L" + std::to_string(label_dist(rng)));
        const auto p = realize_labeling(space, phi);
        const auto q = quotient(p);
        if (q.class_count() != phi.alphabet().size()) {
            check.fail("class count != |range| at trial " + std::to_string(trial));
            return;
        }
        for (StateIndex s = 0; s < space.state_count(); ++s)
            for (StateIndex t = s + 1; t < space.state_count(); ++t)
                if ((q.class_of[s] == q.class_of[t]) != (phi.labels[s] == phi.labels[t])) {
                    check.fail("kernel mismatch at trial " + std::to_string(trial));
                    return;
                }
    }
    const double elapsed = ms_since(start);
    check.expect(elapsed < 1000.0, "took " + std::to_string(elapsed) + " ms (limit 1 s)");
}

// --------------------------------------------------------------------------
// 4. Closure invariance: 500 random (slice, trace <= 4 steps) pairs, < 30 s.
// --------------------------------------------------------------------------
std::vector<ClosureStep> random_trace(std::mt19937_64& rng, const PairwiseSlice& base,
                                      int max_steps) {
    PairwiseSlice scratch = base;
    std::uniform_int_distribution<int> count_dist(0, max_steps);
    std::uniform_int_distribution<int> kind_dist(0, 4);
    std::vector<ClosureStep> steps;
    const int n = count_dist(rng);
    for (int k = 0; k < n; ++k) {
        const int d = scratch.dimension();
        ClosureStep step;
        switch (kind_dist(rng)) {
            case 0: {
                std::vector<int> perm(static_cast<std::size_t>(scratch.num_actions()));
                std::iota(perm.begin(), perm.end(), 0);
                std::shuffle(perm.begin(), perm.end(), rng);
                step = RelabelActionsStep{perm};
                break;
            }
            case 1: {
                std::vector<int> perm(static_cast<std::size_t>(d));
                std::iota(perm.begin(), perm.end(), 0);
                std::shuffle(perm.begin(), perm.end(), rng);
                step = RelabelCoordsStep{perm};
                break;
            }
            case 2: {
                AffineSliceStep affine;
                affine.alpha = CoeffBundle::zero(d);
                affine.alpha.constant = random_rat(rng);
                for (int i = 0; i < d; ++i)
                    affine.alpha.unary[static_cast<std::size_t>(i)] = {random_rat(rng),
                                                                       random_rat(rng)};
                if (d >= 2) {
                    std::uniform_int_distribution<int> coord(0, d - 1);
                    int i = coord(rng), j = coord(rng);
                    if (i != j) {
                        if (i > j) std::swap(i, j);
                        PairTable w{};
                        w[1][1] = random_rat(rng);
                        affine.alpha.pairs.emplace(CoordPair{i, j}, w);
                    }
                }
                const Rat betas[] = {Rat(1), Rat(2), Rat(1, 2), Rat(3)};
                affine.beta = betas[rng() % 4];
                step = std::move(affine);
                break;
            }
            case 3: {
                std::uniform_int_distribution<int> src(0, scratch.num_actions() - 1);
                step = DuplicateActionStep{
                    scratch.actions()[static_cast<std::size_t>(src(rng))]};
                break;
            }
            default:
                step = ExtendIrrelevantStep{};
                break;
        }
        scratch = apply_step(scratch, step).first;
        steps.push_back(std::move(step));
    }
    return steps;
}

void criterion_4(Check& check) {
    const auto start = Clock::now();
    std::mt19937_64 rng(400);
    for (int trial = 0; trial < 500; ++trial) {
        std::uniform_int_distribution<int> d_dist(1, 5);
        std::uniform_int_distribution<int> a_dist(1, 3);
        const auto base = random_slice(rng, d_dist(rng), a_dist(rng));
        const auto steps = random_trace(rng, base, 4);
        try {
            const auto applied = apply_trace(base, steps);
            verify_invariance(base, applied.result, applied.trace,
                              {.subset_cap = 5, .seed = rng()});
        } catch (const std::exception& e) {
            check.fail("trial " + std::to_string(trial) + ": " + e.what());
            return;
        }
        // Affine argmax invariance, exercised on every trial.
        AffineSliceStep affine{CoeffBundle::pair_term(
                                   base.dimension(), 0,
                                   std::max(1, base.dimension() - 1), random_rat(rng)),
                               Rat(1, 2)};
        if (base.dimension() == 1) affine.alpha = CoeffBundle::zero(1);
        const auto shifted = apply_step(base, affine).first;
        const auto pb = base.expand();
        const auto ps = shifted.expand();
        for (StateIndex s = 0; s < pb.num_states(); ++s)
            if (optimizer_set(pb, s) != optimizer_set(ps, s)) {
                check.fail("affine argmax violation at trial " + std::to_string(trial));
                return;
            }
    }
    const double elapsed = ms_since(start);
    check.expect(elapsed < 30000.0, "took " + std::to_string(elapsed) + " ms (limit 30 s)");
}

// --------------------------------------------------------------------------
// 5. Symmetric dichotomy: 300 random symmetric slices.
// --------------------------------------------------------------------------
void criterion_5(Check& check) {
    std::mt19937_64 rng(500);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<int> d_dist(2, 6);
        std::uniform_int_distribution<int> a_dist(1, 3);
        const int d = d_dist(rng);
        const auto slice = random_symmetric_slice(rng, d, a_dist(rng));
        const auto g = interaction_graph(slice, GraphMode::Decision);
        const std::size_t complete = static_cast<std::size_t>(d) * (d - 1) / 2;
        if (g.edge_count() != 0 && g.edge_count() != complete) {
            check.fail("intermediate edge count " + std::to_string(g.edge_count()) +
                       " at trial " + std::to_string(trial));
            return;
        }
    }
}

// --------------------------------------------------------------------------
// 6. Compression: 300 random problems with injected duplicate profiles.
// --------------------------------------------------------------------------
void criterion_6(Check& check) {
    std::mt19937_64 rng(600);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = random_problem(rng, 5, 2, 3);
        auto utility = p.utility_table();
        auto actions = p.actions();
        std::uniform_int_distribution<int> extra_dist(1, 3);
        const int extra = extra_dist(rng);
        for (int e = 0; e < extra; ++e) {
            std::uniform_int_distribution<std::size_t> pick(0, utility.size() - 1);
            utility.push_back(utility[pick(rng)]);
            actions.push_back("dup" + std::to_string(e));
        }
        std::set<std::vector<Rat>> distinct(utility.begin(), utility.end());
        const DecisionProblem injected(p.space(), actions, utility);
        try {
            const auto c = compress_profiles(injected, {.verify = true, .subset_cap = 5});
            if (static_cast<std::size_t>(c.compressed.num_actions()) != distinct.size()) {
                check.fail("compressed count != distinct profiles at trial " +
                           std::to_string(trial));
                return;
            }
        } catch (const std::exception& e) {
            check.fail("trial " + std::to_string(trial) + ": " + e.what());
            return;
        }
    }
}

// --------------------------------------------------------------------------
// 7. Transfer suite: 200 random specs plus the worked PAC example.
// --------------------------------------------------------------------------
void criterion_7(Check& check) {
    std::mt19937_64 rng(700);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> d_dist(1, 4);
        std::uniform_int_distribution<int> card_dist(1, 3);
        const int d = d_dist(rng);
        std::vector<int> domains;
        for (int i = 0; i < d; ++i) domains.push_back(card_dist(rng));
        const CoordinateSpace space(domains);

        AdmissibilitySpec spec;
        std::uniform_int_distribution<int> variant_dist(0, 2);
        std::uniform_int_distribution<int> out_dist(1, 4);
        const int n_out = out_dist(rng);
        for (int o = 0; o < n_out; ++o) spec.outputs.push_back("h" + std::to_string(o));
        switch (variant_dist(rng)) {
            case 0: {
                spec.variant = SpecVariant::Deterministic;
                std::uniform_int_distribution<int> pick(0, n_out - 1);
                for (StateIndex s = 0; s < space.state_count(); ++s)
                    spec.deterministic_map.push_back(pick(rng));
                break;
            }
            case 1: {
                spec.variant = SpecVariant::SetValued;
                for (StateIndex s = 0; s < space.state_count(); ++s) {
                    std::set<int> fiber;
                    for (int o = 0; o < n_out; ++o)
                        if (rng() % 2) fiber.insert(o);
                    spec.set_valued.push_back(std::move(fiber));
                }
                break;
            }
            default: {
                spec.variant = SpecVariant::Relational;
                for (StateIndex s = 0; s < space.state_count(); ++s)
                    for (int o = 0; o < n_out; ++o)
                        if (rng() % 3 == 0) spec.pairs.emplace_back(s, o);
                break;
            }
        }
        try {
            transfer_check(spec, space, {.subset_cap = 4});
        } catch (const std::exception& e) {
            check.fail("trial " + std::to_string(trial) + ": " + e.what());
            return;
        }
    }

    // PAC worked example: certified sets {h0,h1}, {h0,h1}, {h0}; p1 carries
    // the whole distinction.
    AdmissibilitySpec pac;
    pac.variant = SpecVariant::SetValued;
    pac.outputs = {"h0", "h1", "h2"};
    const CoordinateSpace cube({2, 2, 2});
    for (StateIndex s = 0; s < cube.state_count(); ++s) {
        std::set<int> fiber{0};
        if (cube.coord_value(s, 1) == 1) fiber.insert(1);
        pac.set_valued.push_back(std::move(fiber));
    }
    const StateIndex st_s = cube.index_of({1, 1, 0});
    const StateIndex st_t = cube.index_of({0, 1, 0});
    const StateIndex st_u = cube.index_of({1, 0, 0});
    check.expect(pac.admissible(st_s) == std::set<int>{0, 1}, "Adm(s) != {h0,h1}");
    check.expect(pac.admissible(st_t) == std::set<int>{0, 1}, "Adm(t) != {h0,h1}");
    check.expect(pac.admissible(st_u) == std::set<int>{0}, "Adm(u) != {h0}");
    const auto induced = induce_problem(pac, cube);
    check.expect(is_sufficient(induced, {1}), "p1 not sufficient");
    check.expect(is_relevant(induced, 1), "p1 not relevant");
    check.expect(!is_relevant(induced, 0) && !is_relevant(induced, 2),
                 "p0/p2 not irrelevant");
    try {
        transfer_check(pac, cube, {.subset_cap = 4});
    } catch (const std::exception& e) {
        check.fail(std::string("PAC transfer check: ") + e.what());
    }
}

// --------------------------------------------------------------------------
// 8. Stability: 200 certified random pairs plus flip pairs down to 2^-40.
// --------------------------------------------------------------------------
void criterion_8(Check& check) {
    std::mt19937_64 rng(800);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = random_problem(rng, 4, 3, 3);
        if (p.num_actions() == 1) {
            auto utility = p.utility_table();
            utility.push_back(utility[0]);
            auto actions = p.actions();
            actions.push_back("shadow");
            p = DecisionProblem(p.space(), actions, utility);
        }
        // Give every state a strict winner with margin 5, then perturb by <= 1.
        auto utility = p.utility_table();
        std::uniform_int_distribution<int> pick(0, p.num_actions() - 1);
        for (StateIndex s = 0; s < p.num_states(); ++s) {
            Rat best = utility[0][s];
            for (const auto& col : utility)
                if (col[s] > best) best = col[s];
            utility[static_cast<std::size_t>(pick(rng))][s] = best + Rat(5);
        }
        const DecisionProblem d(p.space(), p.actions(), utility);
        auto perturbed = utility;
        std::uniform_int_distribution<int> num(-3, 3);
        for (auto& col : perturbed)
            for (auto& u : col) u += Rat(num(rng), 3);
        const DecisionProblem dp(p.space(), p.actions(), perturbed);
        try {
            const auto cert = global_stability_certificate(d, dp, {.verify = true,
                                                                   .subset_cap = 5});
            if (!cert.certified) {
                check.fail("hypothesis unexpectedly failed at trial " + std::to_string(trial));
                return;
            }
            if (oracle_relevant_set(d) != oracle_relevant_set(dp)) {
                check.fail("profiles differ at trial " + std::to_string(trial));
                return;
            }
        } catch (const std::exception& e) {
            check.fail("trial " + std::to_string(trial) + ": " + e.what());
            return;
        }
    }

    for (const Rat& eps : {Rat(1), Rat(1, 1 << 10), Rat(1, StateIndex(1) << 20),
                           Rat(BigInt(1), BigInt(1) << 40)}) {
        for (const auto kind : {FlipKind::Relevance, FlipKind::Sufficiency}) {
            const auto flip = make_flip_pair(eps, kind);
            check.expect(uniform_distance(flip.tracking, flip.flat) <= eps,
                         "flip distance exceeds epsilon " + rat_to_string(eps));
            check.expect(is_relevant(flip.tracking, 0) && !is_relevant(flip.flat, 0),
                         "relevance flip failed at epsilon " + rat_to_string(eps));
            check.expect(is_sufficient(flip.flat, {}) && !is_sufficient(flip.tracking, {}),
                         "sufficiency flip failed at epsilon " + rat_to_string(eps));
        }
    }
}

// --------------------------------------------------------------------------
// 9. Bounded-pattern classifier: constants, stabilization, falsification.
// --------------------------------------------------------------------------
void criterion_9(Check& check) {
    std::mt19937_64 rng(900);
    const auto truthy = PatternScheme::constant_true();
    const auto falsy = PatternScheme::constant_false();
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> d_dist(1, 5);
        std::uniform_int_distribution<int> a_dist(1, 4);
        const auto slice = random_slice(rng, d_dist(rng), a_dist(rng));
        if (!evaluate_scheme(truthy, slice) || evaluate_scheme(falsy, slice)) {
            check.fail("constant scheme varied at trial " + std::to_string(trial));
            return;
        }
    }

    PatternScheme bounded;
    bounded.bounds = {1, 2, 2, Rat(8)};
    LocalPattern anchor;
    anchor.radius = 1;
    anchor.num_action_labels = 2;
    anchor.vertices.assign(2, std::vector<UnaryTable>(2, UnaryTable{Rat(0), Rat(0)}));
    PairTable w{};
    w[1][1] = Rat(2);
    anchor.edges.push_back({0, 1, {w, PairTable{}}});
    bounded.witness.push_back(anchor);
    std::vector<PairwiseSlice> sample;
    std::uniform_int_distribution<int> extra(1, 3);
    for (int trial = 0; trial < 100; ++trial)
        sample.push_back(random_slice(rng, 3, bounded.bounds.a_max + extra(rng)));
    const auto stab = action_stabilization_check(bounded, sample);
    check.expect(stab.stable, "verdicts varied above the action bound");
    check.expect(stab.constant_value == false, "constant differs from the F-branch default");

    for (const auto kind : {TargetKind::DominantPair, TargetKind::MarginBounded,
                            TargetKind::GhostAction, TargetKind::OffsetSignature}) {
        const auto start = Clock::now();
        FalsifyConfig config;
        config.time_budget = std::chrono::milliseconds(60000);
        const auto outcome = falsify_classifier(BundleTarget::builtin(kind), config);
        const double elapsed = ms_since(start);
        if (!outcome.bundle || !outcome.bundle->report.pass()) {
            check.fail(std::string("no verified bundle for ") + to_string(kind));
            return;
        }
        if (elapsed >= 60000.0) {
            check.fail(std::string("falsify exceeded 60 s for ") + to_string(kind));
            return;
        }
    }
}

// --------------------------------------------------------------------------
// 10. Hull algebra on 100 random universes.
// --------------------------------------------------------------------------
void criterion_10(Check& check) {
    std::mt19937_64 rng(1000);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<std::size_t> n_dist(1, 20);
        const std::size_t n = n_dist(rng);
        std::vector<PairwiseSlice> slices;
        for (std::size_t i = 0; i < n; ++i) slices.push_back(random_slice(rng, 3, 2));
        std::uniform_int_distribution<std::size_t> e_dist(0, 15);
        std::uniform_int_distribution<std::size_t> v_dist(0, n - 1);
        std::vector<FiniteUniverse::Edge> edges;
        const std::size_t m = e_dist(rng);
        for (std::size_t k = 0; k < m; ++k)
            edges.push_back({v_dist(rng), v_dist(rng), std::nullopt});
        const FiniteUniverse universe(std::move(slices), std::move(edges));

        std::set<std::size_t> q;
        for (std::size_t i = 0; i < n; ++i)
            if (rng() % 2) q.insert(i);

        const auto h = hull(universe, q);
        for (const auto i : q)
            if (!h.count(i)) {
                check.fail("hull not extensive at trial " + std::to_string(trial));
                return;
            }
        if (hull(universe, h) != h) {
            check.fail("hull not idempotent at trial " + std::to_string(trial));
            return;
        }
        std::set<std::size_t> smaller;
        for (const auto i : q)
            if (rng() % 2) smaller.insert(i);
        for (const auto i : hull(universe, smaller))
            if (!h.count(i)) {
                check.fail("hull not monotone at trial " + std::to_string(trial));
                return;
            }

        bool constant_on_classes = true;
        for (std::size_t i = 0; i < n && constant_on_classes; ++i)
            for (std::size_t j = 0; j < n && constant_on_classes; ++j)
                if (universe.reachable(i, j) && q.count(i) != q.count(j))
                    constant_on_classes = false;
        if ((hull(universe, q) == q) != constant_on_classes) {
            check.fail("fixed-point/orbit-constant equivalence failed at trial " +
                       std::to_string(trial));
            return;
        }

        const auto separation = hull_separation(universe, q);
        if (separation.classifiable != constant_on_classes) {
            check.fail("separation verdict mismatch at trial " + std::to_string(trial));
            return;
        }
        if (separation.classifiable) {
            // Minimality: the least classifier is exactly the union of the
            // reachability classes meeting Q.
            std::set<std::size_t> expected;
            for (std::size_t i = 0; i < n; ++i)
                for (const auto j : q)
                    if (universe.reachable(i, j)) {
                        expected.insert(i);
                        break;
                    }
            if (separation.least_classifier != expected) {
                check.fail("least classifier not minimal at trial " + std::to_string(trial));
                return;
            }
        } else {
            const auto [u, v] = separation.orbit_gap;
            if (!(q.count(u) == 1 && q.count(v) == 0 && universe.reachable(u, v))) {
                check.fail("orbit-gap witness invalid at trial " + std::to_string(trial));
                return;
            }
        }
    }
}

// --------------------------------------------------------------------------
// 11. Taxonomy: table integrity and parent-tree decompositions.
// --------------------------------------------------------------------------
bool decomposition_valid(const TreeDecomposition& td, int d,
                         const std::vector<std::pair<int, int>>& graph_edges) {
    for (const auto& bag : td.bags)
        if (bag.size() > 2) return false;
    std::vector<bool> covered(static_cast<std::size_t>(d), false);
    for (const auto& bag : td.bags)
        for (const int v : bag) covered[static_cast<std::size_t>(v)] = true;
    for (int v = 0; v < d; ++v)
        if (!covered[static_cast<std::size_t>(v)]) return false;
    for (const auto& [u, v] : graph_edges) {
        bool inside = false;
        for (const auto& bag : td.bags)
            if (std::find(bag.begin(), bag.end(), u) != bag.end() &&
                std::find(bag.begin(), bag.end(), v) != bag.end())
                inside = true;
        if (!inside) return false;
    }
    if (td.tree_edges.size() + 1 != td.bags.size()) return false;
    std::vector<std::vector<std::size_t>> adj(td.bags.size());
    for (const auto& [x, y] : td.tree_edges) {
        if (x >= td.bags.size() || y >= td.bags.size()) return false;
        adj[x].push_back(y);
        adj[y].push_back(x);
    }
    std::vector<bool> seen(td.bags.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const auto b = stack.back();
        stack.pop_back();
        for (const auto nb : adj[b])
            if (!seen[nb]) {
                seen[nb] = true;
                stack.push_back(nb);
            }
    }
    for (const bool s : seen)
        if (!s) return false;
    for (int v = 0; v < d; ++v) {
        std::set<std::size_t> holding;
        for (std::size_t b = 0; b < td.bags.size(); ++b)
            if (std::find(td.bags[b].begin(), td.bags[b].end(), v) != td.bags[b].end())
                holding.insert(b);
        if (holding.size() <= 1) continue;
        std::set<std::size_t> reached{*holding.begin()};
        std::vector<std::size_t> frontier{*holding.begin()};
        while (!frontier.empty()) {
            const auto b = frontier.back();
            frontier.pop_back();
            for (const auto nb : adj[b])
                if (holding.count(nb) && !reached.count(nb)) {
                    reached.insert(nb);
                    frontier.push_back(nb);
                }
        }
        if (reached != holding) return false;
    }
    return true;
}

void criterion_11(Check& check) {
    try {
        check_table_integrity();
    } catch (const std::exception& e) {
        check.fail(std::string("table integrity: ") + e.what());
        return;
    }

    std::mt19937_64 rng(1100);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> d_dist(1, 7);
        const int d = d_dist(rng);
        std::vector<int> parent(static_cast<std::size_t>(d), -1);
        for (int v = 1; v < d; ++v) {
            std::uniform_int_distribution<int> p_dist(-1, v - 1);
            parent[static_cast<std::size_t>(v)] = p_dist(rng);
        }
        CoeffBundle a = CoeffBundle::zero(d);
        std::vector<std::pair<int, int>> edges;
        for (int v = 0; v < d; ++v)
            if (parent[static_cast<std::size_t>(v)] >= 0) {
                const int p = parent[static_cast<std::size_t>(v)];
                PairTable w{};
                w[1][1] = Rat(1);
                a.pairs.emplace(CoordPair{std::min(p, v), std::max(p, v)}, w);
                edges.emplace_back(p, v);
            }
        const PairwiseSlice slice(d, {"a", "b"}, {a, CoeffBundle::zero(d)});
        const auto result = detect(slice, Detector::ParentTree);
        if (!result.hit || !result.decomposition ||
            !decomposition_valid(*result.decomposition, d, edges)) {
            check.fail("invalid decomposition at trial " + std::to_string(trial));
            return;
        }
    }

    // Monotone two-parent example: dependencies point to smaller coordinates,
    // but vertex 2 has parents 0 and 1.
    CoeffBundle two = CoeffBundle::zero(3);
    PairTable w{};
    w[1][1] = Rat(1);
    two.pairs.emplace(CoordPair{0, 2}, w);
    two.pairs.emplace(CoordPair{1, 2}, w);
    const PairwiseSlice two_parents(3, {"a", "b"}, {two, CoeffBundle::zero(3)});
    check.expect(!detect(two_parents, Detector::ParentTree).hit,
                 "two-parent monotone example was accepted");
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "standing example: quotient, relevance, timing", criterion_1},
        {2, "worked orbit example: differences, predicate flip, invariance", criterion_2},
        {3, "realizability: 200 random labeling kernels", criterion_3},
        {4, "closure invariance: 500 random slice/trace pairs", criterion_4},
        {5, "symmetric dichotomy: 300 random symmetric slices", criterion_5},
        {6, "compression: 300 problems with duplicate profiles", criterion_6},
        {7, "transfer suite: 200 random specs + PAC example", criterion_7},
        {8, "stability: 200 certified pairs + flip pairs to 2^-40", criterion_8},
        {9, "bounded-pattern classifier: constants, stabilization, falsify", criterion_9},
        {10, "hull algebra: 100 random finite universes", criterion_10},
        {11, "taxonomy: table integrity + parent-tree decompositions", criterion_11},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Check check;
        const auto start = Clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.fail(std::string("unexpected exception: ") + e.what());
        }
        const double elapsed = ms_since(start);
        std::ostringstream line;
        line << (check.ok ? "PASS" : "FAIL") << " " << std::setw(2) << criterion.id << ": "
             << criterion.title << " (" << std::fixed << std::setprecision(1) << elapsed
             << " ms)";
        if (!check.ok) line << " -- " << check.detail;
        std::cout << line.str() << "\n";
        if (!check.ok) ++failures;
    }
    if (failures == 0) std::cout << "all acceptance criteria passed\n";
    else std::cout << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}
