#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relcert/certify.hpp"
#include "relcert/problem.hpp"

namespace relcert {

/// Per-state strict gap: best utility minus the best strictly smaller one.
/// Zero at states whose optimizer is not a strict singleton (ties, or a
/// single distinct value), so the 2*delta hypotheses fail there by
/// construction.
struct GapProfile {
    std::vector<Rat> gap;
    Rat min_gap = Rat(0);
};

inline Rat strict_gap_at(const DecisionProblem& p, StateIndex s) {
    const Rat* best = nullptr;
    const Rat* second = nullptr;
    int best_count = 0;
    for (int a = 0; a < p.num_actions(); ++a) {
        const Rat& u = p.utility(a, s);
        if (best == nullptr || u > *best) {
            if (best != nullptr && (second == nullptr || *best > *second)) second = best;
            best = &u;
            best_count = 1;
        } else if (u == *best) {
            ++best_count;
        } else if (second == nullptr || u > *second) {
            second = &u;
        }
    }
    if (best_count != 1 || second == nullptr) return Rat(0);
    return *best - *second;
}

inline GapProfile gap_profile(const DecisionProblem& p) {
    GapProfile out;
    out.gap.reserve(p.num_states());
    for (StateIndex s = 0; s < p.num_states(); ++s) out.gap.push_back(strict_gap_at(p, s));
    out.min_gap = out.gap.empty() ? Rat(0) : out.gap.front();
    for (const auto& g : out.gap)
        if (g < out.min_gap) out.min_gap = g;
    return out;
}

inline void check_same_shape(const DecisionProblem& a, const DecisionProblem& b) {
    if (!(a.space() == b.space()))
        throw ValidationError("problems live on different coordinate spaces");
    if (a.actions() != b.actions())
        throw ValidationError("problems have different action lists");
}

/// Max over (action, state) of |U - U'|; a metric on fixed-shape problems.
inline Rat uniform_distance(const DecisionProblem& a, const DecisionProblem& b) {
    check_same_shape(a, b);
    Rat best(0);
    for (int act = 0; act < a.num_actions(); ++act)
        for (StateIndex s = 0; s < a.num_states(); ++s) {
            const Rat diff = rat_abs(a.utility(act, s) - b.utility(act, s));
            if (diff > best) best = diff;
        }
    return best;
}

/// Outcome of the global-stability check. Refusal is a value, not an error:
/// the hypothesis is a one-directional sufficient condition, so failing it
/// claims nothing.
struct StabilityCertificate {
    bool certified = false;
    Rat delta;
    Rat min_gap;
    bool checked_profiles = false;
};

/// Issues a certificate when min_gap(D) > 2 * uniform_distance(D, D'), which
/// forces equal optimizer quotients and identical certification structure.
/// With opts.verify the equality is additionally confirmed by brute force.
inline StabilityCertificate global_stability_certificate(const DecisionProblem& d,
                                                         const DecisionProblem& d_prime,
                                                         const CertifyOptions& opts = {}) {
    check_same_shape(d, d_prime);
    StabilityCertificate cert;
    cert.delta = uniform_distance(d, d_prime);
    cert.min_gap = gap_profile(d).min_gap;
    cert.certified = cert.min_gap > Rat(2) * cert.delta;
    if (cert.certified && opts.verify) {
        if (!(quotient(d) == quotient(d_prime)))
            throw TheoryViolation("certified pair has different optimizer quotients");
        const auto pa = certification_profile(d, opts);
        const auto pb = certification_profile(d_prime, opts);
        if (!(pa.relevant == pb.relevant && pa.minimal_sufficient == pb.minimal_sufficient))
            throw TheoryViolation("certified pair has different certification profiles");
        cert.checked_profiles = true;
    }
    return cert;
}

/// A relevance witness: states s, t agree off coordinate `coord` and have
/// distinct singleton optimizer sets.
struct RelevanceWitness {
    int coord = 0;
    StateIndex s = 0;
    StateIndex t = 0;
};

/// A non-sufficiency witness: states s, t agree on `coords` and have distinct
/// singleton optimizer sets.
struct NonsufficiencyWitness {
    std::vector<int> coords;
    StateIndex s = 0;
    StateIndex t = 0;
};

using StabilityWitness = std::variant<RelevanceWitness, NonsufficiencyWitness>;

namespace detail {

inline void validate_witness(const DecisionProblem& d, const StabilityWitness& witness,
                             StateIndex& s, StateIndex& t) {
    const int dim = d.dimension();
    if (const auto* rel = std::get_if<RelevanceWitness>(&witness)) {
        s = rel->s;
        t = rel->t;
        if (rel->coord < 0 || rel->coord >= dim)
            throw ValidationError("witness coordinate out of range");
        if (s >= d.num_states() || t >= d.num_states())
            throw ValidationError("witness state out of range");
        for (int j = 0; j < dim; ++j)
            if (j != rel->coord && d.coord_value(s, j) != d.coord_value(t, j))
                throw ValidationError("witness states do not agree off coordinate " +
                                      std::to_string(rel->coord) +
                                      " (they differ at coordinate " + std::to_string(j) + ")");
    } else {
        const auto& ns = std::get<NonsufficiencyWitness>(witness);
        s = ns.s;
        t = ns.t;
        validate_coordinate_set(ns.coords, dim);
        if (s >= d.num_states() || t >= d.num_states())
            throw ValidationError("witness state out of range");
        for (const int j : ns.coords)
            if (d.coord_value(s, j) != d.coord_value(t, j))
                throw ValidationError("witness states do not agree on coordinate " +
                                      std::to_string(j));
    }
    const auto opt_s = optimizer_set(d, s);
    const auto opt_t = optimizer_set(d, t);
    if (opt_s.size() != 1 || opt_t.size() != 1)
        throw ValidationError("witness optimizer sets must be singletons");
    if (opt_s == opt_t)
        throw ValidationError("witness optimizer sets must be distinct");
}

} // namespace detail

/// True when both witness states' strict gaps exceed 2 * uniform_distance, in
/// which case the witness survives in D'. False claims nothing. With
/// opts.verify the survival is re-validated directly in D'.
inline bool witness_preservation(const DecisionProblem& d, const DecisionProblem& d_prime,
                                 const StabilityWitness& witness,
                                 const CertifyOptions& opts = {}) {
    check_same_shape(d, d_prime);
    StateIndex s = 0, t = 0;
    detail::validate_witness(d, witness, s, t);
    const Rat doubled = Rat(2) * uniform_distance(d, d_prime);
    if (!(strict_gap_at(d, s) > doubled && strict_gap_at(d, t) > doubled)) return false;
    if (opts.verify) {
        const auto opt_s = optimizer_set(d_prime, s);
        const auto opt_t = optimizer_set(d_prime, t);
        if (opt_s != optimizer_set(d, s) || opt_t != optimizer_set(d, t))
            throw TheoryViolation("preserved witness changed optimizer sets in D'");
    }
    return true;
}

enum class FlipKind { Relevance, Sufficiency };

inline const char* to_string(FlipKind k) {
    return k == FlipKind::Relevance ? "relevance" : "sufficiency";
}

struct FlipPair {
    FlipKind kind = FlipKind::Relevance;
    DecisionProblem tracking; // the optimizer tracks the Boolean state
    DecisionProblem flat;     // all actions tied at every state
};

/// One-coordinate Boolean pair at uniform distance <= epsilon: in `tracking`
/// the coordinate is relevant (and the empty set insufficient); in `flat`
/// every action ties everywhere, so the coordinate is irrelevant and the
/// empty set sufficient.
inline FlipPair make_flip_pair(const Rat& epsilon, FlipKind kind) {
    if (epsilon <= 0)
        throw ValidationError("flip-pair epsilon must be positive, got " +
                              rat_to_string(epsilon));
    const CoordinateSpace space({2});
    const Rat half = epsilon / 2;
    FlipPair out;
    out.kind = kind;
    out.tracking = DecisionProblem(space, {"a", "b"}, {{-half, half}, {Rat(0), Rat(0)}});
    out.flat = DecisionProblem(space, {"a", "b"},
                               {{Rat(0), Rat(0)}, {Rat(0), Rat(0)}});
    return out;
}

} // namespace relcert
