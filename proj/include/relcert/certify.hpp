#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relcert/errors.hpp"
#include "relcert/problem.hpp"

namespace relcert {

/// Partition of states by equality of optimizer sets. Class indices are
/// contiguous from 0 in order of first appearance along the lexicographic
/// state enumeration; `classes[k]` is the optimizer set (ascending action
/// indices) shared by every state of class k.
struct QuotientPartition {
    std::vector<std::uint32_t> class_of;
    std::vector<std::vector<int>> classes;

    std::size_t class_count() const { return classes.size(); }

    friend bool operator==(const QuotientPartition& a, const QuotientPartition& b) {
        return a.class_of == b.class_of && a.classes == b.classes;
    }

    /// Same grouping of states, ignoring which optimizer sets label the blocks.
    bool same_blocks(const QuotientPartition& other) const {
        if (class_of.size() != other.class_of.size()) return false;
        if (classes.size() != other.classes.size()) return false;
        std::vector<int> fwd(classes.size(), -1);
        for (std::size_t s = 0; s < class_of.size(); ++s) {
            int& expected = fwd[class_of[s]];
            if (expected == -1) expected = static_cast<int>(other.class_of[s]);
            else if (expected != static_cast<int>(other.class_of[s])) return false;
        }
        return true;
    }
};

/// Exact-certification summary of a problem: the relevant coordinates, the
/// (unique) minimal sufficient set, the structural rank, and the quotient
/// class count.
struct CertificationProfile {
    std::vector<int> relevant;
    std::vector<int> minimal_sufficient;
    int srank = 0;
    std::size_t quotient_count = 0;
    std::vector<int> sufficient_family_generator;

    friend bool operator==(const CertificationProfile& a, const CertificationProfile& b) {
        return a.relevant == b.relevant && a.quotient_count == b.quotient_count;
    }
};

struct CertifyOptions {
    bool verify = false;            // run the theorem-backed cross-checks
    int subset_cap = kDefaultSubsetCap; // max dimension for full 2^d subset scans
};

namespace detail {

template <typename Problem>
std::vector<int> optimizer_set_at(const Problem& p, StateIndex s) {
    std::vector<int> best;
    const Rat* top = nullptr;
    for (int a = 0; a < p.num_actions(); ++a) {
        const Rat& u = p.utility(a, s);
        if (top == nullptr || u > *top) {
            top = &u;
            best.clear();
            best.push_back(a);
        } else if (u == *top) {
            best.push_back(a);
        }
    }
    return best;
}

/// Mixed-radix index of the I-restriction of state s. I must be sorted.
template <typename Problem>
StateIndex projection_key(const Problem& p, StateIndex s, const std::vector<int>& coords) {
    StateIndex key = 0;
    for (const int i : coords) {
        key = key * static_cast<StateIndex>(p.space().domain(i)) +
              static_cast<StateIndex>(p.coord_value(s, i));
    }
    return key;
}

} // namespace detail

/// Every action achieving the maximal utility at state s. Never empty.
template <typename Problem>
std::vector<int> optimizer_set(const Problem& p, StateIndex s) {
    if (s >= p.num_states())
        throw ValidationError("state index " + std::to_string(s) + " out of range (" +
                              std::to_string(p.num_states()) + " states)");
    return detail::optimizer_set_at(p, s);
}

template <typename Problem>
std::vector<std::string> optimizer_set_ids(const Problem& p, StateIndex s) {
    std::vector<std::string> ids;
    for (const int a : optimizer_set(p, s)) ids.push_back(p.action_id(a));
    return ids;
}

template <typename Problem>
QuotientPartition quotient(const Problem& p) {
    QuotientPartition q;
    q.class_of.resize(p.num_states());
    std::map<std::vector<int>, std::uint32_t> index_of;
    for (StateIndex s = 0; s < p.num_states(); ++s) {
        auto opt = detail::optimizer_set_at(p, s);
        auto [it, fresh] = index_of.emplace(std::move(opt),
                                            static_cast<std::uint32_t>(q.classes.size()));
        if (fresh) q.classes.push_back(it->first);
        q.class_of[s] = it->second;
    }
    return q;
}

inline void validate_coordinate_set(const std::vector<int>& coords, int dimension) {
    int prev = -1;
    for (const int i : coords) {
        if (i < 0 || i >= dimension)
            throw ValidationError("coordinate index " + std::to_string(i) + " out of range");
        if (i <= prev)
            throw ValidationError("coordinate set must be strictly increasing");
        prev = i;
    }
}

template <typename Problem>
bool is_sufficient_given_quotient(const Problem& p, const std::vector<int>& coords,
                                  const QuotientPartition& q) {
    StateIndex proj_space = 1;
    for (const int i : coords) proj_space *= static_cast<StateIndex>(p.space().domain(i));
    std::vector<std::int64_t> group_class(proj_space, -1);
    for (StateIndex s = 0; s < p.num_states(); ++s) {
        const StateIndex key = detail::projection_key(p, s, coords);
        std::int64_t& cls = group_class[key];
        if (cls == -1) cls = static_cast<std::int64_t>(q.class_of[s]);
        else if (cls != static_cast<std::int64_t>(q.class_of[s])) return false;
    }
    return true;
}

/// True iff agreement on `coords` forces equal optimizer sets. Single pass:
/// states are grouped under their projection to `coords` and each group must
/// be quotient-constant. `coords` is a sorted set of coordinate indices.
template <typename Problem>
bool is_sufficient(const Problem& p, const std::vector<int>& coords) {
    validate_coordinate_set(coords, p.space().dimension());
    return is_sufficient_given_quotient(p, coords, quotient(p));
}

/// True iff erasing coordinate i destroys sufficiency of the rest.
template <typename Problem>
bool is_relevant(const Problem& p, int i) {
    const int d = p.space().dimension();
    if (i < 0 || i >= d)
        throw ValidationError("coordinate index " + std::to_string(i) + " out of range");
    std::vector<int> rest;
    for (int j = 0; j < d; ++j)
        if (j != i) rest.push_back(j);
    return !is_sufficient(p, rest);
}

inline std::vector<int> subset_from_mask(std::uint64_t mask, int d) {
    std::vector<int> out;
    for (int i = 0; i < d; ++i)
        if (mask & (std::uint64_t(1) << i)) out.push_back(i);
    return out;
}

/// Full 2^d subset scans are only attempted below this hard cap; spaces can
/// carry arbitrarily many cardinality-1 coordinates, so d alone is not
/// bounded by the state budget.
inline bool full_subset_scan_feasible(int d, int cap) { return d <= cap && d < 25; }

inline bool contains_all(const std::vector<int>& superset, const std::vector<int>& subset) {
    return std::includes(superset.begin(), superset.end(), subset.begin(), subset.end());
}

template <typename Problem>
CertificationProfile certification_profile(const Problem& p, const CertifyOptions& opts = {}) {
    const int d = p.space().dimension();
    const QuotientPartition q = quotient(p);
    CertificationProfile profile;
    profile.quotient_count = q.class_count();
    for (int i = 0; i < d; ++i) {
        std::vector<int> rest;
        for (int j = 0; j < d; ++j)
            if (j != i) rest.push_back(j);
        if (!is_sufficient_given_quotient(p, rest, q)) profile.relevant.push_back(i);
    }
    profile.minimal_sufficient = profile.relevant;
    profile.sufficient_family_generator = profile.relevant;
    profile.srank = static_cast<int>(profile.relevant.size());

    bool all_binary = true;
    for (int i = 0; i < d; ++i)
        if (p.space().domain(i) != 2) all_binary = false;
    if (all_binary && profile.srank < 62 &&
        profile.quotient_count > (std::size_t(1) << profile.srank))
        throw TheoryViolation("quotient count " + std::to_string(profile.quotient_count) +
                              " exceeds 2^srank with srank " + std::to_string(profile.srank));

    if (opts.verify) {
        if (!is_sufficient_given_quotient(p, profile.relevant, q))
            throw TheoryViolation("relevant set is not sufficient");
        if (full_subset_scan_feasible(d, opts.subset_cap)) {
            for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << d); ++mask) {
                const auto subset = subset_from_mask(mask, d);
                const bool suff = is_sufficient_given_quotient(p, subset, q);
                const bool expected = contains_all(subset, profile.relevant);
                if (suff != expected)
                    throw TheoryViolation(
                        "sufficiency is not the principal filter of the relevant set "
                        "(witness subset mask " + std::to_string(mask) + ")");
            }
        }
    }
    return profile;
}

/// True iff every fiber of the summary lies inside one quotient class. Only
/// refinement is checked; distinctness of symbols across classes is the
/// separate count below.
template <typename Problem>
bool summary_refines_quotient(const Problem& p, const std::vector<std::string>& summary) {
    if (summary.size() != p.num_states())
        throw ValidationError("summary is not total on the state space");
    const QuotientPartition q = quotient(p);
    std::map<std::string, std::uint32_t> fiber_class;
    for (StateIndex s = 0; s < p.num_states(); ++s) {
        auto [it, fresh] = fiber_class.emplace(summary[s], q.class_of[s]);
        if (!fresh && it->second != q.class_of[s]) return false;
    }
    return true;
}

inline std::size_t distinct_symbol_count(const std::vector<std::string>& summary) {
    return std::set<std::string>(summary.begin(), summary.end()).size();
}

} // namespace relcert
