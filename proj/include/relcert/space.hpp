#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relcert/errors.hpp"

namespace relcert {

using StateIndex = std::uint64_t;
using State = std::vector<int>; // one value per coordinate, 0 <= v < domain

/// Default cap on enumerated states. Exceeding a budget is a clean
/// ResourceError, never silent truncation.
inline constexpr StateIndex kDefaultStateBudget = StateIndex(1) << 20;

/// Default cap on the dimension for full 2^d coordinate-subset scans.
inline constexpr int kDefaultSubsetCap = 5;

inline void check_budget(StateIndex states, StateIndex budget) {
    if (states > budget)
        throw ResourceError("state count " + std::to_string(states) +
                            " exceeds enumeration budget " + std::to_string(budget));
}

/// Finite product state space: one cardinality per coordinate. States are
/// enumerated lexicographically with coordinate 0 most significant, so the
/// two-bit space orders its states 00, 01, 10, 11.
class CoordinateSpace {
public:
    CoordinateSpace() = default;

    explicit CoordinateSpace(std::vector<int> domains) : domains_(std::move(domains)) {
        strides_.assign(domains_.size(), 1);
        StateIndex count = 1;
        for (int i = static_cast<int>(domains_.size()) - 1; i >= 0; --i) {
            if (domains_[static_cast<std::size_t>(i)] < 1)
                throw ValidationError("coordinate " + std::to_string(i) +
                                      " has cardinality < 1");
            strides_[static_cast<std::size_t>(i)] = count;
            const auto card = static_cast<StateIndex>(domains_[static_cast<std::size_t>(i)]);
            if (count > (StateIndex(1) << 62) / card)
                throw ResourceError("state count overflows 64-bit enumeration index");
            count *= card;
        }
        state_count_ = count;
    }

    static CoordinateSpace binary_cube(int d) {
        return CoordinateSpace(std::vector<int>(static_cast<std::size_t>(d), 2));
    }

    int dimension() const { return static_cast<int>(domains_.size()); }
    int domain(int i) const { return domains_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& domains() const { return domains_; }
    StateIndex state_count() const { return state_count_; }

    /// Value of coordinate i in the state with the given lexicographic index.
    int coord_value(StateIndex s, int i) const {
        const auto idx = static_cast<std::size_t>(i);
        return static_cast<int>((s / strides_[idx]) %
                                static_cast<StateIndex>(domains_[idx]));
    }

    State state_at(StateIndex s) const {
        State x(domains_.size());
        for (int i = 0; i < dimension(); ++i) x[static_cast<std::size_t>(i)] = coord_value(s, i);
        return x;
    }

    StateIndex index_of(const State& x) const {
        if (static_cast<int>(x.size()) != dimension())
            throw ValidationError("state has wrong dimension");
        StateIndex s = 0;
        for (int i = 0; i < dimension(); ++i) {
            const int v = x[static_cast<std::size_t>(i)];
            if (v < 0 || v >= domains_[static_cast<std::size_t>(i)])
                throw ValidationError("coordinate " + std::to_string(i) +
                                      " value out of range");
            s += static_cast<StateIndex>(v) * strides_[static_cast<std::size_t>(i)];
        }
        return s;
    }

    /// Renders a state as concatenated digits ("10" for x0=1, x1=0) when all
    /// cardinalities are <= 10, otherwise comma-separated values.
    std::string render(StateIndex s) const {
        bool compact = true;
        for (const int c : domains_)
            if (c > 10) compact = false;
        std::string out;
        for (int i = 0; i < dimension(); ++i) {
            if (!compact && i > 0) out += ',';
            out += std::to_string(coord_value(s, i));
        }
        return out;
    }

    friend bool operator==(const CoordinateSpace& a, const CoordinateSpace& b) {
        return a.domains_ == b.domains_;
    }

private:
    std::vector<int> domains_;
    std::vector<StateIndex> strides_;
    StateIndex state_count_ = 1;
};

} // namespace relcert
