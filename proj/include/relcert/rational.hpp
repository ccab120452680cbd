#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "relcert/errors.hpp"

namespace relcert {

/// Exact rational numbers. Argmax tie detection must be exact, so every
/// utility value in the library is a Rat; floating point never appears on a
/// certification path.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

/// Canonical text form "p/q" with q > 0 and gcd(p,q) = 1. The denominator is
/// always printed, so "3" serializes as "3/1".
inline std::string rat_to_string(const Rat& x) {
    return numerator(x).str() + "/" + denominator(x).str();
}

/// Accepts "p/q" or a bare integer "p"; normalizes on construction.
inline Rat rat_from_string(std::string_view text) {
    auto bad = [&] {
        return ValidationError("invalid rational literal: '" + std::string(text) + "'");
    };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    auto parse_int = [&](std::string_view part) -> BigInt {
        if (part.empty()) throw bad();
        std::size_t i = part[0] == '-' || part[0] == '+' ? 1 : 0;
        if (i == part.size()) throw bad();
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') throw bad();
        return BigInt(std::string(part));
    };
    if (slash == std::string_view::npos) return Rat(parse_int(text));
    const BigInt p = parse_int(text.substr(0, slash));
    const BigInt q = parse_int(text.substr(slash + 1));
    if (q == 0) throw ValidationError("zero denominator in rational literal: '" +
                                      std::string(text) + "'");
    return Rat(p, q);
}

} // namespace relcert
