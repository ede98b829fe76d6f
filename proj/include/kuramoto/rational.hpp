#pragma once

#include <compare>
#include <cstdint>
#include <ostream>

namespace kuramoto {

/// Exact ratio of two integers. Kept unreduced so that e.g. a connectivity
/// reads as (min degree)/(n-1); comparisons go through cross-multiplication.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    [[nodiscard]] constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend constexpr bool operator==(const Rational& a, const Rational& b) { return a.num * b.den == b.num * a.den; }

    friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        // den > 0 always
        return a.num * b.den <=> b.num * a.den;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.num << '/' << r.den; }
};

} // namespace kuramoto
