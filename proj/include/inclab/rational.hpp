#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "inclab/errors.hpp"

namespace inclab {

// Exact arithmetic lives on GMP. Rational is always kept canonical
// (lowest terms, positive denominator); mpq arithmetic preserves that,
// construction from raw parts must canonicalize.
using Int = mpz_class;
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw BadParams("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat(const Int& num, const Int& den) {
    if (den == 0) throw BadParams("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts "num", "num/den", and plain decimals like "-0.25" (exact;
// 0.25 -> 1/4). Used by the text formats and by CLI flags such as beta.
Rational parse_rational(const std::string& token);

// Canonical "num/den" form, "3" printed as "3/1" so the token grammar of
// the point/line files stays uniform.
std::string format_rational(const Rational& q);

using RatVec = std::vector<Rational>;
using IntVec = std::vector<Int>;

Rational dot(const RatVec& a, const RatVec& b);
Int dot(const IntVec& a, const IntVec& b);
Rational dot(const RatVec& a, const IntVec& b);

// Parse helpers shared by the text formats.
RatVec parse_rational_csv(const std::string& line);
std::string format_rational_csv(const RatVec& v);

inline int sgn(const Rational& q) { return sgn(q.get_num()); }

// Deterministic 64-bit stream derivation (splitmix64). Every seeded
// component derives its own stream from (user seed, fixed tag) so thread
// scheduling can never reorder draws.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(tag));
}

// Uniform double in [0,1) from a raw 64-bit draw; avoids
// std::uniform_real_distribution whose output is implementation-defined.
inline double u01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace inclab
