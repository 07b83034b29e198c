#pragma once

#include <cstdint>
#include <vector>

#include "inclab/geometry.hpp"
#include "inclab/poly.hpp"

namespace inclab {

// The extremal point/line family on the unit cube: for digits
// a,b in [1, floor(M^beta)] and m_{i,1}, m_{i,2} in [1, M],
//   point  x_1 = a/(a+bM),  x_{i+1} = (a*m_{i,1} + b*m_{i,2}) / ((a+bM)*M)
//   line   x_{i+1} = (M*m_{i,1}*x_1 + m_{i,2}*(1-x_1)) / M^2
// Plugging the point into the line shows each generating tuple is incident
// to its line; generation dedups exact duplicates.
struct FurstenbergParams {
    std::size_t n = 2;
    long M = 2;
    Rational beta = 1; // in [0,1]
};

Config gen_furstenberg(const FurstenbergParams& params);

// floor(M^beta) computed exactly (integer q-th root of M^p for beta = p/q).
Int floor_M_pow(long M, const Rational& beta);

// |P_1| for n = 2 without materializing the set: x_1 determines the reduced
// ratio a/b, and per ratio class the distinct second coordinates are the
// distinct values of m_1*a0 + m_2*b0. Validated against gen_furstenberg +
// dedup for small M.
Int furstenberg_point_count(long M, const Rational& beta);

// Product over axes i and shifts j of (x_i - j/(k+1)) with k = floor(d/n):
// degree n*k <= d, zero set = k grid hyperplanes per axis.
MultiPoly gen_grid_polynomial(std::size_t n, long d);

using RatMat = std::vector<RatVec>;

// Cayley transform R = (I - S)(I + S)^{-1} of a rational skew-symmetric S;
// exactly orthogonal. (I + S is provably invertible for real skew S; the
// SingularCayley check stays as a guard on the exact elimination.)
RatMat rational_rotation(const RatMat& skew);

RatMat random_skew(std::size_t n, std::uint64_t seed);

RatVec mat_apply(const RatMat& R, const RatVec& x);
Line mat_apply(const RatMat& R, const Line& l);
Config mat_apply(const RatMat& R, const Config& cfg);

} // namespace inclab
