#pragma once

#include <utility>
#include <vector>

#include "inclab/exec.hpp"
#include "inclab/geometry.hpp"

namespace inclab {

// Integral quadratic form Q(x) = x^T A x stored as the even matrix M = 2A,
// so half-integer off-diagonal entries of A never appear: M is symmetric
// with even diagonal, Q(x) = x^T M x / 2, and 2Q(x,v) = x^T M v.
struct QuadForm {
    std::size_t n = 0;
    std::vector<IntVec> gram2;
    int pos_inertia = 0;
    int neg_inertia = 0;
};

// Validates the matrix shape (symmetry, even diagonal: BadParams) and the
// form itself (nondegenerate, inertia indices differing by at most one:
// DegenerateInput).
QuadForm make_quad_form(const std::vector<IntVec>& gram2);

// Sum of hyperbolic planes x1*x2 + x3*x4 + ..., with a trailing +x_n^2
// square when n is odd; the canonical balanced nondegenerate example.
QuadForm hyperbolic_form(std::size_t n);

Int eval2(const QuadForm& f, const IntVec& x);               // x^T M x = 2 Q(x)
Int bilinear2(const QuadForm& f, const IntVec& x, const IntVec& v); // x^T M v

// All integer x with sup norm <= B and Q(x) = 1, lexicographic order.
std::vector<IntVec> enumerate_quadric_points(const QuadForm& f, long B,
                                             Exec exec = Exec::parallel);

// Lines x + t v with Q = 1 along the whole line: primitive directions v in
// the sup-norm band [Vlo, Vhi] with Q(v,v) = 0, paired with box points x
// satisfying Q(x,x) = 1 and Q(x,v) = 0; canonicalized and deduplicated.
std::vector<Line> enumerate_quadric_lines(const QuadForm& f, long B, long Vlo,
                                          long Vhi, Exec exec = Exec::parallel);

// Independent post-hoc checker: re-verifies every point and line through
// the generic polynomial path (exact evaluation / line restriction of the
// expanded form) rather than the enumeration arithmetic.
bool verify_quadric_config(const QuadForm& f, const std::vector<IntVec>& points,
                           const std::vector<Line>& lines);

// Direction band exponent 3/(2n-6) used when sizing [Vlo, Vhi]; needs n >= 4.
Rational quadric_alpha(std::size_t n);

struct FitResult {
    double slope = 0;
    double intercept = 0;
    double residual = 0; // rms of log-log residuals
};

// Least-squares slope of log(count) against log(scale).
FitResult fit_count_exponent(const std::vector<std::pair<double, double>>& samples);

} // namespace inclab
