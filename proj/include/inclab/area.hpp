#pragma once

#include <string>
#include <vector>

#include "inclab/exec.hpp"
#include "inclab/poly.hpp"

namespace inclab {

// Directed area of the zero set toward direction v: integral over the
// hyperplane v^perp of the fiber crossing counts. Fibers are parametrized
// over an exact rational orthogonal (not orthonormal) basis of v^perp, so
// in exact_roots mode each fiber count is a Sturm root count of the
// rational restriction; sampled mode counts sign changes along the fiber.
enum class AreaMode { exact_roots, sampled };

struct AreaResult {
    double value = 0;
    long fibers_per_axis = 0;
    long long total_fibers = 0;
    long long counted_fibers = 0;   // fibers whose clip segment is nonempty
    long long contained_fibers = 0; // fibers lying inside the zero set (count 0, a.e. none)
    AreaMode mode = AreaMode::exact_roots;
    long samples_per_fiber = 0; // sampled mode only
};

AreaResult directed_area(const MultiPoly& Q, const Direction& v, long fibers,
                         AreaMode mode = AreaMode::exact_roots,
                         long samples_per_fiber = 64, Exec exec = Exec::parallel);

// Same integral with fibers restricted to the radius-R cylinder around the
// axis line through `center`. R is rational so the in-cylinder test is exact.
AreaResult cylinder_directed_area(const MultiPoly& Q, const Direction& axis,
                                  const RatVec& center, const Rational& R, long fibers,
                                  AreaMode mode = AreaMode::exact_roots,
                                  long samples_per_fiber = 64, Exec exec = Exec::parallel);

// Exact rational orthogonal basis of the complement of v (Gram-Schmidt on
// the coordinate axes without normalization). Shared with the flat tooling.
std::vector<RatVec> orthogonal_complement(const Direction& v);

// Exact parameter interval of {base + t*dir} inside the unit cube;
// empty=false when the line misses it.
struct ClipInterval {
    bool empty = true;
    Rational lo, hi;
};
ClipInterval clip_to_unit_cube(const RatVec& base, const IntVec& dir);

} // namespace inclab
