#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "inclab/exec.hpp"
#include "inclab/geometry.hpp"
#include "inclab/poly.hpp"

namespace inclab {

// Product-of-bisectors partition of the unit cube. Cells are sign patterns
// of the factors, which refine the connected components of the complement of
// the product zero set, so the per-cell point bound and the line crossing
// bound both survive.
struct Partition {
    std::size_t n = 0;
    std::vector<MultiPoly> factors;
    long product_degree = 0;
    std::map<std::string, long> histogram; // sign pattern ("+-...") -> point count
    long wall_count = 0;                   // points where some factor vanishes exactly
    bool verified = false;
    long max_cell = 0;
    double cell_bound = 0; // tau * |P| / D^n, the promised occupancy cap
    std::uint64_t seed = 0;
};

// Iterated bisection: at each stage one polynomial has to split every
// current subset with discrepancy at most one point. Candidates are found
// by coordinate descent on the monomial coefficients in doubles and then
// certified by exact sign evaluation; an uncertified partition is never
// returned (PartitionNotAchieved instead). Dimension is capped at 3
// (UnsupportedDimension above). The budget counts point evaluations spent
// in the search.
Partition build_partition(const std::vector<Point>& P, int D, double tau,
                          std::uint64_t seed, long long budget = 400000000,
                          Exec exec = Exec::parallel);

// Exact sign pattern of the factors at p, or "WALL" when a factor vanishes.
std::string cell_of_point(const Partition& part, const Point& p);

struct CrossingReport {
    long root_count = 0;    // distinct roots of the restricted product on the segment
    long cells_entered = 0; // root_count + 1, or 0 when contained in the zero set
    bool contained = false;
};

// Restrict the product of the factors to the line and count distinct real
// roots in [t0, t1] exactly.
CrossingReport line_cell_crossings(const Partition& part, const Line& l,
                                   const Rational& t0, const Rational& t1);

} // namespace inclab
