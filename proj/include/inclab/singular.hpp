#pragma once

#include <cstdint>
#include <vector>

#include "inclab/exec.hpp"
#include "inclab/geometry.hpp"
#include "inclab/poly.hpp"

namespace inclab {

// Scan parameters. Cubes have side exactly N^(-1-eps); the grid uses
// ceil(N^(1+eps)) cells per axis, so the last layer pokes slightly past the
// unit cube. A direction counts as singular when some candidate line meets
// at least N^(1+eps)/H roughly bisected cubes.
struct ScanParams {
    long N = 16;
    double epsilon = 0.25;
    double H = 8.0;
    double bisect_fraction = 0.1; // both sign fractions must reach this
    long samples_per_cube = 256;
    long directions = 64;
    long max_lines_per_direction = 8192;
    std::uint64_t seed = 1;
};

struct CubeFractions {
    double frac_pos = 0;
    double frac_neg = 0;
    double radius = 0; // binomial confidence radius of the fractions
    bool bisected = false;
};

// Monte Carlo sign fractions of Q over the cube [lo, lo + side]^n.
CubeFractions is_bisected_cube(const MultiPoly& Q, const std::vector<double>& lo,
                               double side, long samples, double bisect_fraction,
                               std::uint64_t seed);

struct DirectionRow {
    Direction v;
    long best_count = 0;           // max bisected cubes met by one candidate line
    std::vector<double> best_base; // base point of the best line, empty if none
    bool singular = false;
    bool certified_nonsingular = false; // best_count clears even the 3^n grid slack
    double formula = 0; // per-hyperplane crossing estimate when normals are given
};

struct ScanReport {
    long N = 0;
    double epsilon = 0;
    double H = 0;
    double bisect_fraction = 0;
    long cubes_per_axis = 0;
    double threshold = 0;           // N^(1+eps)/H
    double certified_threshold = 0; // threshold / 3^n: candidate lines form a
                                    // grid, a line meeting k cubes has a grid
                                    // neighbor meeting >= k/3^n of them
    bool degree_warning = false;    // deg Q exceeded N (advisory regime)
    long sampled_directions = 0;
    long singular_count = 0;
    std::vector<DirectionRow> rows;
};

// Tests one direction: candidate lines with direction v are anchored on a
// grid of spacing side on the hyperplane through the box center orthogonal
// to v; cubes along each line are walked by voxel traversal and their
// bisection status is sampled (seeded per cube, so thread schedules cannot
// change any verdict).
DirectionRow singular_direction_test(const MultiPoly& Q, const ScanParams& params,
                                     const Direction& v, Exec exec = Exec::parallel);

// Applies the per-direction test over a seeded direction sample. When
// reference_normals is given (Q a product of hyperplanes with these
// normals), each row also carries the capped sum of per-hyperplane crossing
// estimates as a reference column.
ScanReport singular_scan(const MultiPoly& Q, const ScanParams& params,
                         Exec exec = Exec::parallel,
                         const std::vector<RatVec>* reference_normals = nullptr);

// Sum over normals of min(1/max(pi/2 - angle(n_i, v), 1/cap), cap): the
// expected number of cube crossings a line of direction v collects from
// each hyperplane, capped by the cubes available along the line.
double crossing_formula(const std::vector<RatVec>& normals, const Direction& v,
                        double cap);

// Seeded sample of rational directions covering the upper hemisphere
// (stereographic lift of a jittered lattice in the unit ball).
std::vector<Direction> direction_sample(std::size_t n, long count, std::uint64_t seed);

struct HairbrushReport {
    long N = 0;
    int D = 0;
    double c = 0;
    long directions_tested = 0;
    long qualifying = 0; // directions admitting a line through >= c*N zero cubes
    double bound = 0;    // 50 * D^2 * N * ln(N)^2
    bool within_bound = false;
};

// Over a 1/N-separated direction sample of the hemisphere, counts the
// directions admitting a candidate line passing through at least c*N
// side-1/N cubes where Q changes sign on the corners. Dimension 3 only.
HairbrushReport hairbrush_direction_count(const MultiPoly& Q, long N, int D, double c,
                                          std::uint64_t seed, Exec exec = Exec::parallel);

} // namespace inclab
