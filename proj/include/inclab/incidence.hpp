#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "inclab/exec.hpp"
#include "inclab/geometry.hpp"

namespace inclab {

struct IncidenceReport {
    long long total = 0;
    std::vector<long> per_line;
    long min_per_line = 0;
    long max_per_line = 0;
};

// Exact point-on-line counting over all pairs. The float prefilter only
// discards pairs whose residual is far above rounding noise; every
// surviving candidate is confirmed exactly, so correctness never rests on
// doubles. Prefilter on/off and serial/parallel all produce identical
// reports.
IncidenceReport count_incidences(const Config& cfg, Exec exec = Exec::parallel,
                                 bool prefilter = false);

// Direction sample region: the whole sphere (probed through rational rays
// lifted from a stereographic lattice) or a slope box of rays
// (1, s_2, .., s_n) with s_i in [lo_i, hi_i].
struct Region {
    bool full_sphere = true;
    std::vector<std::pair<Rational, Rational>> slope_box;

    static Region sphere() { return Region{}; }
    static Region slopes(std::vector<std::pair<Rational, Rational>> box) {
        return Region{false, std::move(box)};
    }
};

struct DensityReport {
    double epsilon = 0;
    double max_gap = 0;     // max over probes of distance to nearest direction
    double probe_mesh = 0;  // guaranteed probe spacing bound
    bool pass = false;      // max_gap <= epsilon
    long long probes = 0;
    std::string region;
};

// Is every direction of the region within epsilon of the set (in the
// sign-blind chordal metric)? Probes are exact rational rays; distances are
// computed from rational invariants so the report is exactly invariant
// under rational rotations of directions and region alike.
DensityReport direction_density(const std::vector<Direction>& dirs, double epsilon,
                                const Region& region, long long probes,
                                std::uint64_t seed, Exec exec = Exec::parallel);

struct SeparationReport {
    bool separated = false;
    double min_distance = 0;
    std::pair<std::size_t, std::size_t> witness{0, 0}; // closest pair on failure
};

SeparationReport direction_separation(const std::vector<Direction>& dirs, double epsilon);

// Chordal distance between rays through integer/rational vectors, computed
// from the exact invariants <u,v>, |u|^2, |v|^2 (so rational rotations
// change nothing, bit for bit).
double ray_distance(const RatVec& u, const RatVec& v);
double ray_distance(const IntVec& u, const IntVec& v);

struct FlatReport {
    long max_count = 0;
    int r = 0;
    bool exact = true;       // EXACT vs HEURISTIC (budgeted sampling)
    RatVec witness_base;     // foot of the best flat
    std::vector<RatVec> witness_span;
};

// Largest number of lines lying in a common affine flat of dimension <= r.
// r = 2 hashes canonical planes of coplanar pairs (always exact); r > 2
// enumerates spanning tuples when the budget allows, otherwise samples.
FlatReport max_rflat_concentration(const std::vector<Line>& lines, int r,
                                   long long budget = 2'000'000,
                                   std::uint64_t seed = 1);

} // namespace inclab
