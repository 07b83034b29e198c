#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inclab/exec.hpp"
#include "inclab/poly.hpp"

namespace inclab {

// Corner signs of Q over a cells^n grid on the unit cube, values in
// {-1,0,+1}. Evaluation runs in double with a rounding bound; corners the
// bound cannot decide are re-evaluated exactly at the rational coordinates
// i/cells, so a reported 0 really is a zero.
struct SignField {
    std::size_t n = 0;
    long cells = 0;
    std::vector<std::int8_t> sign; // (cells+1)^n corner values

    long corners_per_axis() const { return cells + 1; }
    std::size_t index(const std::vector<long>& idx) const;
};

SignField sign_field(const MultiPoly& Q, long cells, Exec exec = Exec::parallel);

// Cells whose corner signs are not uniformly positive or uniformly
// negative. This is the shared zero-witness for the volume, component and
// hairbrush machinery; it is sign-blind by construction (it cannot see
// zeros that do not separate signs at this resolution).
std::vector<std::uint8_t> zero_cells(const SignField& f);

struct VolumeEstimate {
    double value = 0;
    long cells = 0;      // per axis
    double grid_side = 0;
    long zero_cell_count = 0;
    std::vector<std::string> flags; // always contains SIGN_BLIND
};

enum class DilationMetric { euclidean, chebyshev };

// Volume of the alpha-neighborhood of the zero set inside the unit cube:
// detect zero cells, dilate by ceil(alpha/h) cells, count. resolution is
// the number of grid cells per alpha (>= 4, so h <= alpha/4).
VolumeEstimate neighborhood_volume(const MultiPoly& Q, double alpha, long resolution,
                                   DilationMetric metric = DilationMetric::euclidean,
                                   Exec exec = Exec::parallel);

struct ComponentCount {
    long count = 0;
    long zero_cell_count = 0;
    std::vector<std::string> flags;
};

// Face-adjacency components of the zero cells at the given grid resolution.
ComponentCount connected_components(const MultiPoly& Q, long resolution,
                                    Exec exec = Exec::parallel);

} // namespace inclab
