#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "inclab/area.hpp"
#include "inclab/errors.hpp"
#include "inclab/geometry.hpp"
#include "inclab/partition.hpp"
#include "inclab/poly.hpp"
#include "inclab/rational.hpp"

using namespace inclab;

namespace {
// four clusters of three, one per quadrant of the unit square
std::vector<Point> quadrant_points() {
    std::vector<Point> P;
    for (long qx : {1L, 3L})
        for (long qy : {1L, 3L})
            for (int k = 0; k < 3; ++k)
                P.push_back(RatVec{rat(qx, 4) + rat(k, 100), rat(qy, 4)});
    return P;
}

std::vector<Point> seeded_points(std::uint64_t a, std::uint64_t b, int count, long denom) {
    std::uint64_t st = derive_seed(a, b);
    std::vector<Point> P;
    for (int i = 0; i < count; ++i) {
        RatVec p(2);
        for (int j = 0; j < 2; ++j) {
            st = mix64(st);
            p[j] = rat(static_cast<long>(st % static_cast<std::uint64_t>(denom)), denom);
        }
        P.push_back(p);
    }
    return P;
}

void check_consistent(const Partition& part, std::size_t n_points) {
    long sum = part.wall_count, max_seen = 0;
    for (const auto& [cell, cnt] : part.histogram) {
        CHECK(cell.size() == part.factors.size());
        sum += cnt;
        if (cnt > max_seen) max_seen = cnt;
    }
    CHECK(sum == static_cast<long>(n_points));
    CHECK(part.max_cell == max_seen);
    long deg = 0;
    for (const auto& f : part.factors) deg += f.degree();
    CHECK(part.product_degree == deg);
    if (part.verified) CHECK(static_cast<double>(part.max_cell) <= part.cell_bound);
}
} // namespace

TEST_CASE("parameter validation") {
    auto quad = quadrant_points();
    CHECK_THROWS_AS(build_partition(quad, 0, 1.0, 1), BadParams);
    CHECK_THROWS_AS(build_partition(quad, 2, 0.5, 1), BadParams);
    CHECK_THROWS_AS(
        build_partition({RatVec{rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)}}, 2, 1.0, 1),
        UnsupportedDimension);
}

TEST_CASE("hand-built partition: cells and crossings") {
    Partition part;
    part.n = 2;
    part.factors.push_back(MultiPoly::axis_shift(2, 0, rat(1, 2)));
    part.factors.push_back(MultiPoly::axis_shift(2, 1, rat(1, 2)));
    part.product_degree = 2;

    CHECK(cell_of_point(part, RatVec{rat(1, 4), rat(1, 4)}) == "--");
    CHECK(cell_of_point(part, RatVec{rat(3, 4), rat(1, 4)}) == "+-");
    CHECK(cell_of_point(part, RatVec{rat(1, 4), rat(3, 4)}) == "-+");
    CHECK(cell_of_point(part, RatVec{rat(3, 4), rat(3, 4)}) == "++");
    CHECK(cell_of_point(part, RatVec{rat(1, 2), rat(1, 4)}) == "WALL");

    // main diagonal: both factors vanish at t = 1/2, one distinct root
    Line diag = canonicalize_line(RatVec{rat(0), rat(0)}, IntVec{Int(1), Int(1)});
    CrossingReport c1 = line_cell_crossings(part, diag, rat(0), rat(1));
    CHECK(c1.root_count == 1);
    CHECK(c1.cells_entered == 2);
    CHECK_FALSE(c1.contained);

    Line horiz = canonicalize_line(RatVec{rat(0), rat(1, 4)}, IntVec{Int(1), Int(0)});
    CrossingReport c2 = line_cell_crossings(part, horiz, rat(0), rat(1));
    CHECK(c2.root_count == 1);
    CHECK(c2.cells_entered == 2);

    // line inside the wall x = 1/2
    Line vert = canonicalize_line(RatVec{rat(1, 2), rat(0)}, IntVec{Int(0), Int(1)});
    CrossingReport c3 = line_cell_crossings(part, vert, rat(0), rat(1));
    CHECK(c3.contained);
    CHECK(c3.root_count == 0);
    CHECK(c3.cells_entered == 0);
}

TEST_CASE("clustered points admit a degree-2 partition") {
    auto quad = quadrant_points();
    Partition part = build_partition(quad, 2, 1.0, 1);
    CHECK(part.verified);
    CHECK(part.product_degree == 2);
    CHECK(part.histogram.size() == 4);
    CHECK(part.wall_count == 0);
    CHECK(part.max_cell == 3);
    check_consistent(part, quad.size());
    // every input point lands in a non-wall cell that the histogram knows
    for (const auto& p : quad) {
        std::string c = cell_of_point(part, p);
        REQUIRE(c != "WALL");
        CHECK(part.histogram.count(c) == 1);
    }
}

TEST_CASE("empty input is trivially partitioned") {
    Partition part = build_partition({}, 3, 4.0, 1);
    CHECK(part.verified);
    CHECK(part.histogram.empty());
    CHECK(part.product_degree == 0);
}

TEST_CASE("seeded medium instance: verified, bounded, deterministic") {
    auto mid = seeded_points(9, 9, 256, 1024);
    Partition m1 = build_partition(mid, 4, 4.0, 5);
    CHECK(m1.verified);
    CHECK(m1.max_cell == 64);
    CHECK(m1.cell_bound == 64.0);
    CHECK(m1.product_degree == 2);
    CHECK(m1.histogram.size() == 4);
    CHECK(m1.wall_count == 0);
    check_consistent(m1, mid.size());

    Partition m2 = build_partition(mid, 4, 4.0, 5);
    REQUIRE(m1.factors.size() == m2.factors.size());
    for (std::size_t i = 0; i < m1.factors.size(); ++i)
        CHECK(format_poly(m1.factors[i]) == format_poly(m2.factors[i]));
}

TEST_CASE("starved searches fail loudly instead of lying") {
    auto big = seeded_points(3, 3, 64, 256);
    // ten point evaluations cannot certify anything
    CHECK_THROWS_WITH_AS(build_partition(big, 8, 4.0, 1, 10),
                         doctest::Contains("effort budget exhausted"), PartitionNotAchieved);
    // D = 4, tau = 1: the bound of 4 points per cell needs more stages than
    // degree 4 can hold
    CHECK_THROWS_WITH_AS(build_partition(big, 4, 1.0, 1, 10),
                         doctest::Contains("degree budget exhausted"), PartitionNotAchieved);
}
