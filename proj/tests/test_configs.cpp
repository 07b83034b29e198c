#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "inclab/configs.hpp"
#include "inclab/errors.hpp"
#include "inclab/geometry.hpp"
#include "inclab/incidence.hpp"
#include "inclab/poly.hpp"
#include "inclab/rational.hpp"

using namespace inclab;

TEST_CASE("base-2 configuration has the exact hand structure") {
    Config cfg = gen_furstenberg({2, 2, rat(1)});
    CHECK(cfg.n == 2);
    CHECK(cfg.points.size() == 11);
    CHECK(cfg.lines.size() == 4); // one line per digit pair (m1, m2)

    // every generated point lies on the unit square interior slice it claims
    std::set<Rational> first;
    for (const auto& p : cfg.points) {
        REQUIRE(p.size() == 2);
        CHECK(p[0] > 0);
        CHECK(p[0] < 1);
        first.insert(p[0]);
    }
    // x1 = a/(a+2b) over a,b in {1,2}: {1/3, 1/5, 1/2}
    CHECK(first == std::set<Rational>{rat(1, 3), rat(1, 5), rat(1, 2)});

    // generation dedups: no repeated points or lines
    std::set<std::string> seen;
    for (const auto& p : cfg.points) seen.insert(format_point(p));
    CHECK(seen.size() == cfg.points.size());
    std::set<std::string> lseen;
    for (const auto& l : cfg.lines) lseen.insert(format_line(l));
    CHECK(lseen.size() == cfg.lines.size());
}

TEST_CASE("point count formula agrees with exhaustive dedup") {
    for (long M : {2L, 3L, 4L, 5L}) {
        Config cfg = gen_furstenberg({2, M, rat(1)});
        CAPTURE(M);
        CHECK(furstenberg_point_count(M, rat(1)) == Int(cfg.points.size()));
    }
    // beta = 1/2 trims the digit range
    Config half = gen_furstenberg({2, 4, rat(1, 2)});
    CHECK(furstenberg_point_count(4, rat(1, 2)) == Int(half.points.size()));
    CHECK(furstenberg_point_count(2, rat(1)) == 11);
    CHECK(furstenberg_point_count(4, rat(1)) == 145);
}

TEST_CASE("floor of M^beta is exact") {
    CHECK(floor_M_pow(2, rat(1)) == 2);
    CHECK(floor_M_pow(16, rat(3, 4)) == 8);
    CHECK(floor_M_pow(5, rat(1, 2)) == 2);  // floor(sqrt 5)
    CHECK(floor_M_pow(9, rat(1, 2)) == 3);  // exact square
    CHECK(floor_M_pow(7, rat(0)) == 1);
    CHECK(floor_M_pow(2, rat(10)) == 1024); // integer exponent
}

TEST_CASE("every generating tuple is incident to its line") {
    Config cfg = gen_furstenberg({2, 4, rat(1)});
    IncidenceReport rep = count_incidences(cfg);
    CHECK(rep.total == 176);
    CHECK(rep.min_per_line == 11);
    CHECK(rep.max_per_line == 11);
}

TEST_CASE("grid polynomial vanishes exactly on the grid planes") {
    MultiPoly g = gen_grid_polynomial(2, 4); // k = 2 shifts per axis at 1/3, 2/3
    CHECK(g.degree() == 4);
    CHECK(g(RatVec{rat(1, 3), rat(7, 11)}) == rat(0));
    CHECK(g(RatVec{rat(5, 8), rat(2, 3)}) == rat(0));
    CHECK(g(RatVec{rat(1, 2), rat(1, 2)}) == rat(1, 1296));
    MultiPoly g3 = gen_grid_polynomial(3, 6); // k = 2 in three variables
    CHECK(g3.degree() == 6);
    CHECK(g3(RatVec{rat(1, 2), rat(2, 3), rat(1, 7)}) == rat(0));
}

TEST_CASE("cayley rotation is exactly orthogonal") {
    for (std::size_t n : {2, 3, 4}) {
        RatMat R = rational_rotation(random_skew(n, 3));
        REQUIRE(R.size() == n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rational s = 0;
                for (std::size_t k = 0; k < n; ++k) s += R[k][i] * R[k][j];
                CAPTURE(n);
                CHECK(s == (i == j ? rat(1) : rat(0)));
            }
    }
    RatMat R2 = rational_rotation(random_skew(2, 3));
    CHECK(R2[0][0] * R2[1][1] - R2[0][1] * R2[1][0] == rat(1));
    CHECK_THROWS_AS(rational_rotation({RatVec{rat(0), rat(1)}, RatVec{rat(1), rat(0)}}),
                    BadParams);
}

TEST_CASE("rotations preserve incidence structure exactly") {
    Config cfg = gen_furstenberg({2, 2, rat(1)});
    RatMat R = rational_rotation(random_skew(2, 3));
    Config rot = mat_apply(R, cfg);
    IncidenceReport a = count_incidences(cfg);
    IncidenceReport b = count_incidences(rot);
    CHECK(a.total == b.total);
    CHECK(a.per_line == b.per_line);

    // point-by-point: R p lies on R l whenever p lies on l
    for (const auto& l : cfg.lines) {
        Line rl = mat_apply(R, l);
        for (const auto& p : cfg.points)
            CHECK(point_on_line(p, l) == point_on_line(mat_apply(R, p), rl));
    }
}
