#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "inclab/errors.hpp"
#include "inclab/geometry.hpp"
#include "inclab/poly.hpp"
#include "inclab/rational.hpp"
#include "inclab/singular.hpp"

using namespace inclab;

namespace {
const MultiPoly slab = MultiPoly::axis_shift(2, 0, rat(5, 9)); // x0 - 5/9

ScanParams small_params() {
    ScanParams sp;
    sp.N = 16;
    sp.epsilon = 0.25;
    sp.H = 8;
    sp.seed = 1;
    return sp;
}

Direction dir2(long a, long b) { return canonical_direction(IntVec{Int(a), Int(b)}); }
} // namespace

TEST_CASE("parameter validation") {
    ScanParams bad = small_params();
    bad.N = 1;
    CHECK_THROWS_AS(singular_direction_test(slab, bad, dir2(1, 0)), BadParams);
    CHECK_THROWS_AS(singular_direction_test(MultiPoly::axis_shift(4, 0, rat(1, 2)),
                                            small_params(),
                                            canonical_direction(IntVec{Int(1), Int(0), Int(0), Int(0)})),
                    UnsupportedDimension);
    CHECK_THROWS_AS(singular_direction_test(slab, small_params(),
                                            canonical_direction(IntVec{Int(1), Int(0), Int(0)})),
                    DimensionMismatch);
}

TEST_CASE("single directions against the line x = 5/9") {
    ScanParams sp = small_params(); // 32 cubes per axis, threshold 4

    DirectionRow across = singular_direction_test(slab, sp, dir2(1, 0));
    CHECK(across.best_count == 1);
    CHECK_FALSE(across.singular);
    CHECK_FALSE(across.certified_nonsingular); // 1 is not below threshold/9

    DirectionRow along = singular_direction_test(slab, sp, dir2(0, 1));
    CHECK(along.best_count == 32); // rides the zero line through the full column
    CHECK(along.singular);

    DirectionRow diag = singular_direction_test(slab, sp, dir2(1, 1));
    CHECK(diag.best_count == 2);
    CHECK_FALSE(diag.singular);

    DirectionRow none = singular_direction_test(MultiPoly::constant(2, rat(3)), sp, dir2(1, 0));
    CHECK(none.best_count == 0);
    CHECK(none.certified_nonsingular);
}

TEST_CASE("full scan: counts, thresholds, and schedule independence") {
    ScanParams sp = small_params();
    ScanReport par = singular_scan(slab, sp, Exec::parallel);
    ScanReport ser = singular_scan(slab, sp, Exec::serial);

    CHECK(par.cubes_per_axis == 32);
    CHECK(par.threshold == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(par.certified_threshold == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
    CHECK_FALSE(par.degree_warning);
    CHECK(par.sampled_directions == 64);
    REQUIRE(par.rows.size() == 64);
    CHECK(par.singular_count == 14);

    long recount = 0;
    for (const auto& r : par.rows) recount += r.singular ? 1 : 0;
    CHECK(recount == par.singular_count);

    REQUIRE(ser.rows.size() == par.rows.size());
    for (std::size_t i = 0; i < par.rows.size(); ++i) {
        const auto& x = par.rows[i];
        const auto& y = ser.rows[i];
        CHECK(x.v.v == y.v.v);
        CHECK(x.best_count == y.best_count);
        CHECK(x.singular == y.singular);
        CHECK(x.certified_nonsingular == y.certified_nonsingular);
        CHECK(x.best_base == y.best_base); // per-cube seeding, so bitwise equal
    }
}

TEST_CASE("crossing formula endpoints") {
    std::vector<RatVec> normals{RatVec{rat(0), rat(0), rat(1)}};
    Direction ez = canonical_direction(IntVec{Int(0), Int(0), Int(1)});
    Direction ex = canonical_direction(IntVec{Int(1), Int(0), Int(0)});
    // line along the normal: 1/(pi/2) crossings per cube
    CHECK(crossing_formula(normals, ez, 100.0) ==
          doctest::Approx(2.0 / 3.14159265358979323846).epsilon(1e-12));
    // line inside the hyperplane: capped
    CHECK(crossing_formula(normals, ex, 100.0) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("direction samples cover the requested count") {
    auto ds2 = direction_sample(2, 8, 1);
    CHECK(ds2.size() == 8);
    auto ds3 = direction_sample(3, 16, 1);
    CHECK(ds3.size() == 13); // lattice rounding may trim the target
    for (const auto& d : ds3) {
        REQUIRE(d.v.size() == 3);
        bool nonzero = false;
        for (const auto& c : d.v) nonzero = nonzero || c != 0;
        CHECK(nonzero);
    }
}

TEST_CASE("cube bisection sampling") {
    MultiPoly mid = MultiPoly::axis_shift(2, 0, rat(1, 2));
    CubeFractions whole = is_bisected_cube(mid, {0.0, 0.0}, 1.0, 256, 0.1, 7);
    CHECK(whole.bisected);
    CHECK(whole.frac_pos > 0.3);
    CHECK(whole.frac_neg > 0.3);
    CHECK(whole.frac_pos + whole.frac_neg <= 1.0);

    CubeFractions corner = is_bisected_cube(mid, {0.0, 0.0}, 0.25, 256, 0.1, 7);
    CHECK(corner.frac_pos == 0.0); // cube sits strictly left of the slab
    CHECK_FALSE(corner.bisected);
}

TEST_CASE("hairbrush direction count on a flat slab") {
    MultiPoly slab3 = MultiPoly::axis_shift(3, 0, rat(1, 2));
    HairbrushReport h = hairbrush_direction_count(slab3, 16, 1, 0.5, 1);
    CHECK(h.N == 16);
    CHECK(h.directions_tested == 825);
    CHECK(h.qualifying == 392);
    CHECK(h.bound == doctest::Approx(6149.798578152978).epsilon(1e-12));
    CHECK(h.within_bound);
    CHECK(h.qualifying <= h.directions_tested);

    CHECK_THROWS_AS(hairbrush_direction_count(MultiPoly::axis_shift(2, 0, rat(1, 2)), 16, 1, 0.5, 1),
                    UnsupportedDimension);
}
