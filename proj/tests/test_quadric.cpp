#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "inclab/errors.hpp"
#include "inclab/geometry.hpp"
#include "inclab/incidence.hpp"
#include "inclab/quadric.hpp"
#include "inclab/rational.hpp"

using namespace inclab;

namespace {
IntVec iv(std::initializer_list<long> xs) {
    IntVec v;
    for (long x : xs) v.push_back(Int(x));
    return v;
}
} // namespace

TEST_CASE("doubled matrix validation splits shape from content") {
    // shape problems
    CHECK_THROWS_AS(make_quad_form({iv({0, 1}), iv({2, 0})}), BadParams);
    CHECK_THROWS_AS(make_quad_form({iv({1, 0}), iv({0, 2})}), BadParams);
    // content problems
    CHECK_THROWS_AS(make_quad_form({iv({2, 0}), iv({0, 0})}), DegenerateInput);
    CHECK_THROWS_AS(make_quad_form({iv({2, 0}), iv({0, 2})}), DegenerateInput);

    QuadForm ok = make_quad_form({iv({0, 1}), iv({1, 0})});
    CHECK(ok.pos_inertia == 1);
    CHECK(ok.neg_inertia == 1);
}

TEST_CASE("hyperbolic form layout and arithmetic") {
    QuadForm f3 = hyperbolic_form(3);
    REQUIRE(f3.gram2.size() == 3);
    CHECK(f3.gram2[0] == iv({0, 1, 0}));
    CHECK(f3.gram2[1] == iv({1, 0, 0}));
    CHECK(f3.gram2[2] == iv({0, 0, 2}));
    CHECK(f3.pos_inertia == 2);
    CHECK(f3.neg_inertia == 1);

    QuadForm f4 = hyperbolic_form(4);
    CHECK(eval2(f4, iv({1, 1, 0, 0})) == 2); // Q(1,1,0,0) = 1
    CHECK(bilinear2(f4, iv({1, 1, 0, 0}), iv({0, 0, 1, -1})) == 0);
}

TEST_CASE("point enumeration in the unit box") {
    QuadForm f4 = hyperbolic_form(4);
    auto pts = enumerate_quadric_points(f4, 1);
    REQUIRE(pts.size() == 20);
    CHECK(pts.front() == iv({-1, -1, -1, 0}));
    CHECK(pts.back() == iv({1, 1, 1, 0}));
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    std::set<IntVec> dedup(pts.begin(), pts.end());
    CHECK(dedup.size() == pts.size());
    for (const auto& p : pts) {
        CHECK(eval2(f4, p) == 2);
        for (const auto& c : p) CHECK(abs(c) <= 1);
    }
    // serial agrees
    CHECK(enumerate_quadric_points(f4, 1, Exec::serial) == pts);
}

TEST_CASE("line enumeration and the independent checker") {
    QuadForm f4 = hyperbolic_form(4);
    auto lines = enumerate_quadric_lines(f4, 2, 1, 2);
    CHECK(lines.size() == 96);

    // the two lines in direction e1 sit on the null planes of x2
    IntVec e1 = iv({1, 0, 0, 0});
    std::vector<RatVec> bases;
    for (const auto& l : lines)
        if (l.dir.v == e1) bases.push_back(l.base);
    REQUIRE(bases.size() == 2);
    std::sort(bases.begin(), bases.end());
    CHECK(bases[0] == RatVec{rat(0), rat(0), rat(-1), rat(-1)});
    CHECK(bases[1] == RatVec{rat(0), rat(0), rat(1), rat(1)});

    auto pts = enumerate_quadric_points(f4, 1);
    CHECK(verify_quadric_config(f4, pts, lines));

    auto tampered = pts;
    tampered[0][0] += 1;
    CHECK_FALSE(verify_quadric_config(f4, tampered, {}));

    // no bundle of three of these lines is coplanar
    FlatReport fr = max_rflat_concentration(lines, 2);
    CHECK(fr.max_count == 2);
    CHECK(fr.exact);
}

TEST_CASE("direction band exponent") {
    CHECK(quadric_alpha(4) == rat(3, 2));
    CHECK(quadric_alpha(5) == rat(3, 4));
    CHECK_THROWS_AS(quadric_alpha(3), BadParams);
}

TEST_CASE("log-log slope fitting") {
    CHECK_THROWS_AS(fit_count_exponent({{2.0, 8.0}, {4.0, 64.0}}), DegenerateInput);
    FitResult fr = fit_count_exponent({{2.0, 12.0}, {4.0, 48.0}, {8.0, 192.0}});
    CHECK(fr.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fr.residual < 1e-12);
    CHECK(fr.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
}
