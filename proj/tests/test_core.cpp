#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "inclab/errors.hpp"
#include "inclab/geometry.hpp"
#include "inclab/rational.hpp"
#include "inclab/report.hpp"

using namespace inclab;

namespace {
std::string tmpfile_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
} // namespace

TEST_CASE("rational construction and canonical form") {
    CHECK(rat(6, 8) == rat(3, 4));
    CHECK(rat(-6, 8) == rat(-3, 4));
    CHECK(rat(3, -4) == rat(-3, 4)); // denominator sign moves to the numerator
    CHECK(rat(0, 7) == rat(0));
    CHECK(rat(Int(10), Int(4)) == rat(5, 2));
    CHECK_THROWS_AS(rat(1, 0), BadParams);
    CHECK_THROWS_AS(rat(Int(1), Int(0)), BadParams);
}

TEST_CASE("rational parse and format") {
    CHECK(parse_rational("7") == rat(7));
    CHECK(parse_rational("6/8") == rat(3, 4));
    CHECK(parse_rational("-0.25") == rat(-1, 4));
    CHECK(parse_rational("0.125") == rat(1, 8));
    CHECK(format_rational(rat(7)) == "7/1");
    CHECK(format_rational(rat(3, 4)) == "3/4");
    CHECK(format_rational(rat(-1, 4)) == "-1/4");
    CHECK_THROWS_AS(parse_rational("x"), ParseError);

    // format -> parse is the identity on a seeded sample
    std::uint64_t st = derive_seed(5, 0xC0FEull);
    for (int i = 0; i < 200; ++i) {
        st = mix64(st);
        long num = static_cast<long>(st % 20001) - 10000;
        st = mix64(st);
        long den = 1 + static_cast<long>(st % 999);
        Rational q = rat(num, den);
        CHECK(parse_rational(format_rational(q)) == q);
    }
}

TEST_CASE("csv helpers round trip") {
    RatVec v{rat(1, 3), rat(-2), rat(0), rat(7, 5)};
    RatVec back = parse_rational_csv(format_rational_csv(v));
    REQUIRE(back.size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(back[i] == v[i]);
}

TEST_CASE("dot products are exact") {
    RatVec a{rat(1, 2), rat(1, 3)}, b{rat(2), rat(3)};
    CHECK(dot(a, b) == rat(2));
    IntVec u{Int(3), Int(-4)}, w{Int(1), Int(2)};
    CHECK(dot(u, w) == Int(-5));
    CHECK(dot(a, u) == rat(1, 6));
    CHECK(sgn(rat(-3, 7)) == -1);
    CHECK(sgn(rat(0)) == 0);
    CHECK(sgn(rat(5)) == 1);
}

TEST_CASE("seeded stream is the reference splitmix64") {
    CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(mix64(1) == 0x910a2dec89025cc1ULL);
    CHECK(derive_seed(1, 2) == 0xe06dd043328bd285ULL);
    CHECK(u01(0) == 0.0);
    CHECK(u01(~0ULL) < 1.0);
    CHECK(u01(mix64(42)) == doctest::Approx(0.74156487877182331).epsilon(1e-15));
    // stream derivation separates tags
    CHECK(derive_seed(9, 1) != derive_seed(9, 2));
    CHECK(derive_seed(9, 1) == derive_seed(9, 1));
}

TEST_CASE("canonical directions") {
    Direction d1 = canonical_direction(IntVec{Int(-2), Int(4)});
    CHECK(d1.v == IntVec{Int(1), Int(-2)});
    Direction d2 = canonical_direction(IntVec{Int(0), Int(-3), Int(6)});
    CHECK(d2.v == IntVec{Int(0), Int(1), Int(-2)});
    Direction d3 = canonical_direction(RatVec{rat(-2, 3), rat(4, 3)});
    CHECK(d3.v == IntVec{Int(1), Int(-2)});
    CHECK(d1 == d3);
    CHECK_THROWS_AS(canonical_direction(IntVec{Int(0), Int(0)}), ZeroDirection);
    CHECK_THROWS_AS(canonical_direction(RatVec{rat(0), rat(0)}), ZeroDirection);
}

TEST_CASE("canonical line representation") {
    // base is the orthogonal foot, direction primitive with positive lead
    Line l = canonicalize_line(RatVec{rat(1), rat(1)}, IntVec{Int(1), Int(1)});
    CHECK(l.base == RatVec{rat(0), rat(0)});
    CHECK(l.dir.v == IntVec{Int(1), Int(1)});
    Line l2 = canonicalize_line(RatVec{rat(1, 2), rat(0)}, IntVec{Int(0), Int(-2)});
    CHECK(l2.base == RatVec{rat(1, 2), rat(0)});
    CHECK(l2.dir.v == IntVec{Int(0), Int(1)});
    // same geometric line, any parametrization
    Line l3 = canonicalize_line(RatVec{rat(3), rat(3)}, IntVec{Int(-2), Int(-2)});
    CHECK(l == l3);
    Line l4 = canonicalize_line(RatVec{rat(1, 3), rat(2, 3)}, IntVec{Int(3), Int(-6)});
    CHECK(l4.base == RatVec{rat(8, 15), rat(4, 15)});
    CHECK(l4.dir.v == IntVec{Int(1), Int(-2)});
    CHECK_THROWS_AS(canonicalize_line(RatVec{rat(0), rat(0)}, IntVec{Int(1), Int(0), Int(0)}),
                    DimensionMismatch);
}

TEST_CASE("point on line and line parameter") {
    Line l = canonicalize_line(RatVec{rat(1), rat(1)}, IntVec{Int(1), Int(1)});
    RatVec p(2);
    for (std::size_t i = 0; i < 2; ++i) p[i] = l.base[i] + rat(5, 3) * Rational(l.dir.v[i]);
    CHECK(point_on_line(p, l));
    CHECK(line_parameter(p, l) == rat(5, 3));
    CHECK_FALSE(point_on_line(RatVec{rat(0), rat(1)}, l));
}

TEST_CASE("stereographic projection round trips") {
    RatVec x{rat(3, 5), rat(4, 5)};
    RatVec y = stereographic_project(x);
    REQUIRE(y.size() == 1);
    CHECK(y[0] == rat(1, 3));
    RatVec back = stereographic_lift(y);
    CHECK(back[0] == rat(3, 5));
    CHECK(back[1] == rat(4, 5));
    CHECK_THROWS_AS(stereographic_project(RatVec{rat(0), rat(-1)}), AtPole);

    // seeded lift -> project identity (lift always lands off the pole)
    std::uint64_t st = derive_seed(17, 0x57ull);
    for (int i = 0; i < 50; ++i) {
        RatVec w(2);
        for (int j = 0; j < 2; ++j) {
            st = mix64(st);
            w[j] = rat(static_cast<long>(st % 41) - 20, 7);
        }
        RatVec s = stereographic_lift(w);
        CHECK(dot(s, s) == rat(1));
        RatVec w2 = stereographic_project(s);
        CHECK(w2[0] == w[0]);
        CHECK(w2[1] == w[1]);
    }
}

TEST_CASE("stereographic image of rational directions") {
    StereoImage s1 = stereographic_project(canonical_direction(IntVec{Int(1), Int(2), Int(2)}));
    REQUIRE(s1.exact);
    CHECK(s1.value == RatVec{rat(1, 5), rat(2, 5)});
    REQUIRE(s1.approx.size() == 2);
    CHECK(s1.approx[0] == doctest::Approx(0.2).epsilon(1e-15));
    StereoImage s2 = stereographic_project(canonical_direction(IntVec{Int(1), Int(1)}));
    CHECK_FALSE(s2.exact); // |(1,1)| is irrational
    REQUIRE(s2.approx.size() == 1);
    CHECK(s2.approx[0] == doctest::Approx(0.41421356237309503).epsilon(1e-15));
}

TEST_CASE("point and line text formats") {
    Line l = canonicalize_line(RatVec{rat(1, 3), rat(2, 3)}, IntVec{Int(3), Int(-6)});
    CHECK(format_line(l) == "base: 8/15,4/15 | dir: 1,-2");
    CHECK(parse_line(format_line(l)) == l);
    Point p{rat(1, 2), rat(-3, 7)};
    Point q = parse_point(format_point(p));
    CHECK(q == p);
    CHECK_THROWS_AS(parse_point("1/2,1/3", 3), DimensionMismatch);
    CHECK_THROWS_AS(parse_point("a,b"), ParseError);
    CHECK_THROWS_AS(parse_line("nonsense"), ParseError);
}

TEST_CASE("point and line file IO skips comments") {
    std::string pf = tmpfile_path("inclab_test_points.txt");
    std::string lf = tmpfile_path("inclab_test_lines.txt");
    std::vector<Point> pts{{rat(1, 2), rat(1, 3)}, {rat(0), rat(1)}};
    write_points(pf, pts);
    std::vector<Point> rd = read_points(pf);
    REQUIRE(rd.size() == pts.size());
    CHECK(rd[0] == pts[0]);
    CHECK(rd[1] == pts[1]);

    std::vector<Line> lns{canonicalize_line(RatVec{rat(0), rat(0)}, IntVec{Int(1), Int(2)}),
                          canonicalize_line(RatVec{rat(1, 4), rat(0)}, IntVec{Int(0), Int(1)})};
    write_lines(lf, lns);
    std::vector<Line> rl = read_lines(lf);
    REQUIRE(rl.size() == 2);
    CHECK(rl[0] == lns[0]);
    CHECK(rl[1] == lns[1]);

    // hand-written file with comments and blank lines
    write_text(pf, "# header comment\n\n1/2,1/3   # trailing note\n\n0/1,1/1\n");
    rd = read_points(pf);
    REQUIRE(rd.size() == 2);
    CHECK(rd[0] == pts[0]);
    CHECK(rd[1] == pts[1]);
}

TEST_CASE("byte-stable double formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0 / 3.0) == "0.333333333333");
    CHECK(format_double(1e-5) == "1e-05");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(300.0) == "300");
}

TEST_CASE("fnv1a digests") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("abc") == "e71fa2190541574b");
    CHECK(fnv1a_hex("hello world") == "779a65e7023cd2e7");
    std::string path = tmpfile_path("inclab_test_digest.txt");
    write_text(path, "abc");
    CHECK(file_digest(path) == fnv1a_hex("abc"));
    CHECK_THROWS_AS(read_text(tmpfile_path("inclab_missing_file_xyz")), Error);
}

TEST_CASE("csv writer quotes the hard cells") {
    std::string path = tmpfile_path("inclab_test_cells.csv");
    write_csv(path, {"a", "b"}, {{"x,y", "pl\"ain"}, {"1", "2"}});
    CHECK(read_text(path) == "a,b\n\"x,y\",\"pl\"\"ain\"\n1,2\n");
}
