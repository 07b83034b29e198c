#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inclab/rational.hpp"

namespace inclab {

// Points have exact rational coordinates. Directions are primitive integer
// vectors (gcd 1) whose first nonzero entry is positive, which identifies v
// with -v. A Line stores the foot of the perpendicular from the origin as
// its base point, so base.dir == 0 always holds and equal lines compare
// equal componentwise.
using Point = RatVec;

struct Direction {
    IntVec v;

    std::size_t dim() const { return v.size(); }
    bool operator==(const Direction& o) const { return v == o.v; }
};

struct Line {
    Point base;    // orthogonal foot, rational
    Direction dir; // primitive, sign-normalized

    std::size_t dim() const { return base.size(); }
    bool operator==(const Line& o) const { return base == o.base && dir == o.dir; }
};

// Scale a nonzero rational vector to the canonical primitive integer
// direction. Throws ZeroDirection.
Direction canonical_direction(const RatVec& raw);
Direction canonical_direction(const IntVec& raw);

// Build the canonical line through `point` with direction `raw`.
Line canonicalize_line(const RatVec& point, const RatVec& raw_dir);
Line canonicalize_line(const RatVec& point, const IntVec& raw_dir);

bool point_on_line(const Point& p, const Line& l);

// Exact parameter t with p = base + t*dir, valid only if point_on_line.
Rational line_parameter(const Point& p, const Line& l);

// Stereographic projection from the pole (0,..,0,-1):
//   (x_1,..,x_n) on S^{n-1}  ->  (x_1/(1+x_n), .., x_{n-1}/(1+x_n)).
// Exact for rational sphere points; AtPole if x_n = -1.
RatVec stereographic_project(const RatVec& sphere_point);

// Inverse: y in R^{n-1} -> (2y, 1-|y|^2)/(1+|y|^2), always rational.
RatVec stereographic_lift(const RatVec& y);

// Directions embed on the sphere only when |v|^2 is a perfect square;
// otherwise the projection is reported in floating point and flagged.
struct StereoImage {
    bool exact = false;
    RatVec value;               // set when exact
    std::vector<double> approx; // always set
};
StereoImage stereographic_project(const Direction& d);

struct Config {
    std::size_t n = 0;
    std::vector<Point> points;
    std::vector<Line> lines;
};

std::string format_point(const Point& p);
Point parse_point(const std::string& text, std::size_t expect_dim = 0);
std::string format_line(const Line& l);
Line parse_line(const std::string& text, std::size_t expect_dim = 0);

// point/line text files: one entity per line, '#' comments and blank lines
// ignored.
std::vector<Point> read_points(const std::string& path);
std::vector<Line> read_lines(const std::string& path);
void write_points(const std::string& path, const std::vector<Point>& pts);
void write_lines(const std::string& path, const std::vector<Line>& lns);

double to_double(const Rational& q);
std::vector<double> to_double(const RatVec& v);
std::vector<double> to_double(const IntVec& v);

} // namespace inclab
