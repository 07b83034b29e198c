#include "inclab/geometry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace inclab {

namespace {

bool all_zero(const RatVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

void normalize_primitive(IntVec& w) {
    Int g = 0;
    for (const auto& x : w) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) throw ZeroDirection();
    for (auto& x : w) x /= g;
    for (const auto& x : w) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : w) y = -y;
        break;
    }
}

} // namespace

Direction canonical_direction(const RatVec& raw) {
    if (raw.empty() || all_zero(raw)) throw ZeroDirection();
    Int scale = 1;
    for (const auto& x : raw)
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), x.get_den().get_mpz_t());
    IntVec w(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        Rational t = raw[i] * Rational(scale);
        t.canonicalize();
        w[i] = t.get_num(); // den is 1 by construction
    }
    normalize_primitive(w);
    return Direction{std::move(w)};
}

Direction canonical_direction(const IntVec& raw) {
    IntVec w = raw;
    normalize_primitive(w);
    return Direction{std::move(w)};
}

static Line make_line(const RatVec& point, Direction d) {
    if (point.size() != d.dim()) throw DimensionMismatch();
    Int dd = dot(d.v, d.v);
    Rational t = dot(point, d.v) / Rational(dd);
    Point base(point.size());
    for (std::size_t i = 0; i < point.size(); ++i)
        base[i] = point[i] - t * Rational(d.v[i]);
    return Line{std::move(base), std::move(d)};
}

Line canonicalize_line(const RatVec& point, const RatVec& raw_dir) {
    return make_line(point, canonical_direction(raw_dir));
}

Line canonicalize_line(const RatVec& point, const IntVec& raw_dir) {
    return make_line(point, canonical_direction(raw_dir));
}

bool point_on_line(const Point& p, const Line& l) {
    if (p.size() != l.dim()) throw DimensionMismatch();
    Int dd = dot(l.dir.v, l.dir.v);
    RatVec r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] - l.base[i];
    Rational t = dot(r, l.dir.v) / Rational(dd);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (r[i] != t * Rational(l.dir.v[i])) return false;
    return true;
}

Rational line_parameter(const Point& p, const Line& l) {
    if (p.size() != l.dim()) throw DimensionMismatch();
    Int dd = dot(l.dir.v, l.dir.v);
    RatVec r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] - l.base[i];
    return dot(r, l.dir.v) / Rational(dd);
}

RatVec stereographic_project(const RatVec& x) {
    if (x.size() < 2) throw DimensionMismatch();
    if (dot(x, x) != 1) throw BadParams("stereographic_project: not a unit sphere point");
    Rational denom = 1 + x.back();
    if (denom == 0) throw AtPole();
    RatVec y(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) y[i] = x[i] / denom;
    return y;
}

RatVec stereographic_lift(const RatVec& y) {
    Rational yy = y.empty() ? Rational(0) : dot(y, y);
    Rational denom = 1 + yy;
    RatVec x(y.size() + 1);
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = 2 * y[i] / denom;
    x.back() = (1 - yy) / denom;
    return x;
}

StereoImage stereographic_project(const Direction& d) {
    StereoImage out;
    Int nn = dot(d.v, d.v);
    if (mpz_perfect_square_p(nn.get_mpz_t())) {
        Int root;
        mpz_sqrt(root.get_mpz_t(), nn.get_mpz_t());
        RatVec unit(d.dim());
        for (std::size_t i = 0; i < d.dim(); ++i) unit[i] = rat(d.v[i], root);
        out.exact = true;
        out.value = stereographic_project(unit);
        out.approx = to_double(out.value);
        return out;
    }
    double norm = std::sqrt(to_double(Rational(nn)));
    double last = d.v.back().get_d() / norm;
    if (last <= -1.0) throw AtPole();
    out.approx.resize(d.dim() - 1);
    for (std::size_t i = 0; i + 1 < d.dim(); ++i)
        out.approx[i] = d.v[i].get_d() / norm / (1.0 + last);
    return out;
}

std::string format_point(const Point& p) { return format_rational_csv(p); }

Point parse_point(const std::string& text, std::size_t expect_dim) {
    Point p = parse_rational_csv(text);
    if (expect_dim && p.size() != expect_dim) throw DimensionMismatch();
    return p;
}

std::string format_line(const Line& l) {
    std::string s = "base: " + format_rational_csv(l.base) + " | dir: ";
    for (std::size_t i = 0; i < l.dir.v.size(); ++i) {
        if (i) s += ',';
        s += l.dir.v[i].get_str();
    }
    return s;
}

Line parse_line(const std::string& text, std::size_t expect_dim) {
    auto bar = text.find('|');
    auto bpos = text.find("base:");
    auto dpos = text.find("dir:");
    if (bar == std::string::npos || bpos == std::string::npos ||
        dpos == std::string::npos || dpos < bar)
        throw ParseError("bad line record '" + text + "'");
    RatVec base = parse_rational_csv(text.substr(bpos + 5, bar - bpos - 5));
    RatVec dir = parse_rational_csv(text.substr(dpos + 4));
    if (expect_dim && base.size() != expect_dim) throw DimensionMismatch();
    // Re-canonicalize on read so hand-written files land in canonical form.
    return canonicalize_line(base, dir);
}

namespace {

template <class F>
void for_payload_lines(const std::string& path, F&& f) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string row;
    while (std::getline(in, row)) {
        auto hash = row.find('#');
        if (hash != std::string::npos) row.erase(hash);
        bool blank = true;
        for (char c : row)
            if (!isspace(static_cast<unsigned char>(c))) blank = false;
        if (!blank) f(row);
    }
}

} // namespace

std::vector<Point> read_points(const std::string& path) {
    std::vector<Point> out;
    for_payload_lines(path, [&](const std::string& row) { out.push_back(parse_point(row)); });
    return out;
}

std::vector<Line> read_lines(const std::string& path) {
    std::vector<Line> out;
    for_payload_lines(path, [&](const std::string& row) { out.push_back(parse_line(row)); });
    return out;
}

void write_points(const std::string& path, const std::vector<Point>& pts) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (const auto& p : pts) out << format_point(p) << '\n';
}

void write_lines(const std::string& path, const std::vector<Line>& lns) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    for (const auto& l : lns) out << format_line(l) << '\n';
}

double to_double(const Rational& q) { return q.get_d(); }

std::vector<double> to_double(const RatVec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
    return out;
}

std::vector<double> to_double(const IntVec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
    return out;
}

} // namespace inclab
