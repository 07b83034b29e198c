#include "inclab/quadric.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "inclab/errors.hpp"
#include "inclab/poly.hpp"

namespace inclab {

namespace {

// congruence diagonalization over Q; counts the inertia indices and throws
// when the form is singular
void inertia(const std::vector<IntVec>& gram2, int& pos, int& neg) {
    std::size_t n = gram2.size();
    std::vector<RatVec> A(n, RatVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A[i][j] = Rational(gram2[i][j]);

    pos = 0;
    neg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (A[k][k] == 0) {
            std::size_t piv = n;
            for (std::size_t j = k + 1; j < n; ++j)
                if (A[j][j] != 0) {
                    piv = j;
                    break;
                }
            if (piv < n) {
                std::swap(A[k], A[piv]);
                for (std::size_t i = 0; i < n; ++i) std::swap(A[i][k], A[i][piv]);
            } else {
                std::size_t mix = n;
                for (std::size_t j = k + 1; j < n; ++j)
                    if (A[k][j] != 0) {
                        mix = j;
                        break;
                    }
                if (mix == n) throw DegenerateInput("singular quadratic form");
                for (std::size_t i = 0; i < n; ++i) A[k][i] += A[mix][i];
                for (std::size_t i = 0; i < n; ++i) A[i][k] += A[i][mix];
            }
        }
        Rational p = A[k][k];
        for (std::size_t j = k + 1; j < n; ++j) {
            if (A[j][k] == 0) continue;
            Rational f = A[j][k] / p;
            for (std::size_t l = k; l < n; ++l) A[j][l] -= f * A[k][l];
            for (std::size_t l = k; l < n; ++l) A[l][j] -= f * A[l][k];
        }
        if (p > 0)
            ++pos;
        else
            ++neg;
    }
}

struct LastSolve {
    bool all = false; // the equation holds identically
    std::vector<long> roots;
};

// integer roots of a t^2 + b t + c = 0 with |t| <= B
LastSolve solve_last(const Int& a, const Int& b, const Int& c, long B) {
    LastSolve s;
    if (a == 0) {
        if (b == 0) {
            s.all = (c == 0);
            return s;
        }
        Int num = -c;
        if (mpz_divisible_p(num.get_mpz_t(), b.get_mpz_t())) {
            Int t = num / b;
            if (t >= -B && t <= B) s.roots.push_back(t.get_si());
        }
        return s;
    }
    Int disc = b * b - 4 * a * c;
    if (disc < 0) return s;
    if (!mpz_perfect_square_p(disc.get_mpz_t())) return s;
    Int sq;
    mpz_sqrt(sq.get_mpz_t(), disc.get_mpz_t());
    Int den = 2 * a;
    for (int pm = 0; pm < (sq == 0 ? 1 : 2); ++pm) {
        Int num = pm == 0 ? Int(-b + sq) : Int(-b - sq);
        if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) continue;
        Int t = num / den;
        if (t >= -B && t <= B) s.roots.push_back(t.get_si());
    }
    std::sort(s.roots.begin(), s.roots.end());
    s.roots.erase(std::unique(s.roots.begin(), s.roots.end()), s.roots.end());
    return s;
}

void check_budget(long span, std::size_t n) {
    double cost = 1;
    for (std::size_t i = 0; i < n; ++i) cost *= static_cast<double>(span);
    if (cost > 1e9) throw BudgetExceeded("enumeration box too large");
}

// quadratic-in-last-coordinate coefficients for x = (prefix, t)
void last_coefficients(const QuadForm& f, const std::vector<long>& prefix, Int& a,
                       Int& b, Int& c) {
    std::size_t n = f.n;
    a = f.gram2[n - 1][n - 1];
    b = 0;
    c = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        b += 2 * f.gram2[i][n - 1] * prefix[i];
        for (std::size_t j = 0; j + 1 < n; ++j) c += f.gram2[i][j] * prefix[i] * prefix[j];
    }
}

MultiPoly expanded_form(const QuadForm& f) {
    MultiPoly Q(f.n);
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t j = i; j < f.n; ++j) {
            Int coef = i == j ? f.gram2[i][i] / 2 : f.gram2[i][j];
            if (coef == 0) continue;
            MultiPoly::Expo e(f.n, 0);
            e[i] += 1;
            e[j] += 1;
            Q.add_term(e, Rational(coef));
        }
    return Q;
}

} // namespace

QuadForm make_quad_form(const std::vector<IntVec>& gram2) {
    QuadForm f;
    f.n = gram2.size();
    if (f.n < 2) throw BadParams("form needs at least 2 variables");
    for (const auto& row : gram2)
        if (row.size() != f.n) throw DimensionMismatch();
    for (std::size_t i = 0; i < f.n; ++i) {
        if (!mpz_divisible_ui_p(gram2[i][i].get_mpz_t(), 2))
            throw BadParams("diagonal of the doubled matrix must be even");
        for (std::size_t j = i + 1; j < f.n; ++j)
            if (gram2[i][j] != gram2[j][i]) throw BadParams("matrix must be symmetric");
    }
    f.gram2 = gram2;
    inertia(gram2, f.pos_inertia, f.neg_inertia);
    if (std::abs(f.pos_inertia - f.neg_inertia) > 1)
        throw DegenerateInput("inertia indices must differ by at most one");
    return f;
}

QuadForm hyperbolic_form(std::size_t n) {
    if (n < 2) throw BadParams("form needs at least 2 variables");
    std::vector<IntVec> g(n, IntVec(n, Int(0)));
    for (std::size_t i = 0; i + 1 < n; i += 2) {
        g[i][i + 1] = 1;
        g[i + 1][i] = 1;
    }
    if (n % 2 == 1) g[n - 1][n - 1] = 2;
    return make_quad_form(g);
}

Int eval2(const QuadForm& f, const IntVec& x) {
    if (x.size() != f.n) throw DimensionMismatch();
    Int s = 0;
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t j = 0; j < f.n; ++j) s += f.gram2[i][j] * x[i] * x[j];
    return s;
}

Int bilinear2(const QuadForm& f, const IntVec& x, const IntVec& v) {
    if (x.size() != f.n || v.size() != f.n) throw DimensionMismatch();
    Int s = 0;
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t j = 0; j < f.n; ++j) s += f.gram2[i][j] * x[i] * v[j];
    return s;
}

std::vector<IntVec> enumerate_quadric_points(const QuadForm& f, long B, Exec exec) {
    if (B < 0) throw BadParams("box radius must be nonnegative");
    check_budget(2 * B + 1, f.n);
    std::size_t n = f.n;
    long span = 2 * B + 1;

    // chunk by the first coordinate; inside a chunk walk the remaining
    // prefix coordinates and solve for the last one exactly
    std::vector<std::vector<IntVec>> chunks(static_cast<std::size_t>(span));
    auto run_chunk = [&](long ci) {
        auto& out = chunks[static_cast<std::size_t>(ci)];
        std::vector<long> prefix(n - 1, -B);
        prefix[0] = ci - B;
        while (true) {
            Int a, b, c;
            last_coefficients(f, prefix, a, b, c);
            LastSolve s = solve_last(a, b, c - 2, B);
            auto emit = [&](long t) {
                IntVec x(n);
                for (std::size_t i = 0; i + 1 < n; ++i) x[i] = prefix[i];
                x[n - 1] = t;
                out.push_back(std::move(x));
            };
            if (s.all)
                for (long t = -B; t <= B; ++t) emit(t);
            else
                for (long t : s.roots) emit(t);
            std::size_t axis = n - 1;
            while (axis > 1 && ++prefix[axis - 1] > B) prefix[(axis--) - 1] = -B;
            if (axis == 1) break;
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long ci = 0; ci < span; ++ci) run_chunk(ci);
    } else {
        for (long ci = 0; ci < span; ++ci) run_chunk(ci);
    }

    std::vector<IntVec> points;
    for (auto& ch : chunks)
        for (auto& x : ch) points.push_back(std::move(x));
    return points;
}

std::vector<Line> enumerate_quadric_lines(const QuadForm& f, long B, long Vlo,
                                          long Vhi, Exec exec) {
    if (B < 0) throw BadParams("box radius must be nonnegative");
    if (Vlo <= 0 || Vlo > Vhi) throw BadParams("need 0 < Vlo <= Vhi");
    check_budget(2 * Vhi + 1, f.n);
    check_budget(2 * B + 1, f.n);
    std::size_t n = f.n;

    // isotropic primitive directions in the band, canonical representatives
    std::vector<IntVec> vs;
    {
        std::vector<long> prefix(n - 1, -Vhi);
        while (true) {
            Int a, b, c;
            last_coefficients(f, prefix, a, b, c);
            LastSolve s = solve_last(a, b, c, Vhi);
            std::vector<long> lasts = s.roots;
            if (s.all)
                for (long t = -Vhi; t <= Vhi; ++t) lasts.push_back(t);
            for (long t : lasts) {
                IntVec v(n);
                long sup = std::labs(t);
                bool zero = t == 0;
                for (std::size_t i = 0; i + 1 < n; ++i) {
                    v[i] = prefix[i];
                    sup = std::max(sup, std::labs(prefix[i]));
                    if (prefix[i] != 0) zero = false;
                }
                v[n - 1] = t;
                if (zero || sup < Vlo || sup > Vhi) continue;
                Direction d = canonical_direction(v);
                if (d.v == v) vs.push_back(std::move(v));
            }
            std::size_t axis = n - 1;
            while (axis > 0 && ++prefix[axis - 1] > Vhi) prefix[(axis--) - 1] = -Vhi;
            if (axis == 0) break;
        }
    }

    double per_v = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) per_v *= static_cast<double>(2 * B + 1);
    if (static_cast<double>(vs.size()) * per_v > 1e9)
        throw BudgetExceeded("direction family enumeration too large");

    std::vector<std::vector<Line>> per_dir(vs.size());
    auto run_v = [&](std::size_t vi) {
        const IntVec& v = vs[vi];
        IntVec Mv(n, Int(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) Mv[i] += f.gram2[i][j] * v[j];
        std::vector<long> prefix(n - 1, -B);
        auto emit = [&](const std::vector<long>& pre, long t) {
            RatVec p(n);
            for (std::size_t i = 0; i + 1 < n; ++i) p[i] = Rational(pre[i]);
            p[n - 1] = Rational(t);
            per_dir[vi].push_back(canonicalize_line(p, v));
        };
        while (true) {
            Int S = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) S += Mv[i] * prefix[i];
            if (Mv[n - 1] != 0) {
                Int num = -S;
                if (mpz_divisible_p(num.get_mpz_t(), Mv[n - 1].get_mpz_t())) {
                    Int t = num / Mv[n - 1];
                    if (t >= -B && t <= B) {
                        long tl = t.get_si();
                        Int a, b, c;
                        last_coefficients(f, prefix, a, b, c);
                        if (a * tl * tl + b * tl + c == 2) emit(prefix, tl);
                    }
                }
            } else if (S == 0) {
                Int a, b, c;
                last_coefficients(f, prefix, a, b, c);
                LastSolve s = solve_last(a, b, c - 2, B);
                if (s.all)
                    for (long t = -B; t <= B; ++t) emit(prefix, t);
                else
                    for (long t : s.roots) emit(prefix, t);
            }
            std::size_t axis = n - 1;
            while (axis > 0 && ++prefix[axis - 1] > B) prefix[(axis--) - 1] = -B;
            if (axis == 0) break;
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long vi = 0; vi < static_cast<long long>(vs.size()); ++vi)
            run_v(static_cast<std::size_t>(vi));
    } else {
        for (std::size_t vi = 0; vi < vs.size(); ++vi) run_v(vi);
    }

    std::set<std::string> seen;
    std::vector<Line> lines;
    for (const auto& group : per_dir)
        for (const auto& l : group)
            if (seen.insert(format_line(l)).second) lines.push_back(l);
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return format_line(a) < format_line(b);
    });
    return lines;
}

bool verify_quadric_config(const QuadForm& f, const std::vector<IntVec>& points,
                           const std::vector<Line>& lines) {
    MultiPoly Q = expanded_form(f);
    MultiPoly Qm1 = Q - MultiPoly::constant(f.n, Rational(1));
    for (const auto& x : points) {
        RatVec p(f.n);
        for (std::size_t i = 0; i < f.n; ++i) p[i] = Rational(x[i]);
        if (Q(p) != 1) return false;
    }
    std::set<std::string> seen;
    for (const auto& l : lines) {
        Line canon = canonicalize_line(l.base, l.dir.v);
        std::string key = format_line(l);
        if (format_line(canon) != key) return false;
        if (!seen.insert(key).second) return false;
        if (!restrict_to_line(Qm1, l).is_zero()) return false;
    }
    return true;
}

Rational quadric_alpha(std::size_t n) {
    if (n < 4) throw BadParams("band exponent needs at least 4 variables");
    return rat(3, 2 * static_cast<long>(n) - 6);
}

FitResult fit_count_exponent(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 3) throw DegenerateInput("need at least 3 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = samples.size();
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (samples[i].first <= 0 || samples[i].second <= 0)
            throw DegenerateInput("scales and counts must be positive");
        xs[i] = std::log(samples[i].first);
        ys[i] = std::log(samples[i].second);
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw DegenerateInput("scales are all equal");
    FitResult r;
    r.slope = (m * sxy - sx * sy) / denom;
    r.intercept = (sy - r.slope * sx) / m;
    double rss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double e = ys[i] - (r.intercept + r.slope * xs[i]);
        rss += e * e;
    }
    r.residual = std::sqrt(rss / static_cast<double>(m));
    return r;
}

} // namespace inclab
