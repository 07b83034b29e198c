#include "inclab/configs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace inclab {

Int floor_M_pow(long M, const Rational& beta) {
    if (M < 2) throw BadParams("M must be >= 2");
    if (beta < 0 || beta > 1) throw BadParams("beta must lie in [0,1]");
    unsigned long p = beta.get_num().get_ui();
    unsigned long q = beta.get_den().get_ui();
    Int mp;
    mpz_ui_pow_ui(mp.get_mpz_t(), static_cast<unsigned long>(M), p);
    Int root;
    mpz_root(root.get_mpz_t(), mp.get_mpz_t(), q);
    return root;
}

Config gen_furstenberg(const FurstenbergParams& params) {
    std::size_t n = params.n;
    long M = params.M;
    if (n < 2) throw BadParams("need n >= 2");
    if (M < 2) throw BadParams("M must be >= 2");
    Int amax_z = floor_M_pow(M, params.beta);
    if (amax_z > 100000) throw BudgetExceeded("floor(M^beta) too large to enumerate");
    long amax = static_cast<long>(amax_z.get_si());

    double line_tuples = std::pow(static_cast<double>(M), 2.0 * static_cast<double>(n - 1));
    double point_tuples = line_tuples * static_cast<double>(amax) * static_cast<double>(amax);
    if (point_tuples > 4e6) throw BudgetExceeded("point enumeration too large; use the counting path");

    Config cfg;
    cfg.n = n;
    Rational M2 = rat(M, 1) * rat(M, 1);

    // lines: one per digit tuple m in [1,M]^{2(n-1)}
    std::vector<long> m(2 * (n - 1), 1);
    std::unordered_set<std::string> seen_lines;
    while (true) {
        RatVec base(n, Rational(0));
        RatVec dir(n, Rational(0));
        dir[0] = 1;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            long m1 = m[2 * i], m2 = m[2 * i + 1];
            base[i + 1] = rat(m2, 1) / M2;
            dir[i + 1] = (rat(M, 1) * rat(m1, 1) - rat(m2, 1)) / M2;
        }
        Line l = canonicalize_line(base, dir);
        if (seen_lines.insert(format_line(l)).second) cfg.lines.push_back(std::move(l));

        std::size_t axis = 0;
        while (axis < m.size() && ++m[axis] > M) m[axis++] = 1;
        if (axis == m.size()) break;
    }

    // points: (a, b, m) tuples, dedup exact
    std::unordered_set<std::string> seen_points;
    for (long a = 1; a <= amax; ++a)
        for (long b = 1; b <= amax; ++b) {
            Rational den(a + b * M);
            Rational x1 = rat(a, 1) / den;
            std::fill(m.begin(), m.end(), 1L);
            while (true) {
                Point p(n);
                p[0] = x1;
                for (std::size_t i = 0; i + 1 < n; ++i) {
                    long m1 = m[2 * i], m2 = m[2 * i + 1];
                    p[i + 1] = rat(a * m1 + b * m2, 1) / (den * rat(M, 1));
                }
                if (seen_points.insert(format_point(p)).second) cfg.points.push_back(std::move(p));

                std::size_t axis = 0;
                while (axis < m.size() && ++m[axis] > M) m[axis++] = 1;
                if (axis == m.size()) break;
            }
        }
    return cfg;
}

Int furstenberg_point_count(long M, const Rational& beta) {
    if (M < 2) throw BadParams("M must be >= 2");
    Int amax_z = floor_M_pow(M, beta);
    if (amax_z > 4096) throw BudgetExceeded("counting path supports floor(M^beta) <= 4096");
    long amax = static_cast<long>(amax_z.get_si());

    Int total = 0;
    std::vector<std::uint8_t> hit;
    for (long a0 = 1; a0 <= amax; ++a0)
        for (long b0 = 1; b0 <= amax; ++b0) {
            if (std::gcd(a0, b0) != 1) continue;
            // distinct values of m1*a0 + m2*b0 over [1,M]^2
            long lo = a0 + b0, hi = (a0 + b0) * M;
            hit.assign(static_cast<std::size_t>(hi - lo + 1), 0);
            long distinct = 0;
            for (long m1 = 1; m1 <= M; ++m1) {
                long base = m1 * a0;
                for (long m2 = 1; m2 <= M; ++m2) {
                    long s = base + m2 * b0 - lo;
                    if (!hit[static_cast<std::size_t>(s)]) {
                        hit[static_cast<std::size_t>(s)] = 1;
                        ++distinct;
                    }
                }
            }
            total += distinct;
        }
    return total;
}

MultiPoly gen_grid_polynomial(std::size_t n, long d) {
    if (n < 1) throw BadParams("need n >= 1");
    if (d < static_cast<long>(n)) throw BadParams("need d >= n so every axis gets a factor");
    long k = d / static_cast<long>(n);
    MultiPoly p = MultiPoly::constant(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        for (long j = 1; j <= k; ++j)
            p = p * MultiPoly::axis_shift(n, i, rat(j, k + 1));
    return p;
}

namespace {

RatMat identity(std::size_t n) {
    RatMat I(n, RatVec(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

RatMat multiply(const RatMat& A, const RatMat& B) {
    std::size_t n = A.size();
    RatMat C(n, RatVec(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (A[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) C[i][j] += A[i][k] * B[k][j];
        }
    return C;
}

RatMat invert(RatMat A) {
    std::size_t n = A.size();
    RatMat I = identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) throw SingularCayley();
        std::swap(A[piv], A[col]);
        std::swap(I[piv], I[col]);
        Rational inv = 1 / A[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            A[col][j] *= inv;
            I[col][j] *= inv;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || A[row][col] == 0) continue;
            Rational f = A[row][col];
            for (std::size_t j = 0; j < n; ++j) {
                A[row][j] -= f * A[col][j];
                I[row][j] -= f * I[col][j];
            }
        }
    }
    return I;
}

} // namespace

RatMat rational_rotation(const RatMat& skew) {
    std::size_t n = skew.size();
    if (n == 0) throw BadParams("empty matrix");
    for (const auto& row : skew)
        if (row.size() != n) throw BadParams("matrix not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (skew[i][j] != -skew[j][i]) throw BadParams("matrix not skew-symmetric");

    RatMat plus = identity(n), minus = identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            plus[i][j] += skew[i][j];
            minus[i][j] -= skew[i][j];
        }
    RatMat R = multiply(minus, invert(plus));

    // exact orthogonality check; cheap and catches any slip above
    RatMat G(n, RatVec(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) G[i][j] += R[k][i] * R[k][j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (G[i][j] != (i == j ? 1 : 0)) throw Error("cayley: R^T R != I");
    return R;
}

RatMat random_skew(std::size_t n, std::uint64_t seed) {
    RatMat S(n, RatVec(n, Rational(0)));
    std::uint64_t state = derive_seed(seed, 0x534b4557ull); // "SKEW"
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            state = mix64(state);
            long num = static_cast<long>(state % 17) - 8; // in [-8, 8]
            S[i][j] = rat(num, 8);
            S[j][i] = -S[i][j];
        }
    return S;
}

RatVec mat_apply(const RatMat& R, const RatVec& x) {
    std::size_t n = R.size();
    if (x.size() != n) throw DimensionMismatch();
    RatVec y(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) y[i] += R[i][j] * x[j];
    return y;
}

Line mat_apply(const RatMat& R, const Line& l) {
    RatVec dir(l.dim());
    for (std::size_t i = 0; i < l.dim(); ++i) dir[i] = Rational(l.dir.v[i]);
    return canonicalize_line(mat_apply(R, l.base), mat_apply(R, dir));
}

Config mat_apply(const RatMat& R, const Config& cfg) {
    Config out;
    out.n = cfg.n;
    out.points.reserve(cfg.points.size());
    out.lines.reserve(cfg.lines.size());
    for (const auto& p : cfg.points) out.points.push_back(mat_apply(R, p));
    for (const auto& l : cfg.lines) out.lines.push_back(mat_apply(R, l));
    return out;
}

} // namespace inclab
