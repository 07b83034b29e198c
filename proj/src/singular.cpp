#include "inclab/singular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "inclab/errors.hpp"
#include "inclab/gridscan.hpp"

namespace inclab {

namespace {

struct GridLayout {
    std::size_t n = 0;
    long K = 0;      // cells per axis
    double side = 0; // exact N^(-1-eps)
    double L = 0;    // K * side, the traversal box edge
};

GridLayout validate(const MultiPoly& Q, const ScanParams& p) {
    if (Q.is_zero()) throw ZeroPolynomial();
    if (p.N < 2) throw BadParams("N must be at least 2");
    if (p.epsilon < 0) throw BadParams("epsilon must be nonnegative");
    if (p.H <= 0) throw BadParams("H must be positive");
    if (p.bisect_fraction <= 0 || p.bisect_fraction > 0.5)
        throw BadParams("bisect_fraction must lie in (0, 1/2]");
    if (p.samples_per_cube < 100) throw BadParams("need at least 100 samples per cube");
    GridLayout g;
    g.n = Q.n_vars();
    if (g.n < 2 || g.n > 3) throw UnsupportedDimension();
    double fine = std::pow(static_cast<double>(p.N), 1.0 + p.epsilon);
    if (fine > 10000.0) throw BadParams("cube grid exceeds 10^4 cells per axis");
    g.K = static_cast<long>(std::ceil(fine - 1e-9));
    g.side = 1.0 / fine;
    g.L = g.K * g.side;
    return g;
}

CubeFractions mc_fractions(const DoubleEval& ev, const double* lo, double side,
                           long samples, double bisect_fraction, std::uint64_t seed) {
    std::uint64_t st = seed;
    long pos = 0;
    double x[4];
    for (long s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < ev.n; ++i) {
            st = mix64(st);
            x[i] = lo[i] + side * u01(st);
        }
        if (ev.sign_at(x) > 0) ++pos;
    }
    CubeFractions f;
    f.frac_pos = static_cast<double>(pos) / static_cast<double>(samples);
    f.frac_neg = 1.0 - f.frac_pos;
    f.radius = 1.96 * std::sqrt(0.25 / static_cast<double>(samples));
    f.bisected = std::min(f.frac_pos, f.frac_neg) >= bisect_fraction;
    return f;
}

void cube_corner(long long id, const GridLayout& g, double* lo) {
    long long rest = id;
    for (std::size_t i = g.n; i-- > 0;) {
        lo[i] = static_cast<double>(rest % g.K) * g.side;
        rest /= g.K;
    }
}

bool clip_to_box(const double* b, const double* d, std::size_t n, double L,
                 double& t0, double& t1) {
    t0 = -std::numeric_limits<double>::max();
    t1 = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] == 0.0) {
            if (b[i] < 0.0 || b[i] > L) return false;
            continue;
        }
        double a = (0.0 - b[i]) / d[i];
        double c = (L - b[i]) / d[i];
        if (a > c) std::swap(a, c);
        t0 = std::max(t0, a);
        t1 = std::min(t1, c);
    }
    return t0 <= t1;
}

// voxel walk: distinct cells of the side-s grid met by b + t*d, t in [t0,t1]
void traverse(const double* b, const double* d, std::size_t n, double side, long K,
              double t0, double t1, std::vector<long long>& out) {
    long ix[3];
    double tmax[3], tdel[3];
    int step[3];
    const double inf = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < n; ++i) {
        double xi = b[i] + t0 * d[i];
        long c = static_cast<long>(std::floor(xi / side));
        c = std::max(0L, std::min(K - 1, c));
        ix[i] = c;
        if (d[i] > 0) {
            step[i] = 1;
            tmax[i] = ((c + 1) * side - b[i]) / d[i];
            tdel[i] = side / d[i];
        } else if (d[i] < 0) {
            step[i] = -1;
            tmax[i] = (c * side - b[i]) / d[i];
            tdel[i] = -side / d[i];
        } else {
            step[i] = 0;
            tmax[i] = inf;
            tdel[i] = inf;
        }
    }
    while (true) {
        long long flat = 0;
        for (std::size_t i = 0; i < n; ++i) flat = flat * K + ix[i];
        out.push_back(flat);
        std::size_t ax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (tmax[i] < tmax[ax]) ax = i;
        if (tmax[ax] > t1) break;
        ix[ax] += step[ax];
        if (ix[ax] < 0 || ix[ax] >= K) break;
        tmax[ax] += tdel[ax];
    }
}

std::vector<std::vector<double>> ortho_basis(const std::vector<double>& v) {
    std::size_t n = v.size();
    double nv = 0;
    for (double x : v) nv += x * x;
    nv = std::sqrt(nv);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = v[i] / nv;

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double xa = std::abs(u[a]), xb = std::abs(u[b]);
        return xa < xb || (xa == xb && a < b);
    });

    std::vector<std::vector<double>> basis;
    for (std::size_t axis : order) {
        if (basis.size() + 1 == n) break;
        std::vector<double> w(n, 0.0);
        w[axis] = 1.0;
        double pu = u[axis];
        for (std::size_t i = 0; i < n; ++i) w[i] -= pu * u[i];
        for (const auto& bvec : basis) {
            double pb = 0;
            for (std::size_t i = 0; i < n; ++i) pb += w[i] * bvec[i];
            for (std::size_t i = 0; i < n; ++i) w[i] -= pb * bvec[i];
        }
        double nw = 0;
        for (double x : w) nw += x * x;
        nw = std::sqrt(nw);
        if (nw < 1e-9) continue;
        for (auto& x : w) x /= nw;
        basis.push_back(std::move(w));
    }
    if (basis.size() + 1 != n) throw ZeroDirection();
    return basis;
}

struct LineTrace {
    std::vector<double> base;
    std::vector<long long> ids;
};

// all candidate lines of one direction with the cubes each one meets
std::vector<LineTrace> collect_lines(const GridLayout& g, const ScanParams& p,
                                     const Direction& v) {
    std::size_t n = g.n;
    std::vector<double> vd(n);
    bool nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
        vd[i] = to_double(v.v[i]);
        if (v.v[i] != 0) nonzero = true;
    }
    if (!nonzero) throw ZeroDirection();
    if (v.dim() != n) throw DimensionMismatch();
    double nv = 0;
    for (double x : vd) nv += x * x;
    nv = std::sqrt(nv);
    for (auto& x : vd) x /= nv;

    auto basis = ortho_basis(vd);
    long M = static_cast<long>(std::ceil(g.K * std::sqrt(static_cast<double>(n)) / 2.0)) + 1;
    long per_axis = 2 * M + 1;
    long long total = 1;
    for (std::size_t j = 0; j + 1 < n; ++j) total *= per_axis;
    if (total > p.max_lines_per_direction)
        throw BadParams("base grid larger than max_lines_per_direction");
    if (total * (g.K + 2) * static_cast<long long>(n) > 50000000)
        throw BudgetExceeded("direction traversal over budget");

    std::vector<LineTrace> lines;
    lines.reserve(static_cast<std::size_t>(total));
    std::vector<long> c(n - 1, -M);
    while (true) {
        LineTrace lt;
        lt.base.assign(n, g.L / 2.0);
        for (std::size_t j = 0; j + 1 < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                lt.base[i] += static_cast<double>(c[j]) * g.side * basis[j][i];
        double t0, t1;
        if (clip_to_box(lt.base.data(), vd.data(), n, g.L, t0, t1))
            traverse(lt.base.data(), vd.data(), n, g.side, g.K, t0, t1, lt.ids);
        lines.push_back(std::move(lt));
        std::size_t axis = 0;
        while (axis + 1 < n && ++c[axis] > M) c[axis++] = -M;
        if (axis + 1 == n) break;
    }
    return lines;
}

DirectionRow run_direction(const DoubleEval& ev, const GridLayout& g, const ScanParams& p,
                           const Direction& v, Exec exec,
                           std::unordered_map<long long, bool>& memo) {
    auto lines = collect_lines(g, p, v);

    std::vector<long long> unknown;
    for (const auto& lt : lines)
        for (long long id : lt.ids)
            if (!memo.count(id)) unknown.push_back(id);
    std::sort(unknown.begin(), unknown.end());
    unknown.erase(std::unique(unknown.begin(), unknown.end()), unknown.end());

    std::vector<std::uint8_t> verdict(unknown.size());
    auto decide = [&](std::size_t i) {
        double lo[3];
        cube_corner(unknown[i], g, lo);
        verdict[i] = mc_fractions(ev, lo, g.side, p.samples_per_cube, p.bisect_fraction,
                                  derive_seed(p.seed, static_cast<std::uint64_t>(unknown[i])))
                         .bisected
                         ? 1
                         : 0;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (long long i = 0; i < static_cast<long long>(unknown.size()); ++i)
            decide(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < unknown.size(); ++i) decide(i);
    }
    for (std::size_t i = 0; i < unknown.size(); ++i) memo[unknown[i]] = verdict[i] != 0;

    DirectionRow row;
    row.v = v;
    for (const auto& lt : lines) {
        long cnt = 0;
        for (long long id : lt.ids)
            if (memo[id]) ++cnt;
        if (cnt > row.best_count) {
            row.best_count = cnt;
            row.best_base = lt.base;
        }
    }
    double threshold = std::pow(static_cast<double>(p.N), 1.0 + p.epsilon) / p.H;
    row.singular = static_cast<double>(row.best_count) >= threshold;
    row.certified_nonsingular =
        static_cast<double>(row.best_count) <
        threshold / std::pow(3.0, static_cast<double>(g.n));
    return row;
}

} // namespace

CubeFractions is_bisected_cube(const MultiPoly& Q, const std::vector<double>& lo,
                               double side, long samples, double bisect_fraction,
                               std::uint64_t seed) {
    if (Q.is_zero()) throw ZeroPolynomial();
    if (lo.size() != Q.n_vars()) throw DimensionMismatch();
    if (Q.n_vars() > 4) throw UnsupportedDimension();
    if (samples < 100) throw BadParams("need at least 100 samples");
    if (side <= 0) throw BadParams("cube side must be positive");
    if (bisect_fraction <= 0 || bisect_fraction > 0.5)
        throw BadParams("bisect_fraction must lie in (0, 1/2]");
    DoubleEval ev(Q);
    return mc_fractions(ev, lo.data(), side, samples, bisect_fraction, seed);
}

DirectionRow singular_direction_test(const MultiPoly& Q, const ScanParams& params,
                                     const Direction& v, Exec exec) {
    GridLayout g = validate(Q, params);
    DoubleEval ev(Q);
    std::unordered_map<long long, bool> memo;
    return run_direction(ev, g, params, v, exec, memo);
}

ScanReport singular_scan(const MultiPoly& Q, const ScanParams& params, Exec exec,
                         const std::vector<RatVec>* reference_normals) {
    GridLayout g = validate(Q, params);
    DoubleEval ev(Q);
    ScanReport rep;
    rep.N = params.N;
    rep.epsilon = params.epsilon;
    rep.H = params.H;
    rep.bisect_fraction = params.bisect_fraction;
    rep.cubes_per_axis = g.K;
    double fine = std::pow(static_cast<double>(params.N), 1.0 + params.epsilon);
    rep.threshold = fine / params.H;
    rep.certified_threshold = rep.threshold / std::pow(3.0, static_cast<double>(g.n));
    rep.degree_warning = Q.degree() > params.N;

    auto dirs = direction_sample(g.n, params.directions, params.seed);
    std::unordered_map<long long, bool> memo;
    for (const auto& v : dirs) {
        DirectionRow row = run_direction(ev, g, params, v, exec, memo);
        if (reference_normals)
            row.formula = crossing_formula(*reference_normals, v, fine);
        if (row.singular) ++rep.singular_count;
        rep.rows.push_back(std::move(row));
    }
    rep.sampled_directions = static_cast<long>(dirs.size());
    return rep;
}

double crossing_formula(const std::vector<RatVec>& normals, const Direction& v,
                        double cap) {
    if (cap <= 0) throw BadParams("cap must be positive");
    std::size_t n = v.dim();
    double nv = 0;
    std::vector<double> vd(n);
    for (std::size_t i = 0; i < n; ++i) {
        vd[i] = to_double(v.v[i]);
        nv += vd[i] * vd[i];
    }
    nv = std::sqrt(nv);
    if (nv == 0) throw ZeroDirection();
    double sum = 0;
    for (const auto& a : normals) {
        if (a.size() != n) throw DimensionMismatch();
        double na = 0, dp = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double ai = to_double(a[i]);
            na += ai * ai;
            dp += ai * vd[i];
        }
        na = std::sqrt(na);
        if (na == 0) throw ZeroDirection();
        double cosv = std::min(1.0, std::abs(dp) / (na * nv));
        double theta = std::acos(cosv); // angle(v, normal) in [0, pi/2]
        double gap = std::max(std::acos(0.0) - theta, 1.0 / cap);
        sum += std::min(1.0 / gap, cap);
    }
    return sum;
}

std::vector<Direction> direction_sample(std::size_t n, long count, std::uint64_t seed) {
    if (n < 2) throw UnsupportedDimension();
    if (count < 1) throw BadParams("direction count must be positive");
    std::size_t k = n - 1;
    long K = std::max<long>(
        1, static_cast<long>(std::ceil(std::pow(static_cast<double>(count),
                                                1.0 / static_cast<double>(k)))));
    std::uint64_t state = derive_seed(seed, 0x44495253ull); // "DIRS"
    std::vector<long> jit(k);
    for (std::size_t j = 0; j < k; ++j) {
        state = mix64(state);
        jit[j] = static_cast<long>(state % 129) - 64;
    }
    std::vector<Direction> out;
    std::vector<long> idx(k, 0);
    while (true) {
        RatVec y(k);
        for (std::size_t j = 0; j < k; ++j)
            y[j] = rat((2 * idx[j] + 1 - K) * 256 + jit[j], 256 * K);
        if (dot(y, y) <= 1) {
            RatVec ray(n);
            for (std::size_t j = 0; j < k; ++j) ray[j] = 2 * y[j];
            ray[k] = 1 - dot(y, y);
            bool zero = true;
            for (const auto& cc : ray)
                if (cc != 0) zero = false;
            if (!zero) out.push_back(canonical_direction(ray));
        }
        std::size_t axis = 0;
        while (axis < k && ++idx[axis] >= K) idx[axis++] = 0;
        if (axis == k) break;
    }
    if (out.empty()) throw EmptyDirections();
    return out;
}

HairbrushReport hairbrush_direction_count(const MultiPoly& Q, long N, int D, double c,
                                          std::uint64_t seed, Exec exec) {
    if (Q.n_vars() != 3) throw UnsupportedDimension();
    if (Q.is_zero()) throw ZeroPolynomial();
    if (N < 4 || N > 64) throw BadParams("N out of range [4, 64]");
    if (c <= 0) throw BadParams("threshold factor must be positive");
    if (D < 1 || Q.degree() > D) throw BadParams("degree bound below deg Q");

    std::vector<std::uint8_t> mask = zero_cells(sign_field(Q, N, exec));

    // spherical Fibonacci candidates on the upper hemisphere, thinned
    // greedily to pairwise distance >= 1/N
    long C = 8 * N * N;
    std::uint64_t st = derive_seed(seed, 0x48414952ull); // "HAIR"
    st = mix64(st);
    double phase = 2.0 * std::acos(-1.0) * u01(st);
    double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    double twopi = 2.0 * std::acos(-1.0);
    std::vector<std::array<double, 3>> kept;
    double minsep2 = 1.0 / (static_cast<double>(N) * static_cast<double>(N));
    for (long i = 0; i < C; ++i) {
        double z = (static_cast<double>(i) + 0.5) / static_cast<double>(C);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double a = std::fmod(static_cast<double>(i) / golden, 1.0) * twopi + phase;
        std::array<double, 3> v{r * std::cos(a), r * std::sin(a), z};
        bool ok = true;
        for (const auto& u : kept) {
            double dx = v[0] - u[0], dy = v[1] - u[1], dz = v[2] - u[2];
            if (dx * dx + dy * dy + dz * dz < minsep2) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(v);
    }

    double side = 1.0 / static_cast<double>(N);
    long M = static_cast<long>(std::ceil(std::sqrt(3.0) * N / 2.0)) + 1;
    double need = c * static_cast<double>(N);

    std::vector<std::uint8_t> qualifies(kept.size(), 0);
    auto run_dir = [&](std::size_t di) {
        std::vector<double> vd{kept[di][0], kept[di][1], kept[di][2]};
        auto basis = ortho_basis(vd);
        std::vector<long long> ids;
        for (long a1 = -M; a1 <= M && !qualifies[di]; ++a1)
            for (long a2 = -M; a2 <= M && !qualifies[di]; ++a2) {
                double base[3];
                for (int i = 0; i < 3; ++i)
                    base[i] = 0.5 + a1 * side * basis[0][i] + a2 * side * basis[1][i];
                double t0, t1;
                if (!clip_to_box(base, vd.data(), 3, 1.0, t0, t1)) continue;
                ids.clear();
                traverse(base, vd.data(), 3, side, N, t0, t1, ids);
                long cnt = 0;
                for (long long id : ids)
                    if (mask[static_cast<std::size_t>(id)]) ++cnt;
                if (static_cast<double>(cnt) >= need) qualifies[di] = 1;
            }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (long long di = 0; di < static_cast<long long>(kept.size()); ++di)
            run_dir(static_cast<std::size_t>(di));
    } else {
        for (std::size_t di = 0; di < kept.size(); ++di) run_dir(di);
    }

    HairbrushReport rep;
    rep.N = N;
    rep.D = D;
    rep.c = c;
    rep.directions_tested = static_cast<long>(kept.size());
    for (auto q : qualifies) rep.qualifying += q;
    double lnN = std::log(static_cast<double>(N));
    rep.bound = 50.0 * static_cast<double>(D) * static_cast<double>(D) *
                static_cast<double>(N) * lnN * lnN;
    rep.within_bound = static_cast<double>(rep.qualifying) <= rep.bound;
    return rep;
}

} // namespace inclab
