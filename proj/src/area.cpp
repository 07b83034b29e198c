#include "inclab/area.hpp"

#include <cmath>

namespace inclab {

std::vector<RatVec> orthogonal_complement(const Direction& v) {
    std::size_t n = v.dim();
    if (n < 2) throw DimensionMismatch();
    Rational vv(dot(v.v, v.v));
    std::vector<RatVec> basis;
    for (std::size_t k = 0; k < n && basis.size() + 1 < n; ++k) {
        RatVec w(n, Rational(0));
        w[k] = 1;
        Rational t = Rational(v.v[k]) / vv;
        for (std::size_t i = 0; i < n; ++i) w[i] -= t * Rational(v.v[i]);
        for (const auto& b : basis) {
            Rational s = dot(w, b) / dot(b, b);
            if (s == 0) continue;
            for (std::size_t i = 0; i < n; ++i) w[i] -= s * b[i];
        }
        bool zero = true;
        for (const auto& x : w)
            if (x != 0) zero = false;
        if (!zero) basis.push_back(std::move(w));
    }
    if (basis.size() + 1 != n) throw Error("orthogonal_complement: rank defect");
    return basis;
}

ClipInterval clip_to_unit_cube(const RatVec& base, const IntVec& dir) {
    ClipInterval out;
    bool first = true;
    Rational lo, hi;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (dir[i] == 0) {
            if (base[i] < 0 || base[i] > 1) return out; // parallel and outside
            continue;
        }
        Rational a = (Rational(0) - base[i]) / Rational(dir[i]);
        Rational b = (Rational(1) - base[i]) / Rational(dir[i]);
        if (a > b) std::swap(a, b);
        if (first) {
            lo = a;
            hi = b;
            first = false;
        } else {
            if (a > lo) lo = a;
            if (b < hi) hi = b;
        }
    }
    if (first || lo > hi) return out;
    out.empty = false;
    out.lo = lo;
    out.hi = hi;
    return out;
}

namespace {

struct FiberGrid {
    std::vector<RatVec> basis;     // orthogonal rational basis of v^perp
    std::vector<Rational> lo, step; // per-axis window start and spacing
    long F = 0;                     // fibers per axis
    double cell_measure = 0;        // prod step_j * |w_j|
};

// window from the projections of the cube corners onto each basis vector
FiberGrid make_window(const MultiPoly& Q, const Direction& v, long fibers) {
    if (Q.is_zero()) throw ZeroPolynomial("directed_area of zero polynomial");
    std::size_t n = Q.n_vars();
    if (v.dim() != n) throw DimensionMismatch();
    if (fibers < 16) throw BadParams("need at least 16 fibers per axis");

    FiberGrid g;
    g.basis = orthogonal_complement(v);
    g.F = fibers;
    g.cell_measure = 1.0;
    for (const auto& w : g.basis) {
        Rational ww = dot(w, w);
        Rational cmin, cmax;
        bool first = true;
        for (unsigned long corner = 0; corner < (1ul << n); ++corner) {
            Rational c = 0;
            for (std::size_t i = 0; i < n; ++i)
                if ((corner >> i) & 1) c += w[i];
            c /= ww;
            if (first || c < cmin) cmin = c;
            if (first || c > cmax) cmax = c;
            first = false;
        }
        Rational step = (cmax - cmin) / Rational(fibers);
        if (step == 0) step = rat(1, fibers); // degenerate window, give it width
        g.lo.push_back(cmin);
        g.step.push_back(step);
        g.cell_measure *= to_double(step) * std::sqrt(to_double(ww));
    }
    return g;
}

long sampled_crossings(const DoubleEval& ev, const std::vector<double>& base,
                       const std::vector<double>& dir, double t0, double t1, long samples) {
    double x[3];
    std::size_t n = ev.n;
    int prev = 0;
    long flips = 0;
    for (long k = 0; k < samples; ++k) {
        double t = t0 + (t1 - t0) * (static_cast<double>(k) + 0.5) / static_cast<double>(samples);
        for (std::size_t i = 0; i < n; ++i) x[i] = base[i] + t * dir[i];
        double val = ev.eval(x);
        int s = val > 0 ? 1 : (val < 0 ? -1 : 0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++flips;
        prev = s;
    }
    return flips;
}

AreaResult run_fibers(const MultiPoly& Q, const Direction& v, const FiberGrid& g,
                      AreaMode mode, long samples_per_fiber, Exec exec,
                      const RatVec* cyl_center, const Rational* cyl_R2) {
    std::size_t n = Q.n_vars();
    std::size_t axes = g.basis.size();
    long long total = 1;
    for (std::size_t j = 0; j < axes; ++j) total *= g.F;
    if (total > 50'000'000LL) throw BadParams("fiber budget exceeded");

    // cylinder test needs the center's coefficients in the fiber basis
    std::vector<Rational> gamma(axes, Rational(0));
    std::vector<Rational> ww(axes);
    for (std::size_t j = 0; j < axes; ++j) ww[j] = dot(g.basis[j], g.basis[j]);
    if (cyl_center)
        for (std::size_t j = 0; j < axes; ++j)
            gamma[j] = dot(*cyl_center, g.basis[j]) / ww[j];

    DoubleEval ev(Q);
    std::vector<double> dir_d = to_double(v.v);

    std::vector<long> counts(static_cast<std::size_t>(total), -1); // -1 = not counted

    auto fiber_count = [&](long long flat) -> long {
        std::vector<Rational> c(axes);
        long long rest = flat;
        for (std::size_t j = axes; j-- > 0;) {
            long k = static_cast<long>(rest % g.F);
            rest /= g.F;
            c[j] = g.lo[j] + g.step[j] * Rational(2 * k + 1) / 2;
        }
        if (cyl_center) {
            Rational d2 = 0;
            for (std::size_t j = 0; j < axes; ++j) {
                Rational dj = c[j] - gamma[j];
                d2 += dj * dj * ww[j];
            }
            if (d2 > *cyl_R2) return -1;
        }
        RatVec base(n, Rational(0));
        for (std::size_t j = 0; j < axes; ++j)
            for (std::size_t i = 0; i < n; ++i) base[i] += c[j] * g.basis[j][i];
        ClipInterval seg = clip_to_unit_cube(base, v.v);
        if (seg.empty || seg.lo == seg.hi) return -1;

        if (mode == AreaMode::exact_roots) {
            UniPoly p = restrict_to_line(Q, base, v.v);
            if (p.is_zero()) return -2; // fiber inside the zero set
            return count_real_roots(p, seg.lo, seg.hi);
        }
        return sampled_crossings(ev, to_double(base), dir_d,
                                 to_double(seg.lo), to_double(seg.hi), samples_per_fiber);
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long long flat = 0; flat < total; ++flat)
            counts[static_cast<std::size_t>(flat)] = fiber_count(flat);
    } else {
        for (long long flat = 0; flat < total; ++flat)
            counts[static_cast<std::size_t>(flat)] = fiber_count(flat);
    }

    AreaResult out;
    out.mode = mode;
    out.fibers_per_axis = g.F;
    out.total_fibers = total;
    out.samples_per_fiber = mode == AreaMode::sampled ? samples_per_fiber : 0;
    long long sum = 0;
    for (long cnt : counts) {
        if (cnt == -2) {
            ++out.contained_fibers;
            ++out.counted_fibers;
        } else if (cnt >= 0) {
            ++out.counted_fibers;
            sum += cnt;
        }
    }
    out.value = static_cast<double>(sum) * g.cell_measure;
    return out;
}

} // namespace

AreaResult directed_area(const MultiPoly& Q, const Direction& v, long fibers,
                         AreaMode mode, long samples_per_fiber, Exec exec) {
    FiberGrid g = make_window(Q, v, fibers);
    return run_fibers(Q, v, g, mode, samples_per_fiber, exec, nullptr, nullptr);
}

AreaResult cylinder_directed_area(const MultiPoly& Q, const Direction& axis,
                                  const RatVec& center, const Rational& R, long fibers,
                                  AreaMode mode, long samples_per_fiber, Exec exec) {
    if (center.size() != Q.n_vars()) throw DimensionMismatch();
    if (R <= 0) throw BadParams("cylinder radius must be positive");
    FiberGrid g = make_window(Q, axis, fibers);

    // shrink the window to the cylinder's bounding box in fiber coordinates,
    // overshooting the irrational half-width R/|w_j| by a dyadic hair
    Rational R2 = R * R;
    for (std::size_t j = 0; j < g.basis.size(); ++j) {
        Rational ww = dot(g.basis[j], g.basis[j]);
        double hw = to_double(R) / std::sqrt(to_double(ww));
        Rational half(static_cast<long>(std::ceil(hw * 1048576.0)) + 1, 1048576);
        half.canonicalize();
        Rational gamma = dot(center, g.basis[j]) / ww;
        g.lo[j] = gamma - half;
        g.step[j] = 2 * half / Rational(g.F);
        g.cell_measure = 1.0; // recomputed below
    }
    g.cell_measure = 1.0;
    for (std::size_t j = 0; j < g.basis.size(); ++j)
        g.cell_measure *= to_double(g.step[j]) *
                          std::sqrt(to_double(Rational(dot(g.basis[j], g.basis[j]))));

    return run_fibers(Q, axis, g, mode, samples_per_fiber, exec, &center, &R2);
}

} // namespace inclab
