#include "inclab/gridscan.hpp"

#include <array>
#include <cmath>
#include <numeric>

namespace inclab {

namespace {

void check_grid_dims(std::size_t n, long cells) {
    if (n < 1 || n > 3) throw UnsupportedDimension("grid kernels support n in {1,2,3}");
    if (cells < 1) throw BadParams("grid needs at least one cell");
    double total = std::pow(static_cast<double>(cells + 1), static_cast<double>(n));
    if (total > 2147483648.0) throw BadParams("grid resolution too fine");
}

} // namespace

std::size_t SignField::index(const std::vector<long>& idx) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < n; ++i) flat = flat * (cells + 1) + idx[i];
    return flat;
}

SignField sign_field(const MultiPoly& Q, long cells, Exec exec) {
    if (Q.is_zero()) throw ZeroPolynomial("sign_field of zero polynomial");
    std::size_t n = Q.n_vars();
    check_grid_dims(n, cells);

    SignField f;
    f.n = n;
    f.cells = cells;
    long C = cells + 1;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= C;
    f.sign.assign(total, 0);

    DoubleEval ev(Q);

    auto corner_sign = [&](std::size_t flat) -> std::int8_t {
        long idx[3] = {0, 0, 0};
        std::size_t rest = flat;
        for (std::size_t i = n; i-- > 0;) {
            idx[i] = static_cast<long>(rest % C);
            rest /= C;
        }
        double x[3];
        for (std::size_t i = 0; i < n; ++i)
            x[i] = static_cast<double>(idx[i]) / static_cast<double>(cells);
        double v = ev.eval(x);
        double bound = ev.eval_abs(x) * ev.tolerance_scale;
        if (v > bound) return 1;
        if (v < -bound) return -1;
        // too close to call in double: settle it exactly
        RatVec xr(n);
        for (std::size_t i = 0; i < n; ++i) xr[i] = rat(idx[i], cells);
        return static_cast<std::int8_t>(sgn(Q(xr)));
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long flat = 0; flat < static_cast<long long>(total); ++flat)
            f.sign[flat] = corner_sign(static_cast<std::size_t>(flat));
    } else {
        for (std::size_t flat = 0; flat < total; ++flat) f.sign[flat] = corner_sign(flat);
    }
    return f;
}

std::vector<std::uint8_t> zero_cells(const SignField& f) {
    long G = f.cells;
    long C = G + 1;
    std::size_t total = 1;
    for (std::size_t i = 0; i < f.n; ++i) total *= G;
    std::vector<std::uint8_t> zc(total, 0);

    long corners = 1 << f.n;
    std::vector<long> idx(f.n), corner(f.n);
    for (std::size_t cell = 0; cell < total; ++cell) {
        std::size_t rest = cell;
        for (std::size_t i = f.n; i-- > 0;) {
            idx[i] = static_cast<long>(rest % G);
            rest /= G;
        }
        bool any_nonpos = false, any_nonneg = false;
        for (long m = 0; m < corners; ++m) {
            std::size_t flat = 0;
            for (std::size_t i = 0; i < f.n; ++i)
                flat = flat * C + idx[i] + ((m >> i) & 1);
            std::int8_t s = f.sign[flat];
            if (s <= 0) any_nonpos = true;
            if (s >= 0) any_nonneg = true;
            if (any_nonpos && any_nonneg) break;
        }
        zc[cell] = (any_nonpos && any_nonneg) ? 1 : 0;
    }
    return zc;
}

VolumeEstimate neighborhood_volume(const MultiPoly& Q, double alpha, long resolution,
                                   DilationMetric metric, Exec exec) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw AlphaOutOfRange();
    if (resolution < 4) throw BadParams("resolution must give grid side <= alpha/4");
    long G = static_cast<long>(std::ceil(static_cast<double>(resolution) / alpha));
    check_grid_dims(Q.n_vars(), G);

    SignField f = sign_field(Q, G, exec);
    auto zc = zero_cells(f);

    double h = 1.0 / static_cast<double>(G);
    long r = static_cast<long>(std::ceil(alpha * static_cast<double>(G)));

    // dilation stencil in cell units
    std::vector<std::array<long, 3>> stencil;
    std::size_t n = Q.n_vars();
    std::vector<long> d(n, -r);
    while (true) {
        long norm2 = 0, cheb = 0;
        for (std::size_t i = 0; i < n; ++i) {
            norm2 += d[i] * d[i];
            cheb = std::max(cheb, std::abs(d[i]));
        }
        bool in = metric == DilationMetric::euclidean ? (norm2 <= r * r) : (cheb <= r);
        if (in) {
            std::array<long, 3> o{0, 0, 0};
            for (std::size_t i = 0; i < n; ++i) o[i] = d[i];
            stencil.push_back(o);
        }
        std::size_t axis = 0;
        while (axis < n && ++d[axis] > r) d[axis++] = -r;
        if (axis == n) break;
    }

    std::size_t total = zc.size();
    std::vector<std::uint8_t> marked(total, 0);
    std::vector<long> idx(n);
    long zero_count = 0;
    for (std::size_t cell = 0; cell < total; ++cell) {
        if (!zc[cell]) continue;
        ++zero_count;
        std::size_t rest = cell;
        for (std::size_t i = n; i-- > 0;) {
            idx[i] = static_cast<long>(rest % G);
            rest /= G;
        }
        for (const auto& o : stencil) {
            std::size_t flat = 0;
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                long j = idx[i] + o[i];
                if (j < 0 || j >= G) {
                    ok = false;
                    break;
                }
                flat = flat * G + j;
            }
            if (ok) marked[flat] = 1;
        }
    }

    long long hit = 0;
    for (std::uint8_t m : marked) hit += m;

    VolumeEstimate est;
    est.cells = G;
    est.grid_side = h;
    est.zero_cell_count = zero_count;
    est.value = static_cast<double>(hit) * std::pow(h, static_cast<double>(n));
    est.flags = {"SIGN_BLIND"};
    if (metric == DilationMetric::chebyshev) est.flags.push_back("CHEBYSHEV");
    return est;
}

namespace {

struct UnionFind {
    std::vector<std::int32_t> parent;
    explicit UnionFind(std::size_t k) : parent(k) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::int32_t find(std::int32_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

ComponentCount connected_components(const MultiPoly& Q, long resolution, Exec exec) {
    SignField f = sign_field(Q, resolution, exec);
    auto zc = zero_cells(f);
    std::size_t n = f.n;
    long G = f.cells;

    UnionFind uf(zc.size());
    std::vector<long> idx(n);
    long stride[3] = {0, 0, 0};
    {
        long s = 1;
        for (std::size_t i = n; i-- > 0;) {
            stride[i] = s;
            s *= G;
        }
    }
    for (std::size_t cell = 0; cell < zc.size(); ++cell) {
        if (!zc[cell]) continue;
        std::size_t rest = cell;
        for (std::size_t i = n; i-- > 0;) {
            idx[i] = static_cast<long>(rest % G);
            rest /= G;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (idx[i] + 1 >= G) continue;
            std::size_t nb = cell + stride[i];
            if (zc[nb]) uf.unite(static_cast<std::int32_t>(cell), static_cast<std::int32_t>(nb));
        }
    }

    ComponentCount out;
    for (std::size_t cell = 0; cell < zc.size(); ++cell) {
        if (!zc[cell]) continue;
        ++out.zero_cell_count;
        if (uf.find(static_cast<std::int32_t>(cell)) == static_cast<std::int32_t>(cell))
            ++out.count;
    }
    out.flags = {"SIGN_BLIND"};
    return out;
}

} // namespace inclab
