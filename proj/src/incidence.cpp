#include "inclab/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace inclab {

IncidenceReport count_incidences(const Config& cfg, Exec exec, bool prefilter) {
    IncidenceReport rep;
    rep.per_line.assign(cfg.lines.size(), 0);
    if (cfg.lines.empty() || cfg.points.empty()) return rep;

    std::size_t n = cfg.n ? cfg.n : cfg.points.front().size();

    // flattened double mirrors for the prefilter
    std::vector<double> pd;
    std::vector<double> bd, dd;
    std::vector<double> dnorm(cfg.lines.size());
    if (prefilter) {
        pd.reserve(cfg.points.size() * n);
        for (const auto& p : cfg.points)
            for (const auto& c : p) pd.push_back(c.get_d());
        bd.reserve(cfg.lines.size() * n);
        dd.reserve(cfg.lines.size() * n);
        for (std::size_t li = 0; li < cfg.lines.size(); ++li) {
            double nn = 0;
            for (std::size_t i = 0; i < n; ++i) {
                bd.push_back(cfg.lines[li].base[i].get_d());
                double di = cfg.lines[li].dir.v[i].get_d();
                dd.push_back(di);
                nn += di * di;
            }
            dnorm[li] = nn;
        }
    }

    auto line_count = [&](std::size_t li) -> long {
        const Line& l = cfg.lines[li];
        long cnt = 0;
        for (std::size_t pi = 0; pi < cfg.points.size(); ++pi) {
            if (prefilter) {
                // residual of the double projection; true incidences are
                // exact zeros, so anything beyond rounding noise is out
                const double* p = &pd[pi * n];
                const double* b = &bd[li * n];
                const double* d = &dd[li * n];
                double t = 0, rr = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    double ri = p[i] - b[i];
                    t += ri * d[i];
                    rr += ri * ri;
                }
                t /= dnorm[li];
                double res = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    double ri = (p[i] - b[i]) - t * d[i];
                    res += ri * ri;
                }
                if (res > 1e-12 * (1.0 + rr)) continue;
            }
            if (point_on_line(cfg.points[pi], l)) ++cnt;
        }
        return cnt;
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long li = 0; li < static_cast<long long>(cfg.lines.size()); ++li)
            rep.per_line[static_cast<std::size_t>(li)] = line_count(static_cast<std::size_t>(li));
    } else {
        for (std::size_t li = 0; li < cfg.lines.size(); ++li) rep.per_line[li] = line_count(li);
    }

    rep.min_per_line = rep.per_line.front();
    rep.max_per_line = rep.per_line.front();
    for (long c : rep.per_line) {
        rep.total += c;
        rep.min_per_line = std::min(rep.min_per_line, c);
        rep.max_per_line = std::max(rep.max_per_line, c);
    }
    return rep;
}

double ray_distance(const RatVec& u, const RatVec& v) {
    Rational uv = dot(u, v);
    Rational c2 = uv * uv / (dot(u, u) * dot(v, v));
    double cosv = std::sqrt(c2.get_d());
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * cosv));
}

double ray_distance(const IntVec& u, const IntVec& v) {
    Int uv = dot(u, v);
    Rational c2 = Rational(uv * uv) / Rational(dot(u, u) * dot(v, v));
    double cosv = std::sqrt(c2.get_d());
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * cosv));
}

namespace {

double ray_distance_mixed(const RatVec& p, const IntVec& v, const Rational& pp) {
    Rational uv = dot(p, v);
    Rational c2 = uv * uv / (pp * Rational(dot(v, v)));
    double cosv = std::sqrt(c2.get_d());
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * cosv));
}

struct ProbeSet {
    std::vector<RatVec> rays;
    double mesh = 0;
    std::string label;
};

ProbeSet make_probes(std::size_t n, const Region& region, long long probes, std::uint64_t seed) {
    if (n < 2) throw DimensionMismatch();
    ProbeSet ps;
    std::size_t k = n - 1;
    long K = std::max<long>(2, static_cast<long>(std::ceil(
                                   std::pow(static_cast<double>(probes), 1.0 / static_cast<double>(k)))));
    std::uint64_t state = derive_seed(seed, 0x50524f42ull); // "PROB"

    if (region.full_sphere) {
        // midpoint lattice on [-1,1]^k jittered by <= delta/4, kept inside
        // |y| <= 1 + 2/K, lifted to rational rays 2y,(1-|y|^2); mod-sign
        // this covers every direction
        double delta = 2.0 / static_cast<double>(K);
        std::vector<Rational> jit(k);
        for (std::size_t j = 0; j < k; ++j) {
            state = mix64(state);
            jit[j] = rat(static_cast<long>(state % 513) - 256, 1024 * 2 * K);
        }
        Rational limit = (rat(K + 2, K)) * (rat(K + 2, K));
        std::vector<long> idx(k, 0);
        while (true) {
            RatVec y(k);
            for (std::size_t j = 0; j < k; ++j)
                y[j] = rat(2 * idx[j] + 1 - K, K) + jit[j];
            if (dot(y, y) <= limit) {
                RatVec ray(n);
                Rational yy = dot(y, y);
                for (std::size_t j = 0; j < k; ++j) ray[j] = 2 * y[j];
                ray[k] = 1 - yy;
                bool zero = true;
                for (const auto& c : ray)
                    if (c != 0) zero = false;
                if (!zero) ps.rays.push_back(std::move(ray));
            }
            std::size_t axis = 0;
            while (axis < k && ++idx[axis] >= K) idx[axis++] = 0;
            if (axis == k) break;
        }
        ps.mesh = 2.0 * delta * std::sqrt(static_cast<double>(k));
        ps.label = "sphere";
    } else {
        if (region.slope_box.size() != k) throw BadParams("slope box has wrong dimension");
        double diag2 = 0;
        std::vector<Rational> lo(k), step(k), jit(k);
        for (std::size_t j = 0; j < k; ++j) {
            lo[j] = region.slope_box[j].first;
            Rational width = region.slope_box[j].second - region.slope_box[j].first;
            if (width < 0) throw BadParams("slope interval reversed");
            step[j] = width / Rational(K);
            state = mix64(state);
            jit[j] = step[j] * rat(static_cast<long>(state % 513) - 256, 2048);
            double s = to_double(step[j]);
            diag2 += s * s;
        }
        std::vector<long> idx(k, 0);
        while (true) {
            RatVec ray(n);
            ray[0] = 1;
            for (std::size_t j = 0; j < k; ++j)
                ray[j + 1] = lo[j] + step[j] * Rational(2 * idx[j] + 1) / 2 + jit[j];
            ps.rays.push_back(std::move(ray));
            std::size_t axis = 0;
            while (axis < k && ++idx[axis] >= K) idx[axis++] = 0;
            if (axis == k) break;
        }
        ps.mesh = std::sqrt(diag2);
        std::ostringstream lbl;
        lbl << "slopes:";
        for (std::size_t j = 0; j < k; ++j)
            lbl << '[' << format_rational(region.slope_box[j].first) << ','
                << format_rational(region.slope_box[j].second) << ']';
        ps.label = lbl.str();
    }
    return ps;
}

} // namespace

DensityReport direction_density(const std::vector<Direction>& dirs, double epsilon,
                                const Region& region, long long probes,
                                std::uint64_t seed, Exec exec) {
    if (dirs.empty()) throw EmptyDirections();
    if (epsilon <= 0) throw BadParams("epsilon must be positive");
    std::size_t n = dirs.front().dim();
    for (const auto& d : dirs)
        if (d.dim() != n) throw DimensionMismatch();

    ProbeSet ps = make_probes(n, region, probes, seed);
    if (ps.mesh > epsilon / 4.0)
        throw BadParams("probe mesh coarser than epsilon/4; raise the probe count");

    std::vector<double> gap(ps.rays.size());
    auto probe_gap = [&](std::size_t pi) {
        const RatVec& p = ps.rays[pi];
        Rational pp = dot(p, p);
        double best = 2.0;
        for (const auto& d : dirs) best = std::min(best, ray_distance_mixed(p, d.v, pp));
        return best;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (long long pi = 0; pi < static_cast<long long>(ps.rays.size()); ++pi)
            gap[static_cast<std::size_t>(pi)] = probe_gap(static_cast<std::size_t>(pi));
    } else {
        for (std::size_t pi = 0; pi < ps.rays.size(); ++pi) gap[pi] = probe_gap(pi);
    }

    DensityReport rep;
    rep.epsilon = epsilon;
    rep.probes = static_cast<long long>(ps.rays.size());
    rep.probe_mesh = ps.mesh;
    rep.region = ps.label;
    rep.max_gap = 0;
    for (double g : gap) rep.max_gap = std::max(rep.max_gap, g);
    rep.pass = rep.max_gap <= epsilon;
    return rep;
}

SeparationReport direction_separation(const std::vector<Direction>& dirs, double epsilon) {
    SeparationReport rep;
    rep.min_distance = 2.0;
    rep.separated = true;
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
            double d = ray_distance(dirs[i].v, dirs[j].v);
            if (d < rep.min_distance) {
                rep.min_distance = d;
                rep.witness = {i, j};
            }
        }
    if (dirs.size() >= 2) rep.separated = rep.min_distance >= epsilon;
    return rep;
}

namespace {

// reduced row echelon form over Q; rows are returned normalized (leading 1)
// so a subspace has exactly one representation
std::vector<RatVec> rref(std::vector<RatVec> rows) {
    std::vector<RatVec> out;
    if (rows.empty()) return out;
    std::size_t n = rows.front().size();
    std::size_t lead = 0;
    for (std::size_t r = 0; r < rows.size() && lead < n;) {
        std::size_t pivot = r;
        while (pivot < rows.size() && rows[pivot][lead] == 0) ++pivot;
        if (pivot == rows.size()) {
            ++lead;
            continue;
        }
        std::swap(rows[r], rows[pivot]);
        Rational inv = 1 / rows[r][lead];
        for (auto& x : rows[r]) x *= inv;
        for (std::size_t q = 0; q < rows.size(); ++q) {
            if (q == r || rows[q][lead] == 0) continue;
            Rational f = rows[q][lead];
            for (std::size_t c = 0; c < n; ++c) rows[q][c] -= f * rows[r][c];
        }
        ++r;
        ++lead;
    }
    for (auto& row : rows) {
        bool zero = true;
        for (const auto& x : row)
            if (x != 0) zero = false;
        if (!zero) out.push_back(std::move(row));
    }
    return out;
}

bool in_rowspace(const RatVec& v, const std::vector<RatVec>& basis) {
    RatVec w = v;
    std::size_t n = w.size();
    for (const auto& row : basis) {
        std::size_t lead = 0;
        while (lead < n && row[lead] == 0) ++lead;
        if (lead == n) continue;
        if (w[lead] == 0) continue;
        Rational f = w[lead] / row[lead];
        for (std::size_t c = 0; c < n; ++c) w[c] -= f * row[c];
    }
    for (const auto& x : w)
        if (x != 0) return false;
    return true;
}

// foot of the perpendicular from the origin onto base + rowspace(span)
RatVec flat_foot(const RatVec& base, const std::vector<RatVec>& span) {
    std::size_t m = span.size(), n = base.size();
    if (m == 0) return base;
    // solve G c = rhs with G the Gram matrix of the span rows
    std::vector<RatVec> G(m, RatVec(m));
    RatVec rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        rhs[i] = dot(base, span[i]);
        for (std::size_t j = 0; j < m; ++j) G[i][j] = dot(span[i], span[j]);
    }
    // gaussian elimination, exact
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        while (piv < m && G[piv][col] == 0) ++piv;
        if (piv == m) throw BadRank("degenerate span in flat_foot");
        std::swap(G[piv], G[col]);
        std::swap(rhs[piv], rhs[col]);
        Rational inv = 1 / G[col][col];
        for (auto& x : G[col]) x *= inv;
        rhs[col] *= inv;
        for (std::size_t row = 0; row < m; ++row) {
            if (row == col || G[row][col] == 0) continue;
            Rational f = G[row][col];
            for (std::size_t c = 0; c < m; ++c) G[row][c] -= f * G[col][c];
            rhs[row] -= f * rhs[col];
        }
    }
    RatVec foot = base;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < n; ++c) foot[c] -= rhs[i] * span[i][c];
    return foot;
}

std::string flat_key(const RatVec& foot, const std::vector<RatVec>& span) {
    std::string key = format_rational_csv(foot);
    for (const auto& row : span) {
        key += '|';
        key += format_rational_csv(row);
    }
    return key;
}

bool line_in_flat(const Line& l, const RatVec& foot, const std::vector<RatVec>& span) {
    RatVec d(l.dim());
    for (std::size_t i = 0; i < l.dim(); ++i) d[i] = Rational(l.dir.v[i]);
    if (!in_rowspace(d, span)) return false;
    RatVec rel(l.dim());
    for (std::size_t i = 0; i < l.dim(); ++i) rel[i] = l.base[i] - foot[i];
    return in_rowspace(rel, span);
}

std::vector<RatVec> line_span_vectors(const std::vector<Line>& lines,
                                      const std::vector<std::size_t>& tuple) {
    std::vector<RatVec> vecs;
    std::size_t n = lines[tuple[0]].dim();
    for (std::size_t t : tuple) {
        RatVec d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = Rational(lines[t].dir.v[i]);
        vecs.push_back(std::move(d));
        if (t != tuple[0]) {
            RatVec rel(n);
            for (std::size_t i = 0; i < n; ++i)
                rel[i] = lines[t].base[i] - lines[tuple[0]].base[i];
            vecs.push_back(std::move(rel));
        }
    }
    return vecs;
}

} // namespace

FlatReport max_rflat_concentration(const std::vector<Line>& lines, int r,
                                   long long budget, std::uint64_t seed) {
    if (lines.empty()) throw BadParams("no lines");
    std::size_t n = lines.front().dim();
    for (const auto& l : lines)
        if (l.dim() != n) throw DimensionMismatch();
    if (r < 2 || static_cast<std::size_t>(r) >= n)
        throw BadRank("need 2 <= r <= n-1");

    FlatReport rep;
    rep.r = r;
    rep.exact = true;

    auto consider = [&](const RatVec& foot, const std::vector<RatVec>& span) {
        long cnt = 0;
        for (const auto& l : lines)
            if (line_in_flat(l, foot, span)) ++cnt;
        if (cnt > rep.max_count) {
            rep.max_count = cnt;
            rep.witness_base = foot;
            rep.witness_span = span;
        }
    };

    std::set<std::string> visited;
    auto consider_tuple = [&](const std::vector<std::size_t>& tuple) {
        auto span = rref(line_span_vectors(lines, tuple));
        if (span.size() > static_cast<std::size_t>(r)) return;
        RatVec foot = flat_foot(lines[tuple[0]].base, span);
        std::string key = flat_key(foot, span);
        if (!visited.insert(key).second) return;
        consider(foot, span);
    };

    std::size_t L = lines.size();

    if (r == 2) {
        if (static_cast<long long>(L) * static_cast<long long>(L - 1) / 2 > budget)
            throw BudgetExceeded("pair hashing over budget");
        // hash the canonical plane of every coplanar pair; a flat holding m
        // lines is rediscovered by all of its pairs, the per-key set sizes
        // recover m directly
        std::map<std::string, std::set<std::size_t>> planes;
        std::map<std::string, std::pair<RatVec, std::vector<RatVec>>> geo;
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = i + 1; j < L; ++j) {
                auto span = rref(line_span_vectors(lines, {i, j}));
                if (span.size() > 2) continue; // skew pair
                RatVec foot = flat_foot(lines[i].base, span);
                std::string key = flat_key(foot, span);
                auto& bucket = planes[key];
                bucket.insert(i);
                bucket.insert(j);
                geo.emplace(key, std::make_pair(foot, span));
            }
        for (const auto& [key, bucket] : planes) {
            if (static_cast<long>(bucket.size()) > rep.max_count) {
                rep.max_count = static_cast<long>(bucket.size());
                rep.witness_base = geo[key].first;
                rep.witness_span = geo[key].second;
            }
        }
        if (rep.max_count == 0) {
            // no coplanar pair; any single line still sits in some plane
            std::vector<std::size_t> solo{0};
            auto span = rref(line_span_vectors(lines, solo));
            for (std::size_t k = 0; k < n && span.size() < 2; ++k) {
                RatVec e(n, Rational(0));
                e[k] = 1;
                if (!in_rowspace(e, span)) {
                    span.push_back(e);
                    span = rref(span);
                }
            }
            RatVec foot = flat_foot(lines[0].base, span);
            rep.max_count = 1;
            rep.witness_base = foot;
            rep.witness_span = span;
        }
        return rep;
    }

    // r > 2: enumerate spanning tuples of size 2..r while the budget holds;
    // otherwise fall back to seeded sampling (certified lower bound).
    double work = 0;
    for (int s = 2; s <= r; ++s) {
        double tuples = 1;
        for (int t = 0; t < s; ++t) tuples *= static_cast<double>(L - t) / (t + 1);
        work += tuples * static_cast<double>(L);
    }
    if (work <= static_cast<double>(budget)) {
        for (int s = 2; s <= r; ++s) {
            std::vector<std::size_t> tuple(s);
            for (int t = 0; t < s; ++t) tuple[t] = t;
            if (L < static_cast<std::size_t>(s)) break;
            while (true) {
                consider_tuple(tuple);
                int axis = s - 1;
                while (axis >= 0 && tuple[axis] == L - static_cast<std::size_t>(s - axis)) --axis;
                if (axis < 0) break;
                ++tuple[axis];
                for (int t = axis + 1; t < s; ++t) tuple[t] = tuple[t - 1] + 1;
            }
        }
    } else {
        rep.exact = false;
        std::uint64_t state = derive_seed(seed, 0x464c4154ull); // "FLAT"
        long long draws = std::max<long long>(1, budget / std::max<std::size_t>(L, 1));
        for (long long d = 0; d < draws; ++d) {
            std::vector<std::size_t> tuple;
            std::set<std::size_t> used;
            while (tuple.size() < static_cast<std::size_t>(r)) {
                state = mix64(state);
                std::size_t pick = static_cast<std::size_t>(state % L);
                if (used.insert(pick).second) tuple.push_back(pick);
                if (used.size() == L) break;
            }
            if (tuple.size() >= 2) consider_tuple(tuple);
        }
    }

    if (rep.max_count == 0 && L > 0) rep.max_count = 1;
    return rep;
}

} // namespace inclab
