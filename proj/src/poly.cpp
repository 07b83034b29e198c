#include "inclab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace inclab {

void MultiPoly::add_term(const Expo& e, const Rational& c) {
    if (e.size() != n_) throw DimensionMismatch();
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        long d = 0;
        for (unsigned k : e) d += k;
        degree_ = std::max(degree_, d);
    } else {
        it->second += c;
        if (it->second == 0) {
            terms_.erase(it);
            recompute_degree();
        }
    }
}

void MultiPoly::recompute_degree() {
    degree_ = -1;
    for (const auto& [e, c] : terms_) {
        long d = 0;
        for (unsigned k : e) d += k;
        degree_ = std::max(degree_, d);
    }
}

Rational MultiPoly::operator()(const RatVec& x) const {
    if (x.size() != n_) throw DimensionMismatch();
    // Per-variable power cache; exponents are small, reuse is high.
    std::vector<std::vector<Rational>> pows(n_);
    for (std::size_t i = 0; i < n_; ++i) pows[i].push_back(1);
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < n_; ++i) {
            auto& pi = pows[i];
            while (pi.size() <= e[i]) pi.push_back(pi.back() * x[i]);
            t *= pi[e[i]];
        }
        acc += t;
    }
    return acc;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    if (n_ != o.n_) throw DimensionMismatch();
    MultiPoly out(n_);
    Expo e(n_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            for (std::size_t i = 0; i < n_; ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    if (n_ != o.n_) throw DimensionMismatch();
    MultiPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    if (n_ != o.n_) throw DimensionMismatch();
    MultiPoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, -c);
    return out;
}

MultiPoly MultiPoly::highest_part() const {
    if (is_zero()) throw ZeroPolynomial("highest_part of zero polynomial");
    MultiPoly out(n_);
    for (const auto& [e, c] : terms_) {
        long d = 0;
        for (unsigned k : e) d += k;
        if (d == degree_) out.add_term(e, c);
    }
    return out;
}

MultiPoly MultiPoly::constant(std::size_t n_vars, const Rational& c) {
    MultiPoly p(n_vars);
    p.add_term(Expo(n_vars, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(std::size_t n_vars, std::size_t i) {
    if (i >= n_vars) throw DimensionMismatch();
    MultiPoly p(n_vars);
    Expo e(n_vars, 0);
    e[i] = 1;
    p.add_term(e, 1);
    return p;
}

MultiPoly MultiPoly::axis_shift(std::size_t n_vars, std::size_t i, const Rational& shift) {
    MultiPoly p = variable(n_vars, i);
    p.add_term(Expo(n_vars, 0), -shift);
    return p;
}

const Rational& UniPoly::leading() const {
    if (c_.empty()) throw ZeroPolynomial("leading coefficient of zero polynomial");
    return c_.back();
}

void UniPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UniPoly::operator()(const Rational& t) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

UniPoly UniPoly::derivative() const {
    if (c_.size() <= 1) return UniPoly();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return UniPoly(std::move(d));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
    if (is_zero() || o.is_zero()) return UniPoly();
    std::vector<Rational> out(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
    return UniPoly(std::move(out));
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
    std::vector<Rational> out(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
    return UniPoly(std::move(out));
}

void UniPoly::scale(const Rational& s) {
    for (auto& c : c_) c *= s;
    trim();
}

UniPoly UniPoly::rem(const UniPoly& a, const UniPoly& b) {
    if (b.is_zero()) throw ZeroPolynomial("polynomial division by zero");
    std::vector<Rational> r = a.c_;
    long db = b.degree();
    while (static_cast<long>(r.size()) - 1 >= db) {
        Rational q = r.back() / b.c_.back();
        std::size_t shift = r.size() - b.c_.size();
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[shift + i] -= q * b.c_[i];
        while (!r.empty() && r.back() == 0) r.pop_back();
        if (r.empty()) break;
    }
    return UniPoly(std::move(r));
}

UniPoly UniPoly::gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) a.scale(1 / a.leading());
    return a;
}

UniPoly UniPoly::square_free_part() const {
    if (is_zero()) throw ZeroPolynomial("square_free_part of zero polynomial");
    if (degree() == 0) return *this;
    UniPoly g = gcd(*this, derivative());
    if (g.degree() == 0) return *this;
    // exact quotient this / g
    std::vector<Rational> q(c_.size() - g.coeffs().size() + 1, Rational(0));
    std::vector<Rational> r = c_;
    long dg = g.degree();
    while (static_cast<long>(r.size()) - 1 >= dg) {
        Rational lead = r.back() / g.coeffs().back();
        std::size_t shift = r.size() - g.coeffs().size();
        q[shift] = lead;
        for (std::size_t i = 0; i < g.coeffs().size(); ++i) r[shift + i] -= lead * g.coeffs()[i];
        while (!r.empty() && r.back() == 0) r.pop_back();
        if (r.empty()) break;
    }
    return UniPoly(std::move(q));
}

UniPoly UniPoly::deflate(const Rational& root) const {
    if (is_zero()) throw ZeroPolynomial("deflate of zero polynomial");
    // synthetic division by (t - root)
    std::vector<Rational> q(c_.size() - 1, Rational(0));
    Rational carry = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = c_[i] + carry * root;
    }
    if (carry != 0) throw BadParams("deflate: not a root");
    return UniPoly(std::move(q));
}

UniPoly restrict_to_line(const MultiPoly& Q, const RatVec& base, const IntVec& dir) {
    if (Q.n_vars() != base.size() || base.size() != dir.size()) throw DimensionMismatch();
    std::size_t n = Q.n_vars();
    // powers[i][e] = (base_i + t*dir_i)^e as a UniPoly, built on demand
    std::vector<std::vector<UniPoly>> powers(n);
    for (std::size_t i = 0; i < n; ++i) {
        powers[i].push_back(UniPoly({Rational(1)}));
        powers[i].push_back(UniPoly({base[i], Rational(dir[i])}));
    }
    UniPoly acc;
    for (const auto& [e, c] : Q.terms()) {
        UniPoly term({c});
        for (std::size_t i = 0; i < n; ++i) {
            auto& pi = powers[i];
            while (pi.size() <= e[i]) pi.push_back(pi.back() * pi[1]);
            term = term * pi[e[i]];
        }
        acc = acc + term;
    }
    return acc;
}

UniPoly restrict_to_line(const MultiPoly& Q, const Line& l) {
    return restrict_to_line(Q, l.base, l.dir.v);
}

namespace {

int sign_of(const Rational& q) { return sgn(q); }

// Sign-variation count of the Sturm chain at t.
long variations(const std::vector<UniPoly>& chain, const Rational& t) {
    long v = 0;
    int prev = 0;
    for (const auto& p : chain) {
        int s = p.is_zero() ? 0 : sign_of(p(t));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++v;
        prev = s;
    }
    return v;
}

std::vector<UniPoly> sturm_chain(const UniPoly& p) {
    std::vector<UniPoly> chain{p, p.derivative()};
    while (!chain.back().is_zero() && chain.back().degree() > 0) {
        UniPoly r = UniPoly::rem(chain[chain.size() - 2], chain.back());
        if (r.is_zero()) break;
        r.scale(Rational(-1));
        // positive rescale keeps signs while containing coefficient growth
        Rational lead = r.leading();
        if (lead < 0) lead = -lead;
        r.scale(1 / lead);
        chain.push_back(std::move(r));
    }
    return chain;
}

} // namespace

long count_real_roots(const UniPoly& p, const Rational& lo, const Rational& hi) {
    if (p.is_zero()) throw ZeroPolynomial("count_real_roots on zero polynomial");
    if (lo > hi) throw BadParams("count_real_roots: empty interval");
    if (p.degree() == 0) return 0;
    if (lo == hi) return p(lo) == 0 ? 1 : 0;

    UniPoly q = p.square_free_part();
    long endpoint_roots = 0;
    if (q(lo) == 0) {
        q = q.deflate(lo);
        ++endpoint_roots;
    }
    if (!q.is_zero() && q.degree() >= 1 && q(hi) == 0) {
        q = q.deflate(hi);
        ++endpoint_roots;
    }
    if (q.degree() < 1) return endpoint_roots;

    // q is square-free with q(lo) != 0, q(hi) != 0, so the variation
    // difference counts the roots in the open interval exactly.
    auto chain = sturm_chain(q);
    return variations(chain, lo) - variations(chain, hi) + endpoint_roots;
}

MultiPoly parse_poly(const std::string& text, std::size_t n_vars) {
    std::istringstream in(text);
    std::string row;
    std::vector<std::pair<MultiPoly::Expo, Rational>> staged;
    std::size_t n = n_vars;
    while (std::getline(in, row)) {
        auto hash = row.find('#');
        if (hash != std::string::npos) row.erase(hash);
        std::istringstream tok(row);
        std::string coeff;
        if (!(tok >> coeff)) continue;
        Rational c = parse_rational(coeff);
        MultiPoly::Expo e;
        long k;
        while (tok >> k) {
            if (k < 0) throw ParseError("negative exponent");
            e.push_back(static_cast<unsigned>(k));
        }
        if (n == 0) n = e.size();
        if (e.size() != n) throw ParseError("inconsistent variable count in polynomial");
        staged.emplace_back(std::move(e), std::move(c));
    }
    if (n == 0) throw ParseError("empty polynomial text");
    MultiPoly p(n);
    for (auto& [e, c] : staged) p.add_term(e, c);
    return p;
}

std::string format_poly(const MultiPoly& p) {
    std::string s;
    for (const auto& [e, c] : p.terms()) {
        s += format_rational(c);
        for (unsigned k : e) {
            s += ' ';
            s += std::to_string(k);
        }
        s += '\n';
    }
    return s;
}

MultiPoly read_poly(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_poly(buf.str());
}

void write_poly(const std::string& path, const MultiPoly& p) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << format_poly(p);
}

DoubleEval::DoubleEval(const MultiPoly& p) : n(p.n_vars()) {
    for (const auto& [e, c] : p.terms()) {
        coeff.push_back(c.get_d());
        coeff_lo.push_back(Rational(c - Rational(coeff.back())).get_d());
        for (unsigned k : e) {
            expo.push_back(k);
            max_exp = std::max(max_exp, k);
        }
    }
    // generous rounding slack: ~(deg+4) ulps per term, scaled by |terms|
    tolerance_scale = 1e-12 * static_cast<double>(std::max<long>(p.degree(), 0) + 4);
}

double DoubleEval::eval(const double* x) const {
    double acc = 0;
    const unsigned* e = expo.data();
    for (double c : coeff) {
        double t = c;
        for (std::size_t i = 0; i < n; ++i, ++e) {
            unsigned k = *e;
            double b = x[i];
            while (k--) t *= b;
        }
        acc += t;
    }
    return acc;
}

double DoubleEval::eval_abs(const double* x) const {
    double acc = 0;
    const unsigned* e = expo.data();
    for (double c : coeff) {
        double t = std::fabs(c);
        for (std::size_t i = 0; i < n; ++i, ++e) {
            unsigned k = *e;
            double b = std::fabs(x[i]);
            while (k--) t *= b;
        }
        acc += t;
    }
    return acc;
}

namespace {

// error-free transformations (Knuth two_sum, fma two_prod); the pair keeps
// roughly 106 bits, enough to evaluate the desk-scale expanded products
// whose term sums cancel down by ~20 decimal digits
struct Dd {
    double hi = 0, lo = 0;
};

inline Dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline Dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline Dd dd_add(Dd a, Dd b) {
    Dd s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    Dd r = two_sum(s.hi, s.lo);
    return r;
}

inline Dd dd_mul_d(Dd a, double b) {
    Dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    Dd r = two_sum(p.hi, p.lo);
    return r;
}

} // namespace

double DoubleEval::eval_dd(const double* x) const {
    Dd acc;
    const unsigned* e = expo.data();
    for (std::size_t j = 0; j < coeff.size(); ++j) {
        Dd t{coeff[j], coeff_lo[j]};
        for (std::size_t i = 0; i < n; ++i, ++e) {
            unsigned k = *e;
            double b = x[i];
            while (k--) t = dd_mul_d(t, b);
        }
        acc = dd_add(acc, t);
    }
    return acc.hi + acc.lo;
}

int DoubleEval::sign_at(const double* x) const {
    double v = eval(x);
    double bound = eval_abs(x) * tolerance_scale;
    if (v > bound) return 1;
    if (v < -bound) return -1;
    double w = eval_dd(x);
    return (w > 0) - (w < 0);
}

} // namespace inclab
