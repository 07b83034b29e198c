#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "inclab/geometry.hpp"

namespace inclab {

// Sparse multivariate polynomial over Q. Terms are keyed by exponent tuple
// in a std::map so iteration order (and every serialization) is stable.
class MultiPoly {
  public:
    using Expo = std::vector<unsigned>;

    MultiPoly() = default;
    explicit MultiPoly(std::size_t n_vars) : n_(n_vars) {}

    std::size_t n_vars() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    long degree() const { return degree_; } // -1 for the zero polynomial

    void add_term(const Expo& e, const Rational& c);
    const std::map<Expo, Rational>& terms() const { return terms_; }

    Rational operator()(const RatVec& x) const;
    MultiPoly operator*(const MultiPoly& other) const;
    MultiPoly operator+(const MultiPoly& other) const;
    MultiPoly operator-(const MultiPoly& other) const;

    // Sum of the terms of maximal total degree; ZeroPolynomial if zero.
    MultiPoly highest_part() const;

    static MultiPoly constant(std::size_t n_vars, const Rational& c);
    static MultiPoly variable(std::size_t n_vars, std::size_t i); // x_i
    // x_i - shift, the building block of the axis-aligned grid products.
    static MultiPoly axis_shift(std::size_t n_vars, std::size_t i, const Rational& shift);

  private:
    std::size_t n_ = 0;
    long degree_ = -1;
    std::map<Expo, Rational> terms_;

    void recompute_degree();
};

// Dense univariate polynomial over Q, coefficients ascending. The zero
// polynomial is the empty vector.
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& leading() const;

    Rational operator()(const Rational& t) const;
    UniPoly derivative() const;
    UniPoly operator*(const UniPoly& o) const;
    UniPoly operator+(const UniPoly& o) const;
    void scale(const Rational& s);

    // Euclidean remainder; divisor must be nonzero.
    static UniPoly rem(const UniPoly& a, const UniPoly& b);
    static UniPoly gcd(UniPoly a, UniPoly b); // monic
    UniPoly square_free_part() const;
    // Exact division by (t - root); root must actually be a root.
    UniPoly deflate(const Rational& root) const;

  private:
    std::vector<Rational> c_;
    void trim();
};

// Q restricted to the parametrized line base + t*dir.
UniPoly restrict_to_line(const MultiPoly& Q, const Line& l);
UniPoly restrict_to_line(const MultiPoly& Q, const RatVec& base, const IntVec& dir);

// Number of distinct real roots in the closed interval [lo, hi], exact via
// a Sturm chain on the square-free part. ZeroPolynomial for p == 0.
long count_real_roots(const UniPoly& p, const Rational& lo, const Rational& hi);

// Polynomial text format: one term per row, "num/den e_1 .. e_n".
MultiPoly parse_poly(const std::string& text, std::size_t n_vars = 0);
std::string format_poly(const MultiPoly& p);
MultiPoly read_poly(const std::string& path);
void write_poly(const std::string& path, const MultiPoly& p);

// Flattened double-precision view of a MultiPoly for grid kernels: eval()
// returns the value, eval_abs() the sum of term magnitudes, which bounds
// the rounding error and decides when the exact path must confirm a sign.
struct DoubleEval {
    std::size_t n = 0;
    unsigned max_exp = 0;
    std::vector<double> coeff;
    std::vector<double> coeff_lo; // rounding residue of coeff, for eval_dd:
                                  // expanded products carry coefficients far
                                  // beyond 53 bits, and the residue is what
                                  // keeps the compensated path honest
    std::vector<unsigned> expo;   // n entries per term
    double tolerance_scale = 0;

    explicit DoubleEval(const MultiPoly& p);
    double eval(const double* x) const;
    double eval_abs(const double* x) const;
    // compensated (double-double) evaluation for points where plain doubles
    // cancel; expanded products of many linear factors need this near their
    // zero sets, where |Q| can sit far below the roundoff of the term sum
    double eval_dd(const double* x) const;
    // sign with plain eval fast path, falling back to eval_dd inside the
    // rounding band; returns -1, 0, or 1
    int sign_at(const double* x) const;
};

} // namespace inclab
