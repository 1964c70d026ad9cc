#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hypcone {

using Monomial = std::vector<int>;

// Descending graded lexicographic order: the first entry of a map keyed with
// this comparator is the leading monomial.
struct GradedLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// Sparse polynomial with integer coefficients in a fixed number of variables.
// Zero coefficients are never stored.
class MultiPoly {
 public:
  using Terms = std::map<Monomial, mpz_class, GradedLexGreater>;

  explicit MultiPoly(int nvars = 0) : nvars_(nvars) {}
  static MultiPoly constant(int nvars, const mpz_class& c);
  static MultiPoly variable(int nvars, int var);

  int nvars() const noexcept { return nvars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }

  void add_term(const Monomial& mono, const mpz_class& c);

  int degree(int var) const;
  int total_degree() const;
  bool contains(int var) const { return degree(var) > 0; }
  // Coefficient of var^k, as a polynomial with var's exponent zeroed.
  MultiPoly coefficient(int var, int k) const;
  MultiPoly derivative(int var) const;

  mpz_class content() const;
  // Divides out the integer content and makes the leading coefficient positive.
  MultiPoly primitive() const;
  // Divides by var while every term is divisible by it.
  MultiPoly strip_variable_powers(int var) const;

  double evaluate(const std::vector<double>& point) const;
  mpq_class evaluate(const std::vector<mpq_class>& point) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const mpz_class& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const mpz_class& c) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  // Human readable, e.g. "3*w2 - z - 2*w2^2*z".
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  int nvars_;
  Terms terms_;
};

// Exact quotient a / b over the integers, or nullopt if b does not divide a.
std::optional<MultiPoly> divide_exact(const MultiPoly& a, const MultiPoly& b);

// Resultant with respect to `var` via the Sylvester matrix and fraction-free
// Bareiss elimination over the polynomial ring.
MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, int var);

// Determinant of a square matrix of polynomials (Bareiss).
MultiPoly determinant(std::vector<std::vector<MultiPoly>> a, int nvars);

// Univariate polynomial over the rationals, coefficients from degree 0 up.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<mpq_class> coeffs);
  // Requires every variable other than `var` to be absent.
  static UPoly from_multi(const MultiPoly& p, int var);

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<mpq_class>& coefficients() const noexcept { return c_; }
  const mpq_class& leading() const { return c_.back(); }

  UPoly derivative() const;
  UPoly monic() const;
  mpq_class evaluate(const mpq_class& x) const;
  double evaluate(double x) const;
  int sign_at(const mpq_class& x) const;

  friend UPoly operator-(const UPoly& a);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly&, const UPoly&) = default;

  // Coefficients scaled to coprime integers, low degree first.
  std::vector<mpz_class> integer_coefficients() const;

 private:
  void trim();
  std::vector<mpq_class> c_;
};

struct UDivision {
  UPoly quotient;
  UPoly remainder;
};
UDivision divide(const UPoly& a, const UPoly& b);
UPoly gcd(UPoly a, UPoly b);
UPoly squarefree_part(const UPoly& p);

// p, p', -rem(p, p'), ... ending at a nonzero constant multiple of gcd(p, p').
std::vector<UPoly> sturm_sequence(const UPoly& p);
int sign_variations(const std::vector<UPoly>& seq, const mpq_class& x);
// Distinct real roots in (a, b].
int sturm_count(const std::vector<UPoly>& seq, const mpq_class& a, const mpq_class& b);

// Cauchy bound: every root has absolute value below it.
mpq_class root_bound(const UPoly& p);

struct RootInterval {
  mpq_class lo;
  mpq_class hi;   // the root lies in (lo, hi]
  double approx = 0.0;
};

// Isolating intervals of the distinct real roots in (0, bound), refined to
// width <= `width`. Each interval holds exactly one root by Sturm count.
std::vector<RootInterval> positive_real_roots(const UPoly& p, const mpq_class& width);

}  // namespace hypcone
