#include "hypcone/polynomial.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "hypcone/error.hpp"

namespace hypcone {

bool GradedLexGreater::operator()(const Monomial& a, const Monomial& b) const {
  const int da = std::accumulate(a.begin(), a.end(), 0);
  const int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da > db;
  return a > b;
}

MultiPoly MultiPoly::constant(int nvars, const mpz_class& c) {
  MultiPoly p(nvars);
  p.add_term(Monomial(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int var) {
  MultiPoly p(nvars);
  Monomial m(static_cast<std::size_t>(nvars), 0);
  m[static_cast<std::size_t>(var)] = 1;
  p.add_term(m, 1);
  return p;
}

void MultiPoly::add_term(const Monomial& mono, const mpz_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int MultiPoly::degree(int var) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[static_cast<std::size_t>(var)]);
  return d;
}

int MultiPoly::total_degree() const {
  return terms_.empty() ? 0 : std::accumulate(terms_.begin()->first.begin(),
                                              terms_.begin()->first.end(), 0);
}

MultiPoly MultiPoly::coefficient(int var, int k) const {
  MultiPoly out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[static_cast<std::size_t>(var)] != k) continue;
    Monomial reduced = m;
    reduced[static_cast<std::size_t>(var)] = 0;
    out.add_term(reduced, c);
  }
  return out;
}

MultiPoly MultiPoly::derivative(int var) const {
  MultiPoly out(nvars_);
  for (const auto& [m, c] : terms_) {
    const int e = m[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    Monomial lowered = m;
    --lowered[static_cast<std::size_t>(var)];
    out.add_term(lowered, c * e);
  }
  return out;
}

mpz_class MultiPoly::content() const {
  mpz_class g = 0;
  for (const auto& [m, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

MultiPoly MultiPoly::primitive() const {
  if (is_zero()) return *this;
  mpz_class g = content();
  if (terms_.begin()->second < 0) g = -g;
  MultiPoly out(nvars_);
  for (const auto& [m, c] : terms_) {
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    out.terms_.emplace_hint(out.terms_.end(), m, q);
  }
  return out;
}

MultiPoly MultiPoly::strip_variable_powers(int var) const {
  if (is_zero()) return *this;
  int low = std::numeric_limits<int>::max();
  for (const auto& [m, c] : terms_) low = std::min(low, m[static_cast<std::size_t>(var)]);
  if (low == 0) return *this;
  MultiPoly out(nvars_);
  for (const auto& [m, c] : terms_) {
    Monomial lowered = m;
    lowered[static_cast<std::size_t>(var)] -= low;
    out.add_term(lowered, c);
  }
  return out;
}

double MultiPoly::evaluate(const std::vector<double>& point) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int e = 0; e < m[i]; ++e) t *= point[i];
    }
    total += t;
  }
  return total;
}

mpq_class MultiPoly::evaluate(const std::vector<mpq_class>& point) const {
  mpq_class total = 0;
  for (const auto& [m, c] : terms_) {
    mpq_class t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int e = 0; e < m[i]; ++e) t *= point[i];
    }
    total += t;
  }
  return total;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const mpz_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly out(a.nvars_);
  Monomial m(static_cast<std::size_t>(a.nvars_));
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

std::string MultiPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c < 0;
    const mpz_class mag = abs(c);
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const bool is_unit = std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
    bool wrote = false;
    if (mag != 1 || is_unit) {
      out << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (wrote) out << "*";
      out << names[i];
      if (m[i] > 1) out << "^" << m[i];
      wrote = true;
    }
  }
  return out.str();
}

std::optional<MultiPoly> divide_exact(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_zero()) throw Error(ErrorCode::kInvalidParameter, "division by the zero polynomial");
  MultiPoly quotient(a.nvars());
  MultiPoly rest = a;
  const auto& [lead_m, lead_c] = *b.terms().begin();
  Monomial shift(static_cast<std::size_t>(a.nvars()));
  while (!rest.is_zero()) {
    const auto& [m, c] = *rest.terms().begin();
    for (std::size_t i = 0; i < shift.size(); ++i) {
      shift[i] = m[i] - lead_m[i];
      if (shift[i] < 0) return std::nullopt;
    }
    if (!mpz_divisible_p(c.get_mpz_t(), lead_c.get_mpz_t())) return std::nullopt;
    mpz_class factor;
    mpz_divexact(factor.get_mpz_t(), c.get_mpz_t(), lead_c.get_mpz_t());
    quotient.add_term(shift, factor);
    MultiPoly term(a.nvars());
    term.add_term(shift, factor);
    rest -= term * b;
  }
  return quotient;
}

MultiPoly determinant(std::vector<std::vector<MultiPoly>> a, int nvars) {
  const std::size_t n = a.size();
  if (n == 0) return MultiPoly::constant(nvars, 1);
  MultiPoly previous = MultiPoly::constant(nvars, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k].is_zero()) ++swap;
      if (swap == n) return MultiPoly(nvars);
      std::swap(a[k], a[swap]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        MultiPoly numerator = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        auto q = divide_exact(numerator, previous);
        if (!q) throw Error(ErrorCode::kInvalidParameter, "Bareiss division was not exact");
        a[i][j] = std::move(*q);
      }
      a[i][k] = MultiPoly(nvars);
    }
    previous = a[k][k];
  }
  MultiPoly det = a[n - 1][n - 1];
  return negate ? -det : det;
}

MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, int var) {
  const int nv = p.nvars();
  const int m = p.degree(var);
  const int n = q.degree(var);
  const auto size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<MultiPoly>> s(size, std::vector<MultiPoly>(size, MultiPoly(nv)));
  // Rows hold coefficients from the highest power down.
  for (int row = 0; row < n; ++row) {
    for (int k = 0; k <= m; ++k) {
      s[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + m - k)] =
          p.coefficient(var, k);
    }
  }
  for (int row = 0; row < m; ++row) {
    for (int k = 0; k <= n; ++k) {
      s[static_cast<std::size_t>(n + row)][static_cast<std::size_t>(row + n - k)] =
          q.coefficient(var, k);
    }
  }
  return determinant(std::move(s), nv);
}

// ---------------------------------------------------------------------------

UPoly::UPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
  for (auto& c : c_) c.canonicalize();
  trim();
}

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::from_multi(const MultiPoly& p, int var) {
  std::vector<mpq_class> c(static_cast<std::size_t>(p.degree(var) + 1), mpq_class(0));
  for (const auto& [m, v] : p.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (static_cast<int>(i) != var && m[i] != 0) {
        throw Error(ErrorCode::kInvalidParameter, "polynomial is not univariate");
      }
    }
    c[static_cast<std::size_t>(m[static_cast<std::size_t>(var)])] += v;
  }
  return UPoly(std::move(c));
}

UPoly UPoly::derivative() const {
  std::vector<mpq_class> out;
  for (std::size_t i = 1; i < c_.size(); ++i) out.push_back(c_[i] * static_cast<long>(i));
  return UPoly(std::move(out));
}

UPoly UPoly::monic() const {
  if (c_.empty()) return *this;
  std::vector<mpq_class> out = c_;
  const mpq_class lead = c_.back();
  for (auto& v : out) v /= lead;
  return UPoly(std::move(out));
}

mpq_class UPoly::evaluate(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double UPoly::evaluate(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

int UPoly::sign_at(const mpq_class& x) const { return sgn(evaluate(x)); }

UPoly operator-(const UPoly& a) {
  std::vector<mpq_class> out = a.c_;
  for (auto& v : out) v = -v;
  return UPoly(std::move(out));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<mpq_class> out(a.c_.size() + b.c_.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(out));
}

std::vector<mpz_class> UPoly::integer_coefficients() const {
  mpz_class l = 1;
  for (const auto& v : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  std::vector<mpz_class> out;
  mpz_class g = 0;
  for (const auto& v : c_) {
    mpz_class n = v.get_num() * (l / v.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    out.push_back(n);
  }
  if (g > 1) {
    for (auto& v : out) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }
  return out;
}

UDivision divide(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw Error(ErrorCode::kInvalidParameter, "division by zero polynomial");
  std::vector<mpq_class> rest = a.coefficients();
  const auto& bc = b.coefficients();
  const int db = b.degree();
  std::vector<mpq_class> quot(static_cast<std::size_t>(std::max(0, a.degree() - db + 1)),
                              mpq_class(0));
  for (int k = a.degree(); k >= db; --k) {
    const mpq_class f = rest[static_cast<std::size_t>(k)] / b.leading();
    if (f == 0) continue;
    quot[static_cast<std::size_t>(k - db)] = f;
    for (int j = 0; j <= db; ++j) {
      rest[static_cast<std::size_t>(k - db + j)] -= f * bc[static_cast<std::size_t>(j)];
    }
  }
  if (rest.size() > static_cast<std::size_t>(db)) rest.resize(static_cast<std::size_t>(db));
  return {UPoly(std::move(quot)), UPoly(std::move(rest))};
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = divide(a, b).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() < 1) return p;
  return divide(p, gcd(p, p.derivative())).quotient.monic();
}

namespace {

UPoly positive_scale(const UPoly& p) {
  // Scaling by a positive constant keeps every sign evaluation.
  if (p.is_zero()) return p;
  std::vector<mpq_class> c = p.coefficients();
  const mpq_class s = abs(p.leading());
  for (auto& v : c) v /= s;
  return UPoly(std::move(c));
}

}  // namespace

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq;
  if (p.is_zero()) return seq;
  seq.push_back(positive_scale(p));
  UPoly d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(positive_scale(d));
  for (;;) {
    UPoly r = divide(seq[seq.size() - 2], seq.back()).remainder;
    if (r.is_zero()) break;
    seq.push_back(positive_scale(-r));
  }
  return seq;
}

int sign_variations(const std::vector<UPoly>& seq, const mpq_class& x) {
  int changes = 0, last = 0;
  for (const auto& s : seq) {
    const int sg = s.sign_at(x);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++changes;
    last = sg;
  }
  return changes;
}

int sturm_count(const std::vector<UPoly>& seq, const mpq_class& a, const mpq_class& b) {
  return sign_variations(seq, a) - sign_variations(seq, b);
}

mpq_class root_bound(const UPoly& p) {
  mpq_class best = 0;
  for (int i = 0; i < p.degree(); ++i) {
    best = std::max<mpq_class>(best, abs(p.coefficients()[static_cast<std::size_t>(i)] / p.leading()));
  }
  return best + 1;
}

std::vector<RootInterval> positive_real_roots(const UPoly& p, const mpq_class& width) {
  std::vector<RootInterval> out;
  const UPoly sq = squarefree_part(p);
  if (sq.degree() < 1) return out;
  const auto seq = sturm_sequence(sq);
  // A split point that is not itself a root, so every (a, b] stays clean.
  auto split = [&](const mpq_class& a, const mpq_class& b) {
    mpq_class mid = (a + b) / 2;
    mpq_class nudge = (b - a) / 6;
    while (sq.sign_at(mid) == 0) {
      mid += nudge;
      nudge /= 2;
    }
    return mid;
  };
  struct Pending {
    mpq_class a, b;
    int count;
  };
  const mpq_class bound = root_bound(sq);
  std::vector<Pending> stack;
  const int total = sturm_count(seq, mpq_class(0), bound);
  if (total > 0) stack.push_back({mpq_class(0), bound, total});
  std::vector<Pending> isolated;
  while (!stack.empty()) {
    Pending cur = stack.back();
    stack.pop_back();
    if (cur.count == 1) {
      isolated.push_back(cur);
      continue;
    }
    const mpq_class mid = split(cur.a, cur.b);
    const int left = sturm_count(seq, cur.a, mid);
    if (left > 0) stack.push_back({cur.a, mid, left});
    if (cur.count - left > 0) stack.push_back({mid, cur.b, cur.count - left});
  }
  for (Pending& iv : isolated) {
    while (iv.b - iv.a > width) {
      const mpq_class mid = split(iv.a, iv.b);
      if (sturm_count(seq, iv.a, mid) == 1) {
        iv.b = mid;
      } else {
        iv.a = mid;
      }
    }
    RootInterval r;
    r.lo = iv.a;
    r.hi = iv.b;
    r.approx = mpq_class((iv.a + iv.b) / 2).get_d();
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(),
            [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
  return out;
}

}  // namespace hypcone
