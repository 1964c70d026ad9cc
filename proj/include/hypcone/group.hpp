#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "hypcone/error.hpp"

namespace hypcone {

// The three Coxeter generators. Values are used as array indices throughout.
enum class Generator : std::uint8_t { L = 0, M = 1, N = 2 };

inline constexpr std::array<Generator, 3> kGenerators = {
    Generator::L, Generator::M, Generator::N};

constexpr int index(Generator s) noexcept { return static_cast<int>(s); }
char to_char(Generator s) noexcept;

using Word = std::vector<Generator>;

Word parse_word(std::string_view letters);
std::string to_string(const Word& w);

// Parameters of the triangle group
//   <L, M, N | L^2 = M^2 = N^2 = (LM)^n = (MN)^l = (NL)^m = e>.
// Only hyperbolic triples are representable. The order of (l, m, n) is kept
// as given; `canonical()` sorts it for display and case dispatch.
class GroupParams {
 public:
  // Throws InvalidParameter (value < 2) or NonHyperbolic.
  static GroupParams make(int l, int m, int n);

  int l() const noexcept { return l_; }
  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  int max_exponent() const noexcept;

  // Order of s*t in the group (the Coxeter matrix entry), 1 on the diagonal.
  int coxeter_order(Generator s, Generator t) const noexcept;

  GroupParams canonical() const;
  std::string name() const;  // "Delta(l,m,n)"

  friend bool operator==(const GroupParams&, const GroupParams&) = default;

 private:
  GroupParams(int l, int m, int n) : l_(l), m_(m), n_(n) {}
  int l_, m_, n_;
};

// Geometric representation: sigma_s(v) = v - 2 B(e_s, v) e_s acting on
// column vectors, with B the Coxeter Gram matrix.
struct ReflectionRep {
  Eigen::Matrix3d gram;
  std::array<Eigen::Matrix3d, 3> sigma;

  const Eigen::Matrix3d& operator[](Generator s) const {
    return sigma[static_cast<std::size_t>(index(s))];
  }
  Eigen::Matrix3d evaluate(const Word& w) const;
};

ReflectionRep reflection_rep(const GroupParams& params);

// Cancels adjacent equal letters until none remain.
Word free_reduce(const Word& w);

inline constexpr std::size_t kDefaultTitsCap = 24;

// Exact word problem by Tits' algorithm: a word is reduced to a reduced word
// by braid moves and deletions of ss; w1 == w2 iff w1 * w2^-1 reduces to the
// empty word. Exponential in word length, intended for cross-checks only.
// Throws CapExceeded if |w1| + |w2| > cap.
bool tits_equal(const GroupParams& params, const Word& w1, const Word& w2,
                std::size_t cap = kDefaultTitsCap);

// A reduced word for the element represented by w (same algorithm).
Word tits_reduce(const GroupParams& params, const Word& w);

}  // namespace hypcone
