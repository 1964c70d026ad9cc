#pragma once

#include <array>

#include "hypcone/polynomial.hpp"

namespace hypcone::testing {

// The printed elimination polynomial of Delta(4,4,4) in (w5, z), embedded in
// a ring with `nvars` variables.
inline MultiPoly printed_p5(int nvars, int w_var, int z_var) {
  struct Term {
    long coeff;
    int w, z;
  };
  static constexpr std::array<Term, 18> kTerms{{
      {729, 3, 0},  {-729, 2, 1}, {-486, 4, 1}, {243, 1, 2}, {-324, 3, 2}, {81, 5, 2},
      {-27, 0, 3},  {324, 2, 3},  {297, 4, 3},  {-72, 1, 4}, {117, 3, 4},  {-36, 5, 4},
      {6, 0, 5},    {-69, 2, 5},  {-84, 4, 5},  {6, 1, 6},   {16, 3, 6},   {8, 5, 6},
  }};
  MultiPoly p(nvars);
  for (const Term& t : kTerms) {
    Monomial m(static_cast<std::size_t>(nvars), 0);
    m[static_cast<std::size_t>(w_var)] = t.w;
    m[static_cast<std::size_t>(z_var)] = t.z;
    p.add_term(m, mpz_class(t.coeff));
  }
  return p;
}

}  // namespace hypcone::testing
