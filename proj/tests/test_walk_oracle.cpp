#include <doctest.h>

#include <array>
#include <cmath>

#include "hypcone/spectral_upper.hpp"
#include "hypcone/walk_oracle.hpp"

using namespace hypcone;

namespace {

// Fraction of the 3^k words of length k that spell the identity, decided by
// the Tits word problem rather than by the ball.
mpq_class brute_force_return(const GroupParams& p, int k) {
  long total = 1, hits = 0;
  for (int i = 0; i < k; ++i) total *= 3;
  for (long code = 0; code < total; ++code) {
    Word w;
    long c = code;
    for (int i = 0; i < k; ++i, c /= 3) w.push_back(kGenerators[static_cast<std::size_t>(c % 3)]);
    if (tits_reduce(p, w).empty()) ++hits;
  }
  mpq_class out(hits, total);
  out.canonicalize();
  return out;
}

}  // namespace

TEST_CASE("short return probabilities match brute force") {
  for (auto [l, m, n] : {std::array{4, 4, 4}, std::array{2, 3, 7}}) {
    const GroupParams p = GroupParams::make(l, m, n);
    const ReturnSeries rs = return_probabilities(build_ball(p, 8), 8);
    CAPTURE(p.name());
    CHECK(rs.exact[0] == 1);
    CHECK(rs.exact[2] == mpq_class(1, 3));
    CHECK(rs.exact[4] == brute_force_return(p, 4));
    CHECK(rs.exact[6] == brute_force_return(p, 6));
    for (int k = 1; k <= 8; k += 2) CHECK(rs.exact[static_cast<std::size_t>(k)] == 0);
  }
  CHECK(brute_force_return(GroupParams::make(4, 4, 4), 4) == mpq_class(5, 27));
  CHECK(brute_force_return(GroupParams::make(2, 3, 7), 4) == mpq_class(17, 81));
}

TEST_CASE("a larger ball does not change the series") {
  const GroupParams p = GroupParams::make(3, 3, 4);
  const ReturnSeries small = return_probabilities(build_ball(p, 12), 12);
  const ReturnSeries large = return_probabilities(build_ball(p, 16), 12);
  CHECK(small.exact == large.exact);
  const ReturnSeries approx = return_probabilities(build_ball(p, 12), 12, OracleMode::kDouble);
  for (std::size_t k = 0; k < approx.values.size(); ++k) {
    CHECK(approx.values[k] == doctest::Approx(small.exact[k].get_d()).epsilon(1e-14));
  }
  CHECK_THROWS_AS(return_probabilities(build_ball(p, 6), 7), Error);
}

TEST_CASE("the envelope stays below the upper bound") {
  const GroupParams p = GroupParams::make(4, 4, 4);
  const ReturnSeries rs = return_probabilities(build_ball(p, 20), 20);
  const double env = empirical_envelope(rs);
  const ReducedAutomaton ra = reduce(compute_automaton(p));
  const double upper = upper_bound(ra, default_root_type(ra)).rho_T;
  CHECK(env > 0.8);
  CHECK(env <= upper);
  for (int n = 1; n <= 10; ++n) {
    CHECK(rs.envelope(n) <= env);
  }
  CHECK(rs.envelope(11) == 0.0);
}

TEST_CASE("envelope of supplied values") {
  // Simple random walk on the 3-regular tree: p^(2) = 1/3, p^(4) = 15/81.
  const ReturnSeries rs = ReturnSeries::from_values({1.0, 0.0, 1.0 / 3.0, 0.0, 5.0 / 27.0});
  CHECK(rs.envelope(1) == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK(rs.envelope(2) == doctest::Approx(std::pow(5.0 / 27.0, 0.25)));
  CHECK(empirical_envelope(rs) == doctest::Approx(std::pow(5.0 / 27.0, 0.25)));

  const std::string csv = return_series_to_csv(rs);
  CHECK(csv.rfind("k,p_k,envelope_k\n", 0) == 0);
}
