#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "hypcone/cayley_ball.hpp"

namespace hypcone {

enum class OracleMode { kExact, kDouble };

// Return probabilities p^(k)(e, e) of the simple random walk, k = 0..n_max.
struct ReturnSeries {
  int n_max = 0;
  OracleMode mode = OracleMode::kDouble;
  std::vector<mpq_class> exact;   // filled in exact mode
  std::vector<double> values;

  // Series built from externally supplied probabilities (double mode).
  static ReturnSeries from_values(std::vector<double> values);

  // p^(2n)^(1/(2n)) for n >= 1; 0 if 2n > n_max.
  double envelope(int n) const;
};

// Walk from the identity; vertices farther than the remaining number of steps
// are dropped since they cannot return in time. Exact mode counts paths with
// big integers and divides by 3^k. Throws HorizonExceedsBall if n_max > radius.
ReturnSeries return_probabilities(const CayleyBall& ball, int n_max,
                                  OracleMode mode = OracleMode::kExact);

// max_n p^(2n)^(1/(2n)): a lower bound for the spectral radius.
double empirical_envelope(const ReturnSeries& rs);

// Header "k,p_k,envelope_k"; the envelope column is empty for odd k.
std::string return_series_to_csv(const ReturnSeries& rs);

}  // namespace hypcone
