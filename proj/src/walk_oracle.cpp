#include "hypcone/walk_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypcone {

ReturnSeries ReturnSeries::from_values(std::vector<double> values) {
  ReturnSeries rs;
  rs.n_max = static_cast<int>(values.size()) - 1;
  rs.values = std::move(values);
  return rs;
}

double ReturnSeries::envelope(int n) const {
  if (n < 1 || 2 * n > n_max) return 0.0;
  const double p = values[static_cast<std::size_t>(2 * n)];
  return p > 0 ? std::pow(p, 1.0 / (2.0 * n)) : 0.0;
}

namespace {

template <typename T>
std::vector<T> walk(const CayleyBall& ball, int n_max) {
  std::vector<T> returns;
  std::vector<T> current(ball.size(), T(0)), next(ball.size(), T(0));
  std::vector<VertexId> support{0}, touched;
  std::vector<char> mark(ball.size(), 0);
  current[0] = T(1);
  returns.push_back(T(1));
  for (int step = 1; step <= n_max; ++step) {
    const int reach = n_max - step;
    touched.clear();
    for (VertexId v : support) {
      for (Generator s : kGenerators) {
        const VertexId w = ball.neighbour(v, s);
        if (w == kNoVertex || ball.norm(w) > reach) continue;
        next[w] += current[v];
        if (!mark[w]) {
          mark[w] = 1;
          touched.push_back(w);
        }
      }
      current[v] = T(0);
    }
    for (VertexId w : touched) mark[w] = 0;
    returns.push_back(next[0]);
    std::swap(current, next);
    support.swap(touched);
  }
  return returns;
}

}  // namespace

ReturnSeries return_probabilities(const CayleyBall& ball, int n_max, OracleMode mode) {
  if (n_max < 0 || n_max > ball.radius()) {
    throw Error(ErrorCode::kHorizonExceedsBall,
                "horizon " + std::to_string(n_max) + " exceeds ball radius " +
                    std::to_string(ball.radius()));
  }
  ReturnSeries rs;
  rs.n_max = n_max;
  rs.mode = mode;
  if (mode == OracleMode::kExact) {
    const std::vector<mpz_class> counts = walk<mpz_class>(ball, n_max);
    mpz_class power = 1;
    for (const auto& c : counts) {
      mpq_class p(c, power);
      p.canonicalize();
      rs.values.push_back(p.get_d());
      rs.exact.push_back(std::move(p));
      power *= 3;
    }
  } else {
    const std::vector<double> counts = walk<double>(ball, n_max);
    double scale = 1.0;
    for (double c : counts) {
      rs.values.push_back(c * scale);
      scale /= 3.0;
    }
  }
  return rs;
}

double empirical_envelope(const ReturnSeries& rs) {
  double best = 0.0;
  for (int n = 1; 2 * n <= rs.n_max; ++n) best = std::max(best, rs.envelope(n));
  return best;
}

std::string return_series_to_csv(const ReturnSeries& rs) {
  std::ostringstream out;
  out.precision(17);
  out << "k,p_k,envelope_k\n";
  for (int k = 0; k <= rs.n_max; ++k) {
    out << k << ",";
    if (rs.mode == OracleMode::kExact && !rs.exact.empty()) {
      out << rs.exact[static_cast<std::size_t>(k)].get_str();
    } else {
      out << rs.values[static_cast<std::size_t>(k)];
    }
    out << ",";
    if (k > 0 && k % 2 == 0) out << rs.envelope(k / 2);
    out << "\n";
  }
  return out.str();
}

}  // namespace hypcone
