#include "hypcone/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace hypcone {

Eigen::MatrixXd to_dense(const IntMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

bool is_primitive(const Eigen::MatrixXd& a) {
  IntMatrix pattern(static_cast<std::size_t>(a.rows()),
                    std::vector<int>(static_cast<std::size_t>(a.cols()), 0));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      pattern[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j) > 0 ? 1 : 0;
    }
  }
  return primitivity_exponent(pattern) > 0;
}

PerronResult perron(const Eigen::MatrixXd& a, bool require_primitive,
                    const PerronOptions& options) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::kInvalidParameter, "perron needs a nonempty square matrix");
  }
  if ((a.array() < 0).any()) {
    throw Error(ErrorCode::kInvalidParameter, "perron needs a nonnegative matrix");
  }
  if (require_primitive && !is_primitive(a)) {
    throw Error(ErrorCode::kNotPrimitive, "matrix is not primitive");
  }
  const Eigen::Index n = a.rows();
  // The shift keeps the iteration aperiodic; it changes no eigenvector.
  const Eigen::MatrixXd shifted = 0.5 * (a + Eigen::MatrixXd::Identity(n, n));
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double previous = -1.0;
  PerronResult out;
  for (long it = 1; it <= options.max_iterations; ++it) {
    Eigen::VectorXd next = shifted * v;
    const double sum = next.sum();
    if (!(sum > 0)) throw Error(ErrorCode::kNotConverged, "power iteration collapsed to zero");
    next /= sum;
    const Eigen::VectorXd av = a * next;
    const double theta = next.dot(av) / next.squaredNorm();
    const double residual = (av - theta * next).lpNorm<Eigen::Infinity>();
    v = std::move(next);
    if (std::abs(theta - previous) < options.rayleigh_tolerance &&
        residual < options.residual_tolerance) {
      out.eigenvalue = theta;
      out.vector = v;
      out.residual = residual;
      out.iterations = it;
      if (require_primitive && (v.array() <= 0).any()) {
        throw Error(ErrorCode::kNotConverged, "Perron vector is not strictly positive");
      }
      return out;
    }
    previous = theta;
  }
  throw Error(ErrorCode::kNotConverged, "power iteration did not converge");
}

SymmetricEigen jacobi_eigenvalues(const Eigen::MatrixXd& symmetric, double tolerance,
                                  int max_sweeps) {
  Eigen::MatrixXd a = symmetric;
  const Eigen::Index n = a.rows();
  auto off = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j) s += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(s);
  };
  SymmetricEigen out;
  double current = off();
  while (current >= tolerance) {
    if (out.sweeps == max_sweeps) {
      throw Error(ErrorCode::kNotConverged, "Jacobi sweeps exhausted");
    }
    ++out.sweeps;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        // Rotation angle from the classical symmetric Schur decomposition.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
    current = off();
  }
  out.off_diagonal = current;
  out.values = a.diagonal();
  std::sort(out.values.begin(), out.values.end());
  return out;
}

}  // namespace hypcone
