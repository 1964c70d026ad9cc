#include "hypcone/spectral_lower.hpp"

#include <cmath>

#include <json.hpp>

namespace hypcone {

Eigen::MatrixXd tilde_matrix(const ReducedAutomaton& ra) {
  const auto n = static_cast<Eigen::Index>(ra.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int r = ra.r[static_cast<std::size_t>(i)];
    if (r == 0) {
      throw Error(ErrorCode::kZeroPredecessor,
                  "type " + std::to_string(ra.types[static_cast<std::size_t>(i)]) +
                      " has no predecessors");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = ra.M[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] /
                  static_cast<double>(r);
    }
  }
  return out;
}

Symmetrized symmetrize(const ReducedAutomaton& ra, const Eigen::VectorXd& A) {
  if (A.size() != ra.size() || (A.array() <= 0).any()) {
    throw Error(ErrorCode::kInvalidParameter, "scaling vector must be strictly positive");
  }
  const Eigen::MatrixXd mt = to_dense(ra.M).transpose();
  const Eigen::ArrayXd root = A.array().sqrt();
  Symmetrized out;
  out.prime = (root.inverse().matrix().asDiagonal() * mt) * root.matrix().asDiagonal();
  out.second = 0.5 * (out.prime + out.prime.transpose());
  return out;
}

LowerBoundResult lower_bound(const ReducedAutomaton& ra, int d) {
  if (d < 1) throw Error(ErrorCode::kInvalidParameter, "degree must be positive");
  const PerronResult pf = perron(tilde_matrix(ra));
  const Symmetrized sym = symmetrize(ra, pf.vector);
  const SymmetricEigen eig = jacobi_eigenvalues(sym.second);
  LowerBoundResult out;
  out.nu = pf.eigenvalue;
  out.A = pf.vector;
  out.lambda = eig.values(eig.values.size() - 1);
  out.d = d;
  out.bound = 2.0 * out.lambda / (d * std::sqrt(out.nu));
  out.perron_residual = pf.residual;
  out.jacobi_off_diagonal = eig.off_diagonal;
  out.trace_defect = std::abs(eig.values.sum() - sym.second.trace());
  return out;
}

std::string lower_bound_to_json(const std::string& group, const LowerBoundResult& r) {
  nlohmann::ordered_json doc;
  doc["group"] = group;
  doc["nu"] = r.nu;
  doc["lambda"] = r.lambda;
  doc["d"] = r.d;
  doc["bound"] = r.bound;
  doc["residuals"] = {{"perron", r.perron_residual},
                      {"jacobi_off_diagonal", r.jacobi_off_diagonal},
                      {"trace", r.trace_defect}};
  return doc.dump(2);
}

}  // namespace hypcone
