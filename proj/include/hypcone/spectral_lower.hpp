#pragma once

#include <string>

#include <Eigen/Core>

#include "hypcone/cone_automaton.hpp"
#include "hypcone/linalg.hpp"

namespace hypcone {

struct LowerBoundResult {
  double nu = 0.0;              // Perron eigenvalue of the sphere-growth matrix
  Eigen::VectorXd A;            // its positive eigenvector, sum 1
  double lambda = 0.0;          // largest eigenvalue of the symmetrized matrix
  int d = 0;
  double bound = 0.0;           // 2 lambda / (d sqrt(nu))
  double perron_residual = 0.0;
  double jacobi_off_diagonal = 0.0;
  double trace_defect = 0.0;    // |sum of eigenvalues - trace|
};

// Mt(i,j) = M(j,i) / r_i: the linear map s_k -> s_{k+1} on type censuses.
// Throws ZeroPredecessor if some r_i is zero.
Eigen::MatrixXd tilde_matrix(const ReducedAutomaton& ra);

struct Symmetrized {
  Eigen::MatrixXd prime;        // D^{-1/2} M^T D^{1/2}
  Eigen::MatrixXd second;       // (prime + prime^T) / 2
};

// D = diag(A). Throws InvalidParameter unless A is strictly positive.
Symmetrized symmetrize(const ReducedAutomaton& ra, const Eigen::VectorXd& A);

LowerBoundResult lower_bound(const ReducedAutomaton& ra, int d = 3);

std::string lower_bound_to_json(const std::string& group, const LowerBoundResult& r);

}  // namespace hypcone
