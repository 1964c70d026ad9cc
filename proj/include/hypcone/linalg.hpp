#pragma once

#include <Eigen/Core>

#include "hypcone/cone_automaton.hpp"

namespace hypcone {

Eigen::MatrixXd to_dense(const IntMatrix& m);

struct PerronResult {
  double eigenvalue = 0.0;
  Eigen::VectorXd vector;     // strictly positive, entries sum to 1
  double residual = 0.0;      // ||A v - theta v||_inf
  long iterations = 0;
};

struct PerronOptions {
  double rayleigh_tolerance = 1e-13;
  double residual_tolerance = 1e-12;
  long max_iterations = 1'000'000;
};

// Power iteration for a primitive nonnegative matrix. Iterates with
// (A + I) / 2 shifted matrices so that the dominant eigenvalue is strictly
// separated even when A has eigenvalues of equal modulus on the circle.
// Throws NotPrimitive if `require_primitive` and the pattern is imprimitive,
// NotConverged after max_iterations.
PerronResult perron(const Eigen::MatrixXd& a, bool require_primitive = true,
                    const PerronOptions& options = {});

bool is_primitive(const Eigen::MatrixXd& a);

struct SymmetricEigen {
  Eigen::VectorXd values;     // ascending
  double off_diagonal = 0.0;  // Frobenius norm of the off-diagonal part at exit
  int sweeps = 0;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below
// `tolerance`. Throws NotConverged after `max_sweeps`.
SymmetricEigen jacobi_eigenvalues(const Eigen::MatrixXd& symmetric,
                                  double tolerance = 1e-13, int max_sweeps = 100);

}  // namespace hypcone
