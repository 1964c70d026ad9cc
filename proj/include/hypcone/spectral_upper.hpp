#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hypcone/cone_automaton.hpp"

namespace hypcone {

// Nearest-neighbour walk on the tree of geodesics, restricted to the reduced
// types: from a type-i vertex the walk steps back with probability r_i/d_i
// and to each of the successors with probability 1/d_i.
struct TreeWalkSpec {
  std::vector<int> types;      // original type ids
  IntMatrix M;
  std::vector<int> d;
  std::vector<int> r;
  std::vector<double> p_back;  // r_i / d_i
  std::vector<double> p_step;  // 1 / d_i
  int root_type = 0;           // original id
  int root_local = 0;

  int size() const noexcept { return static_cast<int>(types.size()); }
};

// Throws InvalidRoot unless root_type is a reduced type.
TreeWalkSpec tree_walk_spec(const ReducedAutomaton& ra, int root_type);

// Row sums p_back_i + sum_j M_ij p_step_i minus one; each should vanish.
std::vector<double> stochasticity_defects(const TreeWalkSpec& spec);

// Summit-like type: r = 2 with one successor, lowest id. Otherwise any r = 2
// type, then the automaton root if reduced, then the lowest reduced type.
int default_root_type(const ReducedAutomaton& ra, std::optional<int> automaton_root = {});

struct UpperOptions {
  double bisection_width = 1e-6;
  double fold_tolerance = 1e-13;
  double fallback_width = 1e-12;
  double divergence_cap = 1e6;
  long max_iterations = 1'000'000;
  double z0_width = 1e-14;
};

struct FixedPointSolution {
  double z = 0.0;
  Eigen::VectorXd w;
  double residual = 0.0;                 // ||Phi(w) - w||_inf
  double jacobian_spectral_radius = 0.0;
  long iterations = 0;
};

// Phi_z(w)_i = z p_back_i + z p_step_i w_i sum_j M_ij w_j.
Eigen::VectorXd phi(const TreeWalkSpec& spec, double z, const Eigen::VectorXd& w);
Eigen::MatrixXd phi_jacobian(const TreeWalkSpec& spec, double z, const Eigen::VectorXd& w);
double spectral_radius(const Eigen::MatrixXd& m);

// Monotone iteration from w = 0. Returns nullopt when the iterates pass the
// divergence cap or are still growing after max_iterations.
std::optional<FixedPointSolution> minimal_fixed_point(const TreeWalkSpec& spec, double z,
                                                      const UpperOptions& options = {});

struct CriticalRadius {
  double R_F = 0.0;
  Eigen::VectorXd w;           // fixed point at R_F
  Eigen::VectorXd u;           // fold null vector, sum 1
  double fold_residual = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  int newton_iterations = 0;
  bool used_fallback = false;  // Newton failed, R_F from fine bisection
};

// Bisection on convergence of the fixed-point iteration, then Newton on the
// fold system Phi(w) = w, DPhi(w) u = u, sum u = 1 in the unknowns (w, u, z).
CriticalRadius critical_radius(const TreeWalkSpec& spec, const UpperOptions& options = {});

// F(z) = sum_j M_root,j (1/d_root) z w_j(z): first return to the base point.
double first_return_value(const TreeWalkSpec& spec, double z, const Eigen::VectorXd& w);
// Throws Diverged if no fixed point exists at z.
double first_return_value(const TreeWalkSpec& spec, double z,
                          const UpperOptions& options = {});

struct UpperBoundResult {
  double R_F = 0.0;
  double F_at_RF = 0.0;
  double R_Gk = 0.0;
  double rho_T = 0.0;
  std::string branch;          // "R_F" or "z0"
  int root_type = 0;
  double fold_residual = 0.0;
  double jacobian_radius_at_RF = 0.0;
  double min_null_vector = 0.0;
  bool used_fallback = false;
  // Another reduced type with r = 2 used as a second root, when one exists.
  std::optional<int> second_root;
  bool second_root_agrees = true;
};

UpperBoundResult upper_bound(const ReducedAutomaton& ra, int root_type,
                             const UpperOptions& options = {});

std::string upper_bound_to_json(const std::optional<GroupParams>& params,
                                const UpperBoundResult& r, const UpperOptions& options);

}  // namespace hypcone
