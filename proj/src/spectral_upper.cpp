#include "hypcone/spectral_upper.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <json.hpp>

namespace hypcone {

TreeWalkSpec tree_walk_spec(const ReducedAutomaton& ra, int root_type) {
  const int local = ra.local_index(root_type);
  if (local < 0) {
    throw Error(ErrorCode::kInvalidRoot,
                "type " + std::to_string(root_type) + " is not in the reduced set");
  }
  TreeWalkSpec spec;
  spec.types = ra.types;
  spec.M = ra.M;
  spec.d = ra.d;
  spec.r = ra.r;
  spec.root_type = root_type;
  spec.root_local = local;
  for (int i = 0; i < ra.size(); ++i) {
    const auto ii = static_cast<std::size_t>(i);
    spec.p_back.push_back(static_cast<double>(ra.r[ii]) / ra.d[ii]);
    spec.p_step.push_back(1.0 / ra.d[ii]);
  }
  for (double defect : stochasticity_defects(spec)) {
    if (std::abs(defect) > 1e-12) {
      throw Error(ErrorCode::kSchemaError, "transition probabilities do not sum to one");
    }
  }
  return spec;
}

std::vector<double> stochasticity_defects(const TreeWalkSpec& spec) {
  std::vector<double> out;
  for (std::size_t i = 0; i < spec.M.size(); ++i) {
    double total = spec.p_back[i];
    for (int m : spec.M[i]) total += m * spec.p_step[i];
    out.push_back(total - 1.0);
  }
  return out;
}

int default_root_type(const ReducedAutomaton& ra, std::optional<int> automaton_root) {
  for (int i = 0; i < ra.size(); ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const int successors = ra.d[ii] - ra.r[ii];
    if (ra.r[ii] == 2 && successors == 1) return ra.types[ii];
  }
  for (int i = 0; i < ra.size(); ++i) {
    if (ra.r[static_cast<std::size_t>(i)] == 2) return ra.types[static_cast<std::size_t>(i)];
  }
  if (automaton_root && ra.local_index(*automaton_root) >= 0) return *automaton_root;
  return ra.types.front();
}

Eigen::VectorXd phi(const TreeWalkSpec& spec, double z, const Eigen::VectorXd& w) {
  const int K = spec.size();
  Eigen::VectorXd out(K);
  for (int i = 0; i < K; ++i) {
    double mw = 0.0;
    const auto& row = spec.M[static_cast<std::size_t>(i)];
    for (int j = 0; j < K; ++j) mw += row[static_cast<std::size_t>(j)] * w(j);
    out(i) = z * (spec.p_back[static_cast<std::size_t>(i)] +
                  spec.p_step[static_cast<std::size_t>(i)] * w(i) * mw);
  }
  return out;
}

Eigen::MatrixXd phi_jacobian(const TreeWalkSpec& spec, double z, const Eigen::VectorXd& w) {
  const int K = spec.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(K, K);
  for (int i = 0; i < K; ++i) {
    const auto& row = spec.M[static_cast<std::size_t>(i)];
    const double p = z * spec.p_step[static_cast<std::size_t>(i)];
    double mw = 0.0;
    for (int j = 0; j < K; ++j) mw += row[static_cast<std::size_t>(j)] * w(j);
    for (int k = 0; k < K; ++k) J(i, k) = p * row[static_cast<std::size_t>(k)] * w(i);
    J(i, i) += p * mw;
  }
  return J;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 1) return std::abs(m(0, 0));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

// Newton polish of Phi(w) = w at fixed z; the fixed point is regular below
// the fold, so two or three steps reach machine precision.
void polish(const TreeWalkSpec& spec, double z, Eigen::VectorXd& w) {
  const int K = spec.size();
  for (int step = 0; step < 8; ++step) {
    const Eigen::VectorXd g = phi(spec, z, w) - w;
    if (g.lpNorm<Eigen::Infinity>() < 1e-16) break;
    const Eigen::MatrixXd jac = phi_jacobian(spec, z, w) - Eigen::MatrixXd::Identity(K, K);
    const Eigen::VectorXd next = w - jac.fullPivLu().solve(g);
    if (!next.allFinite()) break;
    const double before = g.lpNorm<Eigen::Infinity>();
    const double after = (phi(spec, z, next) - next).lpNorm<Eigen::Infinity>();
    if (!(after < before)) break;
    w = next;
  }
}

}  // namespace

std::optional<FixedPointSolution> minimal_fixed_point(const TreeWalkSpec& spec, double z,
                                                      const UpperOptions& options) {
  if (!(z > 0)) throw Error(ErrorCode::kInvalidParameter, "z must be positive");
  const int K = spec.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(K);
  for (long it = 1; it <= options.max_iterations; ++it) {
    Eigen::VectorXd next = phi(spec, z, w);
    if (!next.allFinite() || next.maxCoeff() > options.divergence_cap) return std::nullopt;
    const double step = (next - w).lpNorm<Eigen::Infinity>();
    w = std::move(next);
    if (step <= 1e-15 * std::max(1.0, w.lpNorm<Eigen::Infinity>())) {
      FixedPointSolution out;
      out.z = z;
      out.iterations = it;
      polish(spec, z, w);
      out.w = w;
      out.residual = (phi(spec, z, w) - w).lpNorm<Eigen::Infinity>();
      out.jacobian_spectral_radius = spectral_radius(phi_jacobian(spec, z, w));
      return out;
    }
  }
  return std::nullopt;
}

namespace {

struct FoldSolve {
  bool ok = false;
  double z = 0.0;
  Eigen::VectorXd w, u;
  double residual = 0.0;
  int iterations = 0;
};

Eigen::VectorXd fold_residual(const TreeWalkSpec& spec, double z, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& u) {
  const int K = spec.size();
  Eigen::VectorXd g(2 * K + 1);
  g.head(K) = phi(spec, z, w) - w;
  g.segment(K, K) = phi_jacobian(spec, z, w) * u - u;
  g(2 * K) = u.sum() - 1.0;
  return g;
}

FoldSolve fold_newton(const TreeWalkSpec& spec, double z, Eigen::VectorXd w,
                      Eigen::VectorXd u, double tolerance) {
  const int K = spec.size();
  FoldSolve out;
  for (int it = 1; it <= 60; ++it) {
    const Eigen::VectorXd g = fold_residual(spec, z, w, u);
    out.residual = g.lpNorm<Eigen::Infinity>();
    out.iterations = it;
    if (out.residual <= tolerance) {
      out.ok = true;
      break;
    }
    const Eigen::MatrixXd J = phi_jacobian(spec, z, w);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * K + 1, 2 * K + 1);
    jac.block(0, 0, K, K) = J - Eigen::MatrixXd::Identity(K, K);
    jac.block(K, K, K, K) = J - Eigen::MatrixXd::Identity(K, K);
    const Eigen::VectorXd Ju = J * u;
    for (int i = 0; i < K; ++i) {
      const auto& row = spec.M[static_cast<std::size_t>(i)];
      const double p = z * spec.p_step[static_cast<std::size_t>(i)];
      double mw = 0.0, mu = 0.0;
      for (int j = 0; j < K; ++j) {
        mw += row[static_cast<std::size_t>(j)] * w(j);
        mu += row[static_cast<std::size_t>(j)] * u(j);
      }
      jac(i, 2 * K) = spec.p_back[static_cast<std::size_t>(i)] +
                      spec.p_step[static_cast<std::size_t>(i)] * w(i) * mw;
      for (int k = 0; k < K; ++k) jac(K + i, k) = p * u(i) * row[static_cast<std::size_t>(k)];
      jac(K + i, i) += p * mu;
      jac(K + i, 2 * K) = Ju(i) / z;
    }
    jac.block(2 * K, K, 1, K).setOnes();
    const Eigen::VectorXd delta = jac.fullPivLu().solve(g);
    if (!delta.allFinite()) return out;
    w -= delta.head(K);
    u -= delta.segment(K, K);
    z -= delta(2 * K);
    if (it > 3 && out.residual < 1e-12) {
      // Rounding floor reached: accept once further steps stop helping.
      const double next = fold_residual(spec, z, w, u).lpNorm<Eigen::Infinity>();
      if (next >= out.residual && out.residual <= 10 * tolerance) {
        out.ok = true;
        break;
      }
    }
  }
  out.z = z;
  out.w = w;
  out.u = u;
  return out;
}

Eigen::VectorXd positive_null_vector(const Eigen::MatrixXd& J) {
  // Dominant eigenvector of the nonnegative Jacobian, normalized to sum 1.
  Eigen::EigenSolver<Eigen::MatrixXd> solver(J, true);
  Eigen::Index best = 0;
  solver.eigenvalues().cwiseAbs().maxCoeff(&best);
  Eigen::VectorXd v = solver.eigenvectors().col(best).real();
  return v / v.sum();
}

}  // namespace

CriticalRadius critical_radius(const TreeWalkSpec& spec, const UpperOptions& options) {
  double lo = 1.0, hi = 3.0;
  if (!minimal_fixed_point(spec, lo, options)) {
    throw Error(ErrorCode::kDiverged, "fixed-point iteration diverges at z = 1");
  }
  while (minimal_fixed_point(spec, hi, options)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorCode::kDiverged, "no divergence found for any z");
  }
  auto bisect = [&](double width) {
    while (hi - lo > width) {
      const double mid = 0.5 * (lo + hi);
      (minimal_fixed_point(spec, mid, options) ? lo : hi) = mid;
    }
  };
  bisect(options.bisection_width);

  CriticalRadius out;
  out.bracket_low = lo;
  out.bracket_high = hi;
  const FixedPointSolution seed = *minimal_fixed_point(spec, lo, options);
  const Eigen::VectorXd u0 = positive_null_vector(phi_jacobian(spec, lo, seed.w));
  const FoldSolve fold = fold_newton(spec, lo, seed.w, u0, options.fold_tolerance);
  const double slack = options.bisection_width;
  const bool plausible = fold.ok && fold.z >= lo - slack && fold.z <= hi + slack &&
                         (fold.w.array() > 0).all() && (fold.u.array() > 0).all();
  if (plausible) {
    out.R_F = fold.z;
    out.w = fold.w;
    out.u = fold.u;
    out.fold_residual = fold.residual;
    out.newton_iterations = fold.iterations;
    return out;
  }
  out.used_fallback = true;
  bisect(options.fallback_width);
  const FixedPointSolution last = *minimal_fixed_point(spec, lo, options);
  out.R_F = lo;
  out.w = last.w;
  out.u = positive_null_vector(phi_jacobian(spec, lo, last.w));
  out.fold_residual = fold_residual(spec, lo, out.w, out.u).lpNorm<Eigen::Infinity>();
  out.newton_iterations = fold.iterations;
  return out;
}

double first_return_value(const TreeWalkSpec& spec, double z, const Eigen::VectorXd& w) {
  const auto root = static_cast<std::size_t>(spec.root_local);
  double total = 0.0;
  for (int j = 0; j < spec.size(); ++j) total += spec.M[root][static_cast<std::size_t>(j)] * w(j);
  return total * z / spec.d[root];
}

double first_return_value(const TreeWalkSpec& spec, double z, const UpperOptions& options) {
  if (z == 0.0) return 0.0;
  const auto sol = minimal_fixed_point(spec, z, options);
  if (!sol) {
    throw Error(ErrorCode::kDiverged, "no fixed point at z = " + std::to_string(z));
  }
  return first_return_value(spec, z, sol->w);
}

UpperBoundResult upper_bound(const ReducedAutomaton& ra, int root_type,
                             const UpperOptions& options) {
  const TreeWalkSpec spec = tree_walk_spec(ra, root_type);
  const CriticalRadius cr = critical_radius(spec, options);
  UpperBoundResult out;
  out.root_type = root_type;
  out.R_F = cr.R_F;
  out.fold_residual = cr.fold_residual;
  out.used_fallback = cr.used_fallback;
  out.min_null_vector = cr.u.minCoeff();
  out.jacobian_radius_at_RF = spectral_radius(phi_jacobian(spec, cr.R_F, cr.w));
  out.F_at_RF = first_return_value(spec, cr.R_F, cr.w);
  if (out.F_at_RF <= 1.0) {
    out.R_Gk = cr.R_F;
    out.branch = "R_F";
    for (int i = 0; i < ra.size(); ++i) {
      const int t = ra.types[static_cast<std::size_t>(i)];
      if (t == root_type || ra.r[static_cast<std::size_t>(i)] != 2) continue;
      TreeWalkSpec other = spec;
      other.root_type = t;
      other.root_local = i;
      out.second_root = t;
      out.second_root_agrees = first_return_value(other, cr.R_F, cr.w) <= 1.0;
      break;
    }
  } else {
    // F increases continuously on (0, R_F), from 0 to F(R_F) > 1.
    double lo = 0.0, hi = cr.R_F;
    while (hi - lo > options.z0_width * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      (first_return_value(spec, mid, options) < 1.0 ? lo : hi) = mid;
    }
    out.R_Gk = 0.5 * (lo + hi);
    out.branch = "z0";
  }
  out.rho_T = 1.0 / out.R_Gk;
  return out;
}

std::string upper_bound_to_json(const std::optional<GroupParams>& params,
                                const UpperBoundResult& r, const UpperOptions& options) {
  nlohmann::ordered_json doc;
  doc["params"] = params ? nlohmann::ordered_json{params->l(), params->m(), params->n()}
                         : nlohmann::ordered_json();
  doc["root_type"] = r.root_type;
  doc["R_F"] = r.R_F;
  doc["F_at_RF"] = r.F_at_RF;
  doc["branch"] = r.branch;
  doc["R_Gk"] = r.R_Gk;
  doc["rho_T"] = r.rho_T;
  doc["tolerances"] = {{"bisection_width", options.bisection_width},
                       {"fold", options.fold_tolerance},
                       {"fallback_width", options.fallback_width}};
  doc["fold_residual"] = r.fold_residual;
  doc["fold_fallback"] = r.used_fallback;
  return doc.dump(2);
}

}  // namespace hypcone
