#include <doctest.h>

#include <array>
#include <cmath>

#include "hypcone/spectral_upper.hpp"

using namespace hypcone;

namespace {

ReducedAutomaton tree() {
  ReducedAutomaton ra;
  ra.types = {0};
  ra.M = {{2}};
  ra.d = {3};
  ra.r = {1};
  ra.primitivity_exponent = 1;
  return ra;
}

ReducedAutomaton reduced(int l, int m, int n) {
  return reduce(compute_automaton(GroupParams::make(l, m, n)));
}

}  // namespace

TEST_CASE("tree walk: minimal fixed point and fold") {
  const TreeWalkSpec spec = tree_walk_spec(tree(), 0);
  // 2w^2 - 3w + 1 = 0 at z = 1; the smaller root is 1/2.
  const auto fp = minimal_fixed_point(spec, 1.0);
  REQUIRE(fp.has_value());
  CHECK(fp->w[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fp->residual < 1e-12);

  const CriticalRadius cr = critical_radius(spec);
  CHECK(cr.R_F == doctest::Approx(3.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
  CHECK_FALSE(cr.used_fallback);
  CHECK(cr.bracket_low <= cr.R_F);
  CHECK(cr.R_F <= cr.bracket_high + 1e-6);
  CHECK(cr.u.sum() == doctest::Approx(1.0));
  CHECK(first_return_value(spec, cr.R_F, cr.w) == doctest::Approx(0.5).epsilon(1e-10));

  const UpperBoundResult ub = upper_bound(tree(), 0);
  CHECK(ub.branch == "R_F");
  CHECK(ub.rho_T == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-12));
  CHECK(ub.jacobian_radius_at_RF == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("tree-walk transition probabilities are stochastic") {
  for (auto [l, m, n] : {std::array{4, 4, 4}, std::array{2, 3, 7}, std::array{3, 4, 5}}) {
    const ReducedAutomaton ra = reduced(l, m, n);
    for (int t : ra.types) {
      const TreeWalkSpec spec = tree_walk_spec(ra, t);
      for (double defect : stochasticity_defects(spec)) CHECK(std::abs(defect) < 1e-15);
    }
  }
}

TEST_CASE("minimal fixed point grows with z and diverges past R_F") {
  const ReducedAutomaton ra = reduced(4, 4, 4);
  const TreeWalkSpec spec = tree_walk_spec(ra, default_root_type(ra));
  const CriticalRadius cr = critical_radius(spec);
  Eigen::VectorXd previous = Eigen::VectorXd::Zero(spec.size());
  for (double z = 0.1; z < cr.R_F; z += 0.1) {
    const auto fp = minimal_fixed_point(spec, z);
    REQUIRE(fp.has_value());
    CHECK((fp->w.array() >= previous.array()).all());
    CHECK(fp->jacobian_spectral_radius < 1.0);
    CHECK((phi(spec, z, fp->w) - fp->w).lpNorm<Eigen::Infinity>() < 1e-12);
    previous = fp->w;
  }
  CHECK_FALSE(minimal_fixed_point(spec, cr.R_F * 1.001).has_value());
  CHECK_THROWS_AS(first_return_value(spec, cr.R_F * 1.01), Error);
}

TEST_CASE("Jacobian matches finite differences") {
  const ReducedAutomaton ra = reduced(3, 3, 4);
  const TreeWalkSpec spec = tree_walk_spec(ra, default_root_type(ra));
  Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(spec.size(), 0.2, 0.6);
  const double z = 0.9, h = 1e-7;
  const Eigen::MatrixXd J = phi_jacobian(spec, z, w);
  for (int j = 0; j < spec.size(); ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(spec.size());
    e[j] = h;
    const Eigen::VectorXd col = (phi(spec, z, w + e) - phi(spec, z, w - e)) / (2 * h);
    CHECK((col - J.col(j)).lpNorm<Eigen::Infinity>() < 1e-7);
  }
}

TEST_CASE("Delta(4,4,4) critical radius is a fold of the fixed-point system") {
  const ReducedAutomaton ra = reduced(4, 4, 4);
  const int root = default_root_type(ra);
  CHECK(ra.r[static_cast<std::size_t>(ra.local_index(root))] == 2);
  const UpperBoundResult ub = upper_bound(ra, root);
  CHECK(ub.R_F == doctest::Approx(1.0321531591).epsilon(1e-9));
  CHECK(ub.F_at_RF < 1.0);
  CHECK(ub.branch == "R_F");
  CHECK(ub.fold_residual < 1e-12);
  CHECK(ub.min_null_vector > 0.0);
  CHECK(ub.jacobian_radius_at_RF == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(ub.second_root_agrees);
}

TEST_CASE("root choice and its errors") {
  const ReducedAutomaton ra = reduced(4, 4, 4);
  CHECK(ra.local_index(default_root_type(ra)) >= 0);
  try {
    tree_walk_spec(ra, 0);
    FAIL("expected InvalidRoot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidRoot);
  }
  CHECK(default_root_type(tree()) == 0);
  CHECK(spectral_radius(Eigen::Matrix2d{{0, 2}, {2, 0}}) == doctest::Approx(2.0));
}

TEST_CASE("upper bound JSON carries the options") {
  const UpperOptions options;
  const std::string json = upper_bound_to_json(std::nullopt, upper_bound(tree(), 0), options);
  CHECK(json.find("\"rho_T\"") != std::string::npos);
  CHECK(json.find("\"bisection_width\"") != std::string::npos);
}
