#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypcone/cone_automaton.hpp"
#include "hypcone/spectral_lower.hpp"
#include "hypcone/spectral_upper.hpp"
#include "hypcone/walk_oracle.hpp"

namespace hypcone {

// Combinatorial curvature kappa = q * pi with q = -(1 - 1/l - 1/m - 1/n).
struct Curvature {
  long long num = 0;
  long long den = 1;
  std::string to_string() const;          // "-1/42"
  friend bool operator==(const Curvature&, const Curvature&) = default;
};

Curvature curvature(const GroupParams& params);

struct RunConfig {
  UpperOptions upper;
  double eigen_residual = 1e-12;
  int radius_override = 0;
  int depth_override = 0;
  std::optional<int> root_type;
  OracleMode oracle_mode = OracleMode::kExact;
  int oracle_horizon = 20;
  std::string cache_dir;                  // empty: no ball cache
  bool check_determinants = true;

  // Throws InvalidParameter on nonpositive tolerances or horizons.
  void validate() const;
};

struct BoundReport {
  std::optional<GroupParams> params;
  std::string group;
  int K_total = 0;
  int T_size = 0;
  std::string case_label;
  int expected_K = 0;
  bool counts_match = false;
  int stabilization_depth = 0;
  int ball_radius = 0;
  int root_type = -1;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<Curvature> curv;
  double envelope = 0.0;
  bool invariants_ok = true;
  bool sphere_recursion_ok = true;
  std::optional<UpperBoundResult> upper_detail;
  std::optional<LowerBoundResult> lower_detail;
  std::vector<std::string> diagnostics;   // "stage: message", one per failure
  // Wall time per stage, seconds. Not serialized, so reports stay reproducible.
  double seconds_automaton = 0.0;
  double seconds_upper = 0.0;
  double seconds_lower = 0.0;

  bool ok() const;
};

// The ten triangle groups of the reference table, in decreasing curvature.
std::vector<GroupParams> table_groups();

BoundReport run_group(const GroupParams& params, const RunConfig& config = {});
std::vector<BoundReport> run_table(const RunConfig& config = {});
// `text` is a "cta-1" document. Skips ball and extraction stages.
BoundReport run_from_automaton(const std::string& text, int d, const RunConfig& config = {});

// Ball through the optional on-disk cache keyed by (params, radius, version).
CayleyBall cached_ball(const GroupParams& params, int radius, const RunConfig& config);

std::string report_to_json(const BoundReport& r);                 // "bnd-1"
std::string reports_to_json(const std::vector<BoundReport>& rs);
std::string reports_to_csv(const std::vector<BoundReport>& rs);
std::string reports_to_markdown(const std::vector<BoundReport>& rs);

}  // namespace hypcone
