#include "hypcone/toolkit.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace hypcone {

namespace {

constexpr const char* kCacheVersion = "v1";

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed10(double x) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(10);
  out << x;
  return out.str();
}

}  // namespace

std::string Curvature::to_string() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

Curvature curvature(const GroupParams& params) {
  const long long l = params.l(), m = params.m(), n = params.n();
  // -(1 - 1/l - 1/m - 1/n) = (mn + ln + lm - lmn) / lmn
  long long num = m * n + l * n + l * m - l * m * n;
  long long den = l * m * n;
  const long long g = std::gcd(num, den);
  return {num / g, den / g};
}

void RunConfig::validate() const {
  const double tols[] = {upper.bisection_width, upper.fold_tolerance, upper.fallback_width,
                         upper.z0_width, eigen_residual};
  for (double t : tols) {
    if (!(t > 0)) throw Error(ErrorCode::kInvalidParameter, "tolerances must be positive");
  }
  if (oracle_horizon < 0) throw Error(ErrorCode::kInvalidParameter, "negative horizon");
  if (radius_override < 0 || depth_override < 0) {
    throw Error(ErrorCode::kInvalidParameter, "overrides must be nonnegative");
  }
}

bool BoundReport::ok() const {
  return diagnostics.empty() && (!params || counts_match) && invariants_ok &&
         sphere_recursion_ok && lower <= upper && envelope <= upper + 1e-12;
}

std::vector<GroupParams> table_groups() {
  return {GroupParams::make(2, 3, 7), GroupParams::make(2, 4, 5), GroupParams::make(3, 3, 4),
          GroupParams::make(2, 5, 5), GroupParams::make(2, 6, 6), GroupParams::make(3, 4, 4),
          GroupParams::make(3, 4, 5), GroupParams::make(4, 4, 4), GroupParams::make(3, 5, 7),
          GroupParams::make(7, 7, 7)};
}

CayleyBall cached_ball(const GroupParams& params, int radius, const RunConfig& config) {
  if (config.cache_dir.empty()) return build_ball(params, radius);
  namespace fs = std::filesystem;
  const fs::path path = fs::path(config.cache_dir) /
                        ("ball_" + std::to_string(params.l()) + "_" +
                         std::to_string(params.m()) + "_" + std::to_string(params.n()) + "_r" +
                         std::to_string(radius) + "_" + kCacheVersion + ".bin");
  if (std::ifstream in{path, std::ios::binary}) {
    try {
      CayleyBall ball = read_ball(in);
      if (ball.params() == params && ball.radius() == radius) return ball;
    } catch (const Error&) {
      // Stale or truncated entry: rebuild below.
    }
  }
  CayleyBall ball = build_ball(params, radius);
  fs::create_directories(config.cache_dir);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    write_ball(out, ball);
  }
  fs::rename(tmp, path);
  return ball;
}

namespace {

// Upper, lower and diagnostics shared by both entry points.
void run_bounds(BoundReport& rep, const ConeTypeAutomaton& a, const ReducedAutomaton& ra,
                int d, const RunConfig& config) {
  rep.T_size = ra.size();
  rep.root_type = config.root_type ? *config.root_type : default_root_type(ra, a.root_type);
  auto t0 = std::chrono::steady_clock::now();
  try {
    rep.upper_detail = upper_bound(ra, rep.root_type, config.upper);
    rep.upper = rep.upper_detail->rho_T;
    if (rep.upper_detail->used_fallback) {
      rep.diagnostics.push_back("upper: fold Newton failed, bisection fallback used");
    }
  } catch (const Error& e) {
    rep.diagnostics.push_back(std::string("upper: ") + e.what());
  }
  rep.seconds_upper = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  try {
    rep.lower_detail = lower_bound(ra, d);
    rep.lower = rep.lower_detail->bound;
  } catch (const Error& e) {
    rep.diagnostics.push_back(std::string("lower: ") + e.what());
  }
  rep.seconds_lower = seconds_since(t0);
}

bool sphere_recursion_holds(const CayleyBall& ball, const ConeTypeAutomaton& a) {
  const auto measured = ball.sphere_sizes();
  const auto predicted = predicted_spheres(a, ball.radius());
  for (int k = 0; k <= ball.radius(); ++k) {
    const auto& s = predicted[static_cast<std::size_t>(k)];
    const long long total = std::accumulate(s.begin(), s.end(), 0LL);
    if (total != static_cast<long long>(measured[static_cast<std::size_t>(k)])) return false;
  }
  // Per type where vertex types are known.
  for (int k = 0; k <= ball.radius() - a.stabilization_depth; ++k) {
    std::vector<long long> census(static_cast<std::size_t>(a.K_total), 0);
    for (VertexId v = ball.sphere_begin(k); v < ball.sphere_begin(k + 1); ++v) {
      ++census[static_cast<std::size_t>(a.type_of[v])];
    }
    if (census != predicted[static_cast<std::size_t>(k)]) return false;
  }
  return true;
}

}  // namespace

BoundReport run_group(const GroupParams& params, const RunConfig& config) {
  config.validate();
  BoundReport rep;
  rep.params = params;
  rep.group = params.name();
  rep.curv = curvature(params);

  auto t0 = std::chrono::steady_clock::now();
  AutomatonOptions opts;
  if (config.depth_override > 0) opts.start_depth = config.depth_override;
  opts.radius_override = config.radius_override;
  opts.build = [&config](const GroupParams& p, int radius) {
    return cached_ball(p, radius, config);
  };
  CayleyBall ball(params, 0);
  ConeTypeAutomaton a;
  try {
    a = compute_automaton(params, opts, &ball);
  } catch (const Error& e) {
    rep.diagnostics.push_back(std::string("automaton: ") + e.what());
    rep.seconds_automaton = seconds_since(t0);
    return rep;
  }
  rep.seconds_automaton = seconds_since(t0);
  rep.K_total = a.K_total;
  rep.stabilization_depth = a.stabilization_depth;
  rep.ball_radius = a.ball_radius;
  const VerificationReport vr = verify_counts(params, a);
  rep.case_label = vr.case_label;
  rep.expected_K = vr.expected;
  rep.counts_match = vr.matches();

  const BallInvariantReport inv = check_invariants(ball, config.check_determinants);
  rep.invariants_ok = inv.ok();
  for (const auto& v : inv.violations) rep.diagnostics.push_back("ball: " + v);
  try {
    rep.sphere_recursion_ok = sphere_recursion_holds(ball, a);
  } catch (const Error& e) {
    rep.sphere_recursion_ok = false;
    rep.diagnostics.push_back(std::string("spheres: ") + e.what());
  }

  ReducedAutomaton ra;
  try {
    ra = reduce(a);
  } catch (const Error& e) {
    rep.diagnostics.push_back(std::string("reduce: ") + e.what());
    return rep;
  }
  run_bounds(rep, a, ra, 3, config);

  try {
    const int horizon = config.oracle_horizon;
    if (ball.radius() >= horizon) {
      rep.envelope = empirical_envelope(return_probabilities(ball, horizon, config.oracle_mode));
    } else {
      const CayleyBall wide = cached_ball(params, horizon, config);
      rep.envelope = empirical_envelope(return_probabilities(wide, horizon, config.oracle_mode));
    }
  } catch (const Error& e) {
    rep.diagnostics.push_back(std::string("oracle: ") + e.what());
  }
  return rep;
}

std::vector<BoundReport> run_table(const RunConfig& config) {
  std::vector<std::future<BoundReport>> jobs;
  for (const GroupParams& p : table_groups()) {
    jobs.push_back(std::async(std::launch::async, [p, &config] { return run_group(p, config); }));
  }
  std::vector<BoundReport> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

BoundReport run_from_automaton(const std::string& text, int d, const RunConfig& config) {
  config.validate();
  ImportedAutomaton imported = automaton_from_json(text);
  BoundReport rep;
  rep.params = imported.automaton.params;
  rep.group = rep.params ? rep.params->name() : "imported";
  if (rep.params) {
    rep.curv = curvature(*rep.params);
    const VerificationReport vr = verify_counts(*rep.params, imported.automaton);
    rep.case_label = vr.case_label;
    rep.expected_K = vr.expected;
    rep.counts_match = vr.matches();
  }
  rep.K_total = imported.automaton.K_total;
  run_bounds(rep, imported.automaton, imported.reduced, d, config);
  return rep;
}

namespace {

nlohmann::ordered_json report_doc(const BoundReport& r) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format"] = "bnd-1";
  doc["group"] = r.group;
  doc["params"] = r.params ? ordered_json{r.params->l(), r.params->m(), r.params->n()}
                           : ordered_json();
  doc["K_total"] = r.K_total;
  doc["T_size"] = r.T_size;
  doc["case"] = r.case_label;
  doc["expected_K"] = r.expected_K;
  doc["counts_match"] = r.counts_match;
  doc["stabilization_depth"] = r.stabilization_depth;
  doc["ball_radius"] = r.ball_radius;
  doc["root_type"] = r.root_type;
  doc["lower"] = r.lower;
  doc["upper"] = r.upper;
  doc["curvature"] = r.curv ? ordered_json{{"num", r.curv->num}, {"den", r.curv->den}}
                            : ordered_json();
  doc["envelope"] = r.envelope;
  if (r.upper_detail) {
    const auto& u = *r.upper_detail;
    doc["upper_detail"] = {{"R_F", u.R_F},           {"F_at_RF", u.F_at_RF},
                           {"branch", u.branch},     {"R_Gk", u.R_Gk},
                           {"fold_residual", u.fold_residual},
                           {"jacobian_radius", u.jacobian_radius_at_RF},
                           {"fallback", u.used_fallback}};
  }
  if (r.lower_detail) {
    doc["lower_detail"] = {{"nu", r.lower_detail->nu}, {"lambda", r.lower_detail->lambda},
                           {"d", r.lower_detail->d}};
  }
  doc["invariants_ok"] = r.invariants_ok;
  doc["sphere_recursion_ok"] = r.sphere_recursion_ok;
  doc["diagnostics"] = r.diagnostics;
  doc["ok"] = r.ok();
  return doc;
}

}  // namespace

std::string report_to_json(const BoundReport& r) { return report_doc(r).dump(2); }

std::string reports_to_json(const std::vector<BoundReport>& rs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rs) arr.push_back(report_doc(r));
  return arr.dump(2);
}

std::string reports_to_csv(const std::vector<BoundReport>& rs) {
  std::ostringstream out;
  out << "group,K_total,T_size,case,lower,upper,curvature_num,curvature_den,envelope\n";
  for (const auto& r : rs) {
    out << '"' << r.group << '"' << ',' << r.K_total << ',' << r.T_size << ','
        << r.case_label << ',' << fixed10(r.lower) << ',' << fixed10(r.upper) << ','
        << (r.curv ? std::to_string(r.curv->num) : "") << ','
        << (r.curv ? std::to_string(r.curv->den) : "") << ',' << fixed10(r.envelope) << '\n';
  }
  return out.str();
}

std::string reports_to_markdown(const std::vector<BoundReport>& rs) {
  std::ostringstream out;
  out << "| Group | Lower bound | Upper bound | Curvature |\n";
  out << "|---|---|---|---|\n";
  for (const auto& r : rs) {
    std::string kappa = "";
    if (r.curv) {
      const long long a = r.curv->num < 0 ? -r.curv->num : r.curv->num;
      kappa = std::string(r.curv->num < 0 ? "-" : "") + (a == 1 ? "" : std::to_string(a)) +
              "π/" + std::to_string(r.curv->den);
    }
    std::string name = r.group;
    if (r.params) {
      name = "Δ(" + std::to_string(r.params->l()) + "," + std::to_string(r.params->m()) + "," +
             std::to_string(r.params->n()) + ")";
    }
    out << "| " << name << " | " << fixed10(r.lower) << " | " << fixed10(r.upper) << " | "
        << kappa << " |\n";
  }
  return out.str();
}

}  // namespace hypcone
