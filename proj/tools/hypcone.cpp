// Command-line front end: balls, cone types, spectral bounds, the reference
// table, curvature and imported automata.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hypcone/certificate.hpp"
#include "hypcone/toolkit.hpp"

namespace {

using namespace hypcone;

enum class Format { kText, kJson, kCsv, kDot, kMarkdown };

struct Globals {
  bool json = false, csv = false, dot = false, markdown = false;
  double tol_bisection = 1e-6;
  double tol_fold = 1e-13;
  double tol_fallback = 1e-12;
  double tol_eigen = 1e-12;
  int radius = 0;
  int depth = 0;
  int root_type = -1;
  std::string oracle_mode = "exact";
  int oracle_horizon = 20;
  std::string cache_dir;

  Format format() const {
    if (json) return Format::kJson;
    if (csv) return Format::kCsv;
    if (dot) return Format::kDot;
    if (markdown) return Format::kMarkdown;
    return Format::kText;
  }

  RunConfig config() const {
    RunConfig c;
    c.upper.bisection_width = tol_bisection;
    c.upper.fold_tolerance = tol_fold;
    c.upper.fallback_width = tol_fallback;
    c.eigen_residual = tol_eigen;
    c.radius_override = radius;
    c.depth_override = depth;
    if (root_type >= 0) c.root_type = root_type;
    c.oracle_mode = oracle_mode == "double" ? OracleMode::kDouble : OracleMode::kExact;
    c.oracle_horizon = oracle_horizon;
    c.cache_dir = cache_dir;
    return c;
  }
};

void print_text(const BoundReport& r) {
  std::cout.setf(std::ios::fixed);
  std::cout.precision(10);
  std::cout << r.group << "\n"
            << "  cone types      " << r.K_total;
  if (r.params) {
    std::cout << " (case " << r.case_label << ", expected " << r.expected_K << ")";
  }
  std::cout << "\n  reduced types   " << r.T_size << "\n"
            << "  root type       " << r.root_type << "\n"
            << "  lower bound     " << r.lower << "\n"
            << "  upper bound     " << r.upper << "\n";
  if (r.upper_detail) {
    std::cout << "  R_F             " << r.upper_detail->R_F << " (F(R_F) = "
              << r.upper_detail->F_at_RF << ", branch " << r.upper_detail->branch << ")\n";
  }
  if (r.curv) std::cout << "  curvature       " << r.curv->to_string() << " pi\n";
  if (r.params) std::cout << "  envelope        " << r.envelope << "\n";
  for (const auto& d : r.diagnostics) std::cout << "  ! " << d << "\n";
  std::cout << "  status          " << (r.ok() ? "ok" : "FAILED") << "\n";
}

void emit_reports(const std::vector<BoundReport>& rs, Format f) {
  switch (f) {
    case Format::kJson:
      std::cout << (rs.size() == 1 ? report_to_json(rs[0]) : reports_to_json(rs)) << "\n";
      break;
    case Format::kCsv:
      std::cout << reports_to_csv(rs);
      break;
    case Format::kMarkdown:
      std::cout << reports_to_markdown(rs);
      break;
    default:
      for (const auto& r : rs) print_text(r);
  }
}

GroupParams params_of(const std::vector<int>& v) { return GroupParams::make(v[0], v[1], v[2]); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kSchemaError, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cone-type automata and spectral-radius bounds for hyperbolic triangle groups"};
  app.require_subcommand(1);
  Globals g;
  auto* fmt = app.add_option_group("format");
  fmt->add_flag("--json", g.json, "JSON output");
  fmt->add_flag("--csv", g.csv, "CSV output");
  fmt->add_flag("--dot", g.dot, "Graphviz output (cone-types)");
  fmt->add_flag("--markdown", g.markdown, "Markdown table (bounds, table)");
  fmt->require_option(0, 1);
  app.add_option("--tol-bisection", g.tol_bisection, "Width of the convergence bracket");
  app.add_option("--tol-fold", g.tol_fold, "Residual target of the fold Newton solve");
  app.add_option("--tol-fallback", g.tol_fallback, "Bisection width if Newton fails");
  app.add_option("--tol-eigen", g.tol_eigen, "Eigenvector residual");
  app.add_option("--radius", g.radius, "Ball radius override");
  app.add_option("--depth", g.depth, "Starting cone depth override");
  app.add_option("--root-type", g.root_type, "Root type for the first-return function");
  app.add_option("--oracle-mode", g.oracle_mode, "Return probabilities: exact or double")
      ->check(CLI::IsMember({"exact", "double"}));
  app.add_option("--oracle-horizon", g.oracle_horizon, "Walk length for the envelope");
  app.add_option("--cache-dir", g.cache_dir, "Directory memoizing Cayley balls");
  app.fallthrough();

  std::vector<int> triple;
  auto add_triple = [&triple](CLI::App* sub) {
    sub->add_option("exponents", triple, "Triangle group exponents l m n")->expected(3)->required();
  };

  auto* ball_cmd = app.add_subcommand("ball", "Build a ball of the Cayley graph");
  add_triple(ball_cmd);
  std::string mode = "dihedral";
  ball_cmd->add_option("--mode", mode, "Identification: dihedral or matrix")
      ->check(CLI::IsMember({"dihedral", "matrix"}));

  auto* cones_cmd = app.add_subcommand("cone-types", "Extract the cone-type automaton");
  add_triple(cones_cmd);
  bool reduced_only = false;
  cones_cmd->add_flag("--reduced", reduced_only, "Emit only the reduced automaton (DOT)");

  auto* bounds_cmd = app.add_subcommand("bounds", "Spectral-radius bounds for one group");
  add_triple(bounds_cmd);
  bool with_certificate = false;
  bounds_cmd->add_flag("--certify", with_certificate,
                       "Also certify R_F algebraically (at most 6 reduced types)");

  auto* table_cmd = app.add_subcommand("table", "Bounds for the ten reference groups");

  auto* curv_cmd = app.add_subcommand("curvature", "Exact combinatorial curvature / pi");
  add_triple(curv_cmd);

  auto* import_cmd = app.add_subcommand("from-automaton", "Bounds from a cta-1 automaton file");
  std::string path;
  int degree = 3;
  import_cmd->add_option("file", path, "Automaton JSON")->required();
  import_cmd->add_option("--degree", degree, "Common vertex degree");

  CLI11_PARSE(app, argc, argv);

  try {
    const Format f = g.format();
    const RunConfig config = g.config();
    config.validate();

    if (*ball_cmd) {
      const GroupParams p = params_of(triple);
      BallOptions opts;
      opts.mode = mode == "matrix" ? IdentityMode::kMatrixKey : IdentityMode::kDihedralClosure;
      const int radius = g.radius > 0 ? g.radius : 2 * p.max_exponent();
      const CayleyBall ball = g.cache_dir.empty() || opts.mode == IdentityMode::kMatrixKey
                                  ? build_ball(p, radius, opts)
                                  : cached_ball(p, radius, config);
      const BallInvariantReport inv = check_invariants(ball);
      if (f == Format::kJson) {
        std::cout << ball_to_json(ball) << "\n";
      } else if (f == Format::kCsv) {
        std::cout << ball_to_csv(ball);
      } else {
        std::cout << p.name() << " ball of radius " << radius << ": " << ball.size()
                  << " vertices\nsphere sizes:";
        for (auto s : ball.sphere_sizes()) std::cout << " " << s;
        std::cout << "\ninvariants: " << (inv.ok() ? "ok" : "VIOLATED") << "\n";
      }
      for (const auto& v : inv.violations) std::cerr << "invariant: " << v << "\n";
      return inv.ok() ? 0 : 1;
    }

    if (*cones_cmd) {
      const GroupParams p = params_of(triple);
      AutomatonOptions opts;
      if (g.depth > 0) opts.start_depth = g.depth;
      opts.radius_override = g.radius;
      opts.build = [&config](const GroupParams& q, int r) { return cached_ball(q, r, config); };
      const ConeTypeAutomaton a = compute_automaton(p, opts);
      const ReducedAutomaton ra = reduce(a);
      const VerificationReport vr = verify_counts(p, a);
      if (f == Format::kJson) {
        std::cout << automaton_to_json(a, ra) << "\n";
      } else if (f == Format::kDot) {
        std::cout << (reduced_only ? to_digraph_dot(ra) : to_digraph_dot(a));
      } else {
        std::cout << p.name() << ": " << a.K_total << " cone types (case " << vr.case_label
                  << ", expected " << vr.expected << "), " << ra.size()
                  << " reduced, primitivity exponent " << ra.primitivity_exponent
                  << ", stable at depth " << a.stabilization_depth << " in a ball of radius "
                  << a.ball_radius << "\n";
        for (int i = 0; i < a.K_total; ++i) {
          const auto ii = static_cast<std::size_t>(i);
          std::cout << (ra.local_index(i) >= 0 ? "* " : "  ") << i << ":";
          for (int m : a.M[ii]) std::cout << " " << m;
          std::cout << "   r=" << a.r[ii] << "\n";
        }
      }
      return vr.matches() ? 0 : 1;
    }

    if (*bounds_cmd) {
      const GroupParams p = params_of(triple);
      const BoundReport r = run_group(p, config);
      emit_reports({r}, f);
      bool certified = true;
      if (with_certificate && r.upper_detail) {
        AutomatonOptions opts;
        opts.build = [&config](const GroupParams& q, int rad) {
          return cached_ball(q, rad, config);
        };
        const ReducedAutomaton ra = reduce(compute_automaton(p, opts));
        try {
          const AlgebraicCertificate cert =
              certify_automaton(ra, r.root_type, r.upper_detail->R_F);
          if (f == Format::kJson) {
            std::cout << certificate_to_json(p.name(), cert) << "\n";
          } else {
            std::cout << "  certificate     R_F matches a " << cert.report->match.source
                      << " root near " << cert.report->match.interval.approx << "\n";
          }
        } catch (const Error& e) {
          std::cerr << "certificate: " << e.what() << "\n";
          certified = false;
        }
      }
      return r.ok() && certified ? 0 : 1;
    }

    if (*table_cmd) {
      const auto rs = run_table(config);
      emit_reports(rs, f == Format::kText ? Format::kMarkdown : f);
      bool ok = true;
      for (const auto& r : rs) {
        ok = ok && r.ok();
        for (const auto& d : r.diagnostics) std::cerr << r.group << ": " << d << "\n";
      }
      return ok ? 0 : 1;
    }

    if (*curv_cmd) {
      const Curvature c = curvature(params_of(triple));
      if (f == Format::kJson) {
        std::cout << "{\"num\": " << c.num << ", \"den\": " << c.den << "}\n";
      } else {
        std::cout << c.to_string() << "\n";
      }
      return 0;
    }

    if (*import_cmd) {
      const BoundReport r = run_from_automaton(slurp(path), degree, config);
      emit_reports({r}, f);
      return r.ok() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
