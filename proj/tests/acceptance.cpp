// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hypcone/certificate.hpp"
#include "hypcone/toolkit.hpp"

using namespace hypcone;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double x, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

struct Reference {
  std::array<int, 3> lmn;
  int K;
  double lower;
  double upper;
  Curvature curv;
};

const std::array<Reference, 10> kTable{{
    {{2, 3, 7}, 35, 0.9974952153, 0.9979155005, {-1, 42}},
    {{2, 4, 5}, 25, 0.9938397191, 0.9947303685, {-1, 20}},
    {{3, 3, 4}, 11, 0.9881065017, 0.9896253048, {-1, 12}},
    {{2, 5, 5}, 15, 0.9883635961, 0.9892337907, {-1, 10}},
    {{2, 6, 6}, 17, 0.9825162138, 0.9835349956, {-1, 6}},
    {{3, 4, 4}, 12, 0.9774836673, 0.9789017112, {-1, 6}},
    {{3, 4, 5}, 22, 0.9724491846, 0.9736926635, {-13, 60}},
    {{4, 4, 4}, 6, 0.9676175845, 0.9688484613, {-1, 4}},
    {{3, 5, 7}, 28, 0.9642297084, 0.9651708503, {-34, 105}},
    {{7, 7, 7}, 9, 0.9455418401, 0.9460344380, {-4, 7}},
}};

constexpr double kTol = 1e-8;

struct GroupRun {
  GroupParams params;
  ConeTypeAutomaton automaton;
  ReducedAutomaton reduced;
  double seconds_automaton = 0.0;
  BoundReport report;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ReducedAutomaton tree() {
  ReducedAutomaton ra;
  ra.types = {0};
  ra.M = {{2}};
  ra.d = {3};
  ra.r = {1};
  ra.primitivity_exponent = 1;
  return ra;
}

bool permutation_equal(const IntMatrix& a, const IntMatrix& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    bool same = true;
    for (std::size_t i = 0; i < a.size() && same; ++i) {
      for (std::size_t j = 0; j < a.size() && same; ++j) same = a[perm[i]][perm[j]] == b[i][j];
    }
    if (same) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

mpq_class brute_force_return(const GroupParams& p, int k) {
  long total = 1, hits = 0;
  for (int i = 0; i < k; ++i) total *= 3;
  for (long code = 0; code < total; ++code) {
    Word w;
    long c = code;
    for (int i = 0; i < k; ++i, c /= 3) w.push_back(kGenerators[static_cast<std::size_t>(c % 3)]);
    if (tits_reduce(p, w).empty()) ++hits;
  }
  mpq_class out(hits, total);
  out.canonicalize();
  return out;
}

Outcome criterion_counts(const std::vector<GroupRun>& runs) {
  Outcome o;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& g = runs[i];
    const int expected = kTable[i].K;
    o.require(g.automaton.K_total == expected,
              g.params.name() + " has " + std::to_string(g.automaton.K_total) +
                  " cone types, expected " + std::to_string(expected));
    o.require(verify_counts(g.params, g.automaton).matches(),
              g.params.name() + " disagrees with its family formula");
    o.require(g.seconds_automaton <= 60.0, g.params.name() + " took " +
                                               fmt(g.seconds_automaton, 1) + " s");
    o.note(g.params.name() + ": " + std::to_string(g.automaton.K_total) + " types in " +
           fmt(g.seconds_automaton, 2) + " s");
  }
  return o;
}

Outcome criterion_444_and_237(const std::vector<GroupRun>& runs) {
  Outcome o;
  const IntMatrix printed = {
      {0, 3, 0, 0, 0, 0}, {0, 0, 2, 0, 0, 0}, {0, 0, 1, 1, 0, 0},
      {0, 0, 1, 0, 1, 0}, {0, 0, 0, 0, 0, 1}, {0, 0, 0, 2, 0, 0},
  };
  for (const auto& g : runs) {
    if (g.params == GroupParams::make(4, 4, 4)) {
      o.require(permutation_equal(g.automaton.M, printed),
                "Delta(4,4,4) matrix differs from the printed one");
      o.require(g.reduced.size() == 4, "Delta(4,4,4) reduced size " +
                                           std::to_string(g.reduced.size()));
      // The digraph has an arc i -> j exactly when M_ij > 0, so the matrix
      // check above also settles the digraph; check the DOT arc count too.
      const std::string dot = to_digraph_dot(g.automaton);
      int arcs = 0;
      for (auto pos = dot.find("->"); pos != std::string::npos; pos = dot.find("->", pos + 2)) {
        ++arcs;
      }
      o.require(arcs == 3 + 2 + 2 + 2 + 1 + 2, "DOT arc count " + std::to_string(arcs));
    }
    if (g.params == GroupParams::make(2, 3, 7)) {
      o.require(g.reduced.size() == 24,
                "Delta(2,3,7) reduced size " + std::to_string(g.reduced.size()));
      o.note("Delta(2,3,7) reduced size " + std::to_string(g.reduced.size()));
    }
  }
  return o;
}

Outcome criterion_upper(const std::vector<GroupRun>& runs) {
  Outcome o;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i].report;
    const double want = kTable[i].upper;
    o.require(std::abs(r.upper - want) <= kTol,
              r.group + " upper " + fmt(r.upper) + " vs " + fmt(want) + " (diff " +
                  fmt(r.upper - want, 12) + ")");
    o.require(r.seconds_upper <= 10.0, r.group + " upper took " + fmt(r.seconds_upper, 1) + " s");
    if (runs[i].params == GroupParams::make(4, 4, 4) && r.upper_detail) {
      o.require(std::abs(r.upper_detail->R_F - 1.0321531591) <= kTol,
                "Delta(4,4,4) R_F " + fmt(r.upper_detail->R_F));
      o.require(r.upper_detail->F_at_RF < 1.0 && r.upper_detail->branch == "R_F",
                "Delta(4,4,4) is not on the F(R_F) < 1 branch");
      o.note("Delta(4,4,4) R_F " + fmt(r.upper_detail->R_F) + ", F(R_F) " +
             fmt(r.upper_detail->F_at_RF));
    }
  }
  return o;
}

Outcome criterion_lower(const std::vector<GroupRun>& runs) {
  Outcome o;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i].report;
    const double want = kTable[i].lower;
    o.require(std::abs(r.lower - want) <= kTol,
              r.group + " lower " + fmt(r.lower) + " vs " + fmt(want) + " (diff " +
                  fmt(r.lower - want, 12) + ")");
    o.require(r.seconds_lower <= 1.0, r.group + " lower took " + fmt(r.seconds_lower, 2) + " s");
  }
  return o;
}

Outcome criterion_tree(const std::vector<GroupRun>& runs) {
  Outcome o;
  const double exact = 2.0 * std::sqrt(2.0) / 3.0;
  const double lower = lower_bound(tree()).bound;
  const double upper = upper_bound(tree(), 0).rho_T;
  o.require(std::abs(lower - exact) <= 1e-10, "tree lower " + fmt(lower, 12));
  o.require(std::abs(upper - exact) <= 1e-10, "tree upper " + fmt(upper, 12));
  o.require(std::abs(exact - 0.9428090416) <= 1e-10, "2 sqrt(2)/3 drifted");
  for (const auto& g : runs) {
    o.require(g.report.lower > exact, g.report.group + " lower bound below the tree value");
  }
  o.note("tree bounds " + fmt(lower) + " / " + fmt(upper));
  return o;
}

Outcome criterion_certificate(const std::vector<GroupRun>& runs) {
  Outcome o;
  for (const auto& g : runs) {
    if (!(g.params == GroupParams::make(4, 4, 4))) continue;
    const double R_F = g.report.upper_detail ? g.report.upper_detail->R_F : 0.0;
    try {
      const AlgebraicCertificate cert = certify_automaton(g.reduced, g.report.root_type, R_F);
      const int nv = cert.elimination.poly.nvars();
      const MultiPoly p5 =
          testing::printed_p5(nv, cert.candidates.keep, cert.candidates.z_var);
      o.require(divide_exact(cert.elimination.poly, p5).has_value(),
                "elimination output is not divisible by the printed polynomial");
      o.require(cert.keep_type == 5, "kept variable is w" + std::to_string(cert.keep_type));
      const auto& iv = cert.report->match.interval;
      o.require(cert.report->match.source == "discriminant" && iv.lo.get_d() <= R_F + kTol &&
                    R_F - kTol <= iv.hi.get_d(),
                "R_F is not inside a discriminant-root interval");
      o.note("R_F " + fmt(R_F) + " in (" + fmt(iv.lo.get_d(), 13) + ", " +
             fmt(iv.hi.get_d(), 13) + "] from the " + cert.report->match.source);
    } catch (const Error& e) {
      o.require(false, e.what());
    }
  }
  return o;
}

Outcome criterion_curvature(const std::vector<GroupRun>& runs) {
  Outcome o;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Curvature c = curvature(runs[i].params);
    o.require(c == kTable[i].curv, runs[i].params.name() + " curvature " + c.to_string());
  }
  return o;
}

Outcome criterion_properties(const std::vector<GroupRun>& runs) {
  Outcome o;
  for (const auto& g : runs) {
    const auto& r = g.report;
    o.require(r.invariants_ok, r.group + " ball invariants");
    o.require(r.sphere_recursion_ok, r.group + " sphere recursion");
    o.require(r.envelope > 0.0 && r.envelope <= r.upper,
              r.group + " envelope " + fmt(r.envelope) + " above upper " + fmt(r.upper));
    for (const auto& d : r.diagnostics) o.require(false, r.group + ": " + d);

    for (int t : g.reduced.types) {
      const TreeWalkSpec spec = tree_walk_spec(g.reduced, t);
      for (double defect : stochasticity_defects(spec)) {
        o.require(std::abs(defect) < 1e-14, r.group + " walk row sum off by " + fmt(defect, 16));
      }
    }

    // Monotone fixed-point behaviour below R_F, divergence above it.
    const TreeWalkSpec spec = tree_walk_spec(g.reduced, r.root_type);
    const double R_F = r.upper_detail ? r.upper_detail->R_F : 0.0;
    Eigen::VectorXd previous = Eigen::VectorXd::Zero(spec.size());
    for (int s = 1; s <= 9; ++s) {
      const double z = R_F * s / 10.0;
      const auto fp = minimal_fixed_point(spec, z);
      if (!fp) {
        o.require(false, r.group + " no fixed point at z = " + fmt(z, 6));
        break;
      }
      o.require((fp->w.array() >= previous.array()).all() && fp->jacobian_spectral_radius < 1.0,
                r.group + " fixed point not monotone at z = " + fmt(z, 6));
      previous = fp->w;
    }
    o.require(!minimal_fixed_point(spec, R_F * 1.01).has_value(),
              r.group + " fixed point survives past R_F");
  }

  for (auto [l, m, n] : {std::array{4, 4, 4}, std::array{2, 3, 7}}) {
    const GroupParams p = GroupParams::make(l, m, n);
    const ReturnSeries rs = return_probabilities(build_ball(p, 4), 4);
    const mpq_class brute = brute_force_return(p, 4);
    o.require(rs.exact[2] == mpq_class(1, 3), p.name() + " p2 = " + rs.exact[2].get_str());
    o.require(rs.exact[4] == brute,
              p.name() + " p4 = " + rs.exact[4].get_str() + ", brute force " + brute.get_str());
    o.note(p.name() + " p2 = " + rs.exact[2].get_str() + ", p4 = " + rs.exact[4].get_str());
  }
  return o;
}

}  // namespace

int main() {
  std::vector<GroupRun> runs;
  RunConfig config;
  config.oracle_horizon = 20;
  for (const auto& ref : kTable) {
    const GroupParams p = GroupParams::make(ref.lmn[0], ref.lmn[1], ref.lmn[2]);
    GroupRun g{p, {}, {}, 0.0, {}};
    const auto t0 = std::chrono::steady_clock::now();
    g.automaton = compute_automaton(p);
    g.seconds_automaton = elapsed(t0);
    g.reduced = reduce(g.automaton);
    g.report = run_group(p, config);
    runs.push_back(std::move(g));
  }

  struct Named {
    const char* name;
    Outcome (*run)(const std::vector<GroupRun>&);
  };
  const Named criteria[] = {
      {"cone-type counts for the ten reference groups", criterion_counts},
      {"Delta(4,4,4) matrix and reduced sizes", criterion_444_and_237},
      {"upper bounds match the reference table", criterion_upper},
      {"lower bounds match the reference table", criterion_lower},
      {"tree sanity 2 sqrt(2)/3", criterion_tree},
      {"algebraic certificate for Delta(4,4,4)", criterion_certificate},
      {"exact curvature column", criterion_curvature},
      {"property suites", criterion_properties},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run(runs);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index << "] " << c.name << "\n";
    for (const auto& n : o.notes) std::cout << "       " << n << "\n";
    if (!o.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " failed") << "\n";
  return failed;
}
