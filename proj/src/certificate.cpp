#include "hypcone/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <json.hpp>

namespace hypcone {

std::vector<std::string> variable_names(const TreeWalkSpec& spec) {
  std::vector<std::string> names;
  for (int t : spec.types) names.push_back("w" + std::to_string(t));
  names.push_back("z");
  return names;
}

std::vector<MultiPoly> system_polynomials(const TreeWalkSpec& spec) {
  const int K = spec.size();
  const int nv = K + 1;
  const MultiPoly z = MultiPoly::variable(nv, K);
  std::vector<MultiPoly> out;
  for (int i = 0; i < K; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const MultiPoly wi = MultiPoly::variable(nv, i);
    MultiPoly quadratic(nv);
    for (int j = 0; j < K; ++j) {
      const int m = spec.M[ii][static_cast<std::size_t>(j)];
      if (m != 0) quadratic += wi * MultiPoly::variable(nv, j) * mpz_class(m);
    }
    out.push_back(wi * mpz_class(spec.d[ii]) - z * mpz_class(spec.r[ii]) - z * quadratic);
  }
  return out;
}

namespace {

MultiPoly clean(const MultiPoly& p, int z_var) {
  return p.strip_variable_powers(z_var).primitive();
}

// One elimination step; returns false if a resultant vanished.
bool eliminate_variable(std::vector<MultiPoly>& system, int var, int z_var) {
  std::vector<MultiPoly> with, rest;
  for (auto& p : system) (p.contains(var) ? with : rest).push_back(std::move(p));
  std::stable_sort(with.begin(), with.end(), [var](const MultiPoly& a, const MultiPoly& b) {
    return a.degree(var) < b.degree(var);
  });
  for (std::size_t k = 1; k < with.size(); ++k) {
    MultiPoly r = clean(resultant(with[0], with[k], var), z_var);
    if (r.is_zero()) return false;
    rest.push_back(std::move(r));
  }
  system = std::move(rest);
  return true;
}

std::optional<MultiPoly> pick_result(const std::vector<MultiPoly>& system, int keep) {
  for (const auto& p : system) {
    if (p.contains(keep)) return p;
  }
  return std::nullopt;
}

}  // namespace

Elimination eliminate(const std::vector<MultiPoly>& system, int keep, int z_var,
                      const EliminationOptions& options) {
  if (system.empty()) throw Error(ErrorCode::kInvalidParameter, "empty system");
  const int nv = system.front().nvars();
  if (nv - 1 > options.max_types) {
    throw Error(ErrorCode::kInfeasible, std::to_string(nv - 1) +
                                            " unknowns exceed the elimination guard of " +
                                            std::to_string(options.max_types));
  }
  std::vector<int> targets;
  for (int v = 0; v < nv; ++v) {
    if (v != keep && v != z_var) targets.push_back(v);
  }

  // Heuristic order first.
  {
    Elimination out;
    std::vector<MultiPoly> current = system;
    std::vector<int> remaining = targets;
    bool ok = true;
    while (ok && !remaining.empty()) {
      auto score = [&](int v) {
        std::size_t count = 0, terms = 0;
        for (const auto& p : current) {
          if (p.contains(v)) {
            ++count;
            terms += p.term_count();
          }
        }
        return std::tuple(count, terms, v);
      };
      const auto best = std::min_element(remaining.begin(), remaining.end(),
                                         [&](int a, int b) { return score(a) < score(b); });
      const int v = *best;
      remaining.erase(best);
      out.order.push_back(v);
      ok = eliminate_variable(current, v, z_var);
    }
    if (ok) {
      if (auto p = pick_result(current, keep)) {
        out.poly = std::move(*p);
        return out;
      }
    }
  }
  std::vector<int> order = targets;
  do {
    Elimination out;
    std::vector<MultiPoly> current = system;
    bool ok = true;
    for (int v : order) {
      out.order.push_back(v);
      if (!(ok = eliminate_variable(current, v, z_var))) break;
    }
    if (!ok) continue;
    if (auto p = pick_result(current, keep)) {
      out.poly = std::move(*p);
      return out;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  throw Error(ErrorCode::kZeroResultant, "every elimination order produced a zero resultant");
}

MultiPoly discriminant(const MultiPoly& p, int var) {
  const int n = p.degree(var);
  if (n < 1) throw Error(ErrorCode::kInvalidParameter, "discriminant of a constant");
  const MultiPoly res = resultant(p, p.derivative(var), var);
  auto q = divide_exact(res, p.coefficient(var, n));
  if (!q) throw Error(ErrorCode::kInvalidParameter, "resultant not divisible by lc");
  return q->primitive();
}

std::vector<RootInterval> real_positive_roots(const MultiPoly& p, int z_var,
                                              const mpq_class& width) {
  return positive_real_roots(UPoly::from_multi(p, z_var), width);
}

UnivariateCandidateSet candidate_set(const MultiPoly& eliminated, int keep, int z_var,
                                     const mpq_class& width) {
  UnivariateCandidateSet cs;
  cs.eliminated = eliminated;
  cs.keep = keep;
  cs.z_var = z_var;
  const MultiPoly lc = eliminated.coefficient(keep, eliminated.degree(keep));
  const MultiPoly disc = discriminant(eliminated, keep);
  cs.leading = UPoly::from_multi(lc, z_var);
  cs.disc = UPoly::from_multi(disc, z_var);
  for (const auto& r : positive_real_roots(cs.leading, width)) {
    cs.candidates.push_back({r, "leading_coefficient"});
  }
  for (const auto& r : positive_real_roots(cs.disc, width)) {
    cs.candidates.push_back({r, "discriminant"});
  }
  return cs;
}

CertificateReport certify(double numeric, const UnivariateCandidateSet& cs, double tol) {
  CertificateReport rep;
  rep.numeric = numeric;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : cs.candidates) {
    const double lo = c.interval.lo.get_d() - tol;
    const double hi = c.interval.hi.get_d() + tol;
    if (numeric < lo || numeric > hi) continue;
    ++rep.matching_intervals;
    const double dist = std::abs(c.interval.approx - numeric);
    if (dist < best) {
      best = dist;
      rep.match = c;
    }
  }
  if (rep.matching_intervals == 0) {
    throw Error(ErrorCode::kNoMatchingCandidate,
                "no candidate root within tolerance of " + std::to_string(numeric));
  }
  return rep;
}

AlgebraicCertificate certify_automaton(const ReducedAutomaton& ra, int root_type,
                                       std::optional<double> numeric_RF, double tol,
                                       const EliminationOptions& options) {
  AlgebraicCertificate cert;
  cert.spec = tree_walk_spec(ra, root_type);
  const int K = cert.spec.size();
  if (K > options.max_types) {
    throw Error(ErrorCode::kInfeasible,
                std::to_string(K) + " reduced types exceed the elimination guard");
  }
  const auto& row = cert.spec.M[static_cast<std::size_t>(cert.spec.root_local)];
  const int keep = static_cast<int>(std::find_if(row.begin(), row.end(),
                                                 [](int m) { return m > 0; }) -
                                    row.begin());
  cert.keep_type = cert.spec.types[static_cast<std::size_t>(keep)];
  cert.system = system_polynomials(cert.spec);
  cert.elimination = eliminate(cert.system, keep, K, options);
  cert.candidates = candidate_set(cert.elimination.poly, keep, K, mpq_class(mpz_class(1), mpz_class("1000000000000")));
  if (numeric_RF) cert.report = certify(*numeric_RF, cert.candidates, tol);
  return cert;
}

std::string certificate_to_json(const std::string& group, const AlgebraicCertificate& cert) {
  const auto names = variable_names(cert.spec);
  nlohmann::ordered_json doc;
  doc["group"] = group;
  doc["variables"] = names;
  doc["keep"] = names[static_cast<std::size_t>(cert.candidates.keep)];
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& [m, c] : cert.elimination.poly.terms()) {
    terms.push_back({{"exponents", m}, {"coefficient", c.get_str()}});
  }
  doc["eliminated_poly"] = terms;
  nlohmann::ordered_json disc = nlohmann::ordered_json::array();
  for (const auto& c : cert.candidates.disc.integer_coefficients()) disc.push_back(c.get_str());
  doc["discriminant"] = disc;
  nlohmann::ordered_json cands = nlohmann::ordered_json::array();
  for (const auto& c : cert.candidates.candidates) {
    cands.push_back({{"interval", {c.interval.lo.get_str(), c.interval.hi.get_str()}},
                     {"approx", c.interval.approx},
                     {"source", c.source}});
  }
  doc["candidates"] = cands;
  if (cert.report) {
    doc["matched"] = {{"numeric", cert.report->numeric},
                      {"source", cert.report->match.source},
                      {"approx", cert.report->match.interval.approx},
                      {"matching_intervals", cert.report->matching_intervals}};
  } else {
    doc["matched"] = nullptr;
  }
  return doc.dump(2);
}

}  // namespace hypcone
