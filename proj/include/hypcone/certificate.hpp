#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypcone/polynomial.hpp"
#include "hypcone/spectral_upper.hpp"

namespace hypcone {

// Variables are w_0..w_{K-1} (reduced types in local order) followed by z.
std::vector<std::string> variable_names(const TreeWalkSpec& spec);

// d_i w_i - r_i z - z sum_j M_ij w_i w_j, one polynomial per reduced type.
std::vector<MultiPoly> system_polynomials(const TreeWalkSpec& spec);

struct EliminationOptions {
  int max_types = 6;
};

struct Elimination {
  MultiPoly poly;              // in the kept variable and z only
  std::vector<int> order;      // variables eliminated, in order
};

// Iterated resultants. The next variable is the one occurring in the fewest
// polynomials (ties: fewest terms among those polynomials, then lowest index);
// each resultant is made primitive and stripped of powers of z. If some
// resultant vanishes, every fixed order is tried before giving up.
// Throws Infeasible (too many variables) or ZeroResultant.
Elimination eliminate(const std::vector<MultiPoly>& system, int keep, int z_var,
                      const EliminationOptions& options = {});

// Res(p, dp/dvar) / lc(p), primitive.
MultiPoly discriminant(const MultiPoly& p, int var);

// Positive real roots of a polynomial in z alone.
std::vector<RootInterval> real_positive_roots(const MultiPoly& p, int z_var,
                                              const mpq_class& width);

struct Candidate {
  RootInterval interval;
  std::string source;          // "leading_coefficient" or "discriminant"
};

struct UnivariateCandidateSet {
  MultiPoly eliminated;
  int keep = 0;
  int z_var = 0;
  UPoly leading;               // a_0(z), coefficient of the top power of keep
  UPoly disc;
  std::vector<Candidate> candidates;
};

UnivariateCandidateSet candidate_set(const MultiPoly& eliminated, int keep, int z_var,
                                     const mpq_class& width);

struct CertificateReport {
  double numeric = 0.0;
  Candidate match;
  int matching_intervals = 0;
};

// Throws NoMatchingCandidate unless some interval is within tol of numeric.
CertificateReport certify(double numeric, const UnivariateCandidateSet& cs, double tol);

struct AlgebraicCertificate {
  TreeWalkSpec spec;
  std::vector<MultiPoly> system;
  Elimination elimination;
  UnivariateCandidateSet candidates;
  std::optional<CertificateReport> report;
  int keep_type = 0;           // original id of the kept variable's type
};

// Keeps the variable of the root's first successor type, whose generating
// function determines F. Runs the matching step when numeric_RF is given.
AlgebraicCertificate certify_automaton(const ReducedAutomaton& ra, int root_type,
                                       std::optional<double> numeric_RF, double tol = 1e-8,
                                       const EliminationOptions& options = {});

std::string certificate_to_json(const std::string& group, const AlgebraicCertificate& cert);

}  // namespace hypcone
