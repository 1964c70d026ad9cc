#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypcone/cayley_ball.hpp"

namespace hypcone {

using IntMatrix = std::vector<std::vector<int>>;

// Cone C(x) cut at depth k: the vertices v with x on a geodesic from the
// identity to v and |v| <= |x| + k, with every ball edge between them.
// Local vertex 0 is the root; vertices are listed level by level.
struct TruncatedCone {
  VertexId root = 0;
  int depth = 0;
  std::vector<VertexId> vertices;
  std::vector<int> level;                    // distance from the root
  std::vector<std::vector<int>> up;          // in-cone predecessors (local ids)
  std::vector<std::vector<int>> down;        // in-cone successors (local ids)

  std::size_t size() const noexcept { return vertices.size(); }
};

// Membership rule: v is in C(x) iff v == x or some predecessor of v is.
// Throws DepthExceedsBall unless |x| + k <= radius.
TruncatedCone truncated_cone(const CayleyBall& ball, VertexId x, int depth);

// Colour-refinement invariant of a rooted cone; equal for isomorphic cones.
std::uint64_t cone_signature(const TruncatedCone& cone);

// Root-preserving isomorphism: signature comparison, then backtracking.
bool cones_isomorphic(const TruncatedCone& a, const TruncatedCone& b);

struct ConeTypeAutomaton {
  int K_total = 0;
  IntMatrix M;                // M[i][j] successors of type j of a type-i vertex
  std::vector<int> d;         // degree per type
  std::vector<int> r;         // predecessors per type, d_i - sum_j M_ij
  std::optional<int> root_type;
  std::optional<GroupParams> params;
  std::vector<int> type_of;   // per ball vertex; -1 outside the typed region
  int stabilization_depth = 0;
  int ball_radius = 0;
};

struct ReducedAutomaton {
  std::vector<int> types;     // original type ids, increasing
  IntMatrix M;                // M restricted to `types`
  std::vector<int> d;
  std::vector<int> r;
  int primitivity_exponent = 0;

  int size() const noexcept { return static_cast<int>(types.size()); }
  // Local index of an original type id, or -1.
  int local_index(int type) const;
};

struct ExtractOptions {
  int start_depth = 0;        // 0 selects max(l,m,n) + 2
  int max_depth = 0;          // 0 selects radius - 2
};

// Partitions vertices by depth-k cone isomorphism for increasing k until two
// consecutive depths agree and successor types are deterministic.
// Throws NotStabilized or NonDeterministic.
ConeTypeAutomaton extract_automaton(const CayleyBall& ball,
                                    const ExtractOptions& options = {});

struct AutomatonOptions {
  int start_depth = 0;        // 0 selects max(l,m,n) + 2
  int max_depth = 40;
  int radius_override = 0;    // fixed ball radius instead of depth + max + 4
  BallOptions ball;
  // Ball source, e.g. a cache; build_ball when empty.
  std::function<CayleyBall(const GroupParams&, int radius)> build;
};

// Builds balls of radius depth + max(l,m,n) + 4. When the partitions of two
// consecutive depths disagree the depth grows by 2; when they agree but some
// type only occurs too close to the boundary to have a successor row, the
// radius grows by 2 instead.
ConeTypeAutomaton compute_automaton(const GroupParams& params,
                                    const AutomatonOptions& options = {},
                                    CayleyBall* ball_out = nullptr);

// Throws SchemaError when row identities or the root conventions fail.
void validate(const ConeTypeAutomaton& a);

// Unique terminal strongly connected component, checked for primitivity.
// Throws MultipleTerminalSCCs or NotPrimitive.
ReducedAutomaton reduce(const ConeTypeAutomaton& a);

// Least p with (M)^p entrywise positive, or 0 if there is none up to n^2.
int primitivity_exponent(const IntMatrix& M);

struct VerificationReport {
  std::string case_label;     // "i", "ii.1", "ii.2", "iii.1", "iii.2", "iii.3"
  int expected = 0;
  int actual = 0;
  bool matches() const noexcept { return expected == actual; }
};

// Cone-type counts by parameter family for the standard presentation.
VerificationReport verify_counts(const GroupParams& params, int actual);
VerificationReport verify_counts(const GroupParams& params,
                                 const ConeTypeAutomaton& a);

std::string to_digraph_dot(const ConeTypeAutomaton& a);
std::string to_digraph_dot(const ReducedAutomaton& a);

// "cta-1" documents.
std::string automaton_to_json(const ConeTypeAutomaton& a,
                              const ReducedAutomaton& reduced);
struct ImportedAutomaton {
  ConeTypeAutomaton automaton;
  ReducedAutomaton reduced;
};
// Throws SchemaError on malformed input and NotPrimitive on a bad reduced part.
ImportedAutomaton automaton_from_json(const std::string& text);

// Predicted sphere sizes by type: s_{k+1}(i) = sum_j M_ji s_k(j) / r_i,
// seeded with the root type. Exact integer recursion; throws SchemaError if a
// division is inexact.
std::vector<std::vector<long long>> predicted_spheres(const ConeTypeAutomaton& a,
                                                      int count);

}  // namespace hypcone
