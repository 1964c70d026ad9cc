#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hypcone/group.hpp"

namespace hypcone {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = 0xFFFFFFFFu;

// How `build_ball` decides that two words reach the same vertex.
enum class IdentityMode {
  // Exact: in a Coxeter group a vertex of norm k+1 has a second predecessor
  // iff it is the top of a dihedral coset, which is detected by descending
  // m_st - 1 alternating steps from the first predecessor.
  kDihedralClosure,
  // Quantized key of the reflection-representation matrix with a tolerance
  // sandwich. Floating error grows with the matrix norm, so this is only
  // reliable for small radii; used as an independent cross-check.
  kMatrixKey,
};

struct BallOptions {
  IdentityMode mode = IdentityMode::kDihedralClosure;
  std::size_t max_vertices = 40'000'000;
  // Matrix-key mode only.
  double key_quantum = 1e-7;
  double ambiguity_tolerance = 1e-9;
  double collision_tolerance = 1e-6;
};

struct Edge {
  VertexId a;
  VertexId b;
  Generator label;
};

// Finite ball of the Cayley graph around the identity. Vertices are numbered
// by (norm, shortlex order of their normal form); vertex 0 is the identity.
// Representative words are stored implicitly through a parent pointer.
class CayleyBall {
 public:
  CayleyBall(GroupParams params, int radius);

  const GroupParams& params() const noexcept { return params_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return norm_.size(); }

  int norm(VertexId v) const { return norm_[v]; }
  // Neighbour v*s, or kNoVertex if it lies outside the ball.
  VertexId neighbour(VertexId v, Generator s) const {
    return neighbours_[v][static_cast<std::size_t>(index(s))];
  }
  std::vector<VertexId> predecessors(VertexId v) const;
  std::vector<VertexId> successors(VertexId v) const;
  std::vector<Edge> edges() const;

  // Shortlex-least geodesic word from the identity.
  Word word(VertexId v) const;
  Eigen::Matrix3d matrix(VertexId v, const ReflectionRep& rep) const;

  // First vertex id of each sphere; sphere k is [sphere_begin(k), sphere_begin(k+1)).
  VertexId sphere_begin(int k) const { return sphere_offsets_[static_cast<std::size_t>(k)]; }
  std::vector<std::size_t> sphere_sizes() const;

  // Construction interface used by build_ball and the cache loader.
  VertexId add_vertex(int norm, VertexId parent, Generator via);
  void link(VertexId a, Generator s, VertexId b);
  void close_sphere();

  friend bool operator==(const CayleyBall&, const CayleyBall&) = default;

 private:
  GroupParams params_;
  int radius_;
  std::vector<std::int32_t> norm_;
  std::vector<std::array<VertexId, 3>> neighbours_;
  std::vector<VertexId> parent_;
  std::vector<Generator> parent_gen_;
  std::vector<VertexId> sphere_offsets_;
};

// Throws InvalidParameter (radius < 1), MemoryCap, IdentificationAmbiguity.
CayleyBall build_ball(const GroupParams& params, int radius,
                      const BallOptions& options = {});

// Rounded representation matrix, usable as a hash key for small norms.
std::array<std::int64_t, 9> matrix_key(const Eigen::Matrix3d& m,
                                       double quantum = 1e-7);

struct BallInvariantReport {
  bool identity_at_zero = true;
  bool bipartite = true;
  bool trivalent_interior = true;
  bool determinant_parity = true;
  bool simple = true;
  std::vector<std::string> violations;

  bool ok() const noexcept {
    return identity_at_zero && bipartite && trivalent_interior &&
           determinant_parity && simple;
  }
};

// The determinant check evaluates representation matrices along parent
// chains; skip it for huge balls by setting check_determinants = false.
BallInvariantReport check_invariants(const CayleyBall& ball,
                                     bool check_determinants = true);

std::string ball_to_json(const CayleyBall& ball);
std::string ball_to_csv(const CayleyBall& ball);

// Binary snapshot of a ball used by the optional on-disk cache.
void write_ball(std::ostream& out, const CayleyBall& ball);
CayleyBall read_ball(std::istream& in);

}  // namespace hypcone
