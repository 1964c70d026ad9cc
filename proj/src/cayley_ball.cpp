#include "hypcone/cayley_ball.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <Eigen/LU>
#include <json.hpp>

namespace hypcone {

namespace {

struct KeyHash {
  std::size_t operator()(const std::array<std::int64_t, 9>& k) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (std::int64_t v : k) {
      h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

void check_growth(const CayleyBall& ball, std::size_t frontier,
                  const BallOptions& options) {
  // Each vertex has at most two successors beyond the identity.
  if (ball.size() + 3 * frontier > options.max_vertices) {
    throw Error(ErrorCode::kMemoryCap,
                "ball would exceed " + std::to_string(options.max_vertices) +
                    " vertices");
  }
}

// Attaches x*s as a new vertex at norm k+1 and closes every dihedral coset
// whose top it is.
void grow_dihedral(CayleyBall& ball, VertexId x, Generator s) {
  const GroupParams& params = ball.params();
  const int k = ball.norm(x);
  const VertexId g = ball.add_vertex(k + 1, x, s);
  ball.link(x, s, g);
  for (Generator t : kGenerators) {
    if (t == s) continue;
    const int m = params.coxeter_order(s, t);
    // Descend t, s, t, ... from x; success means x = b * u with u alternating
    // of length m - 1, so x*s is the longest element of the coset b<s,t>.
    VertexId cur = x;
    bool descends = true;
    Generator last = t;
    for (int i = 0; i < m - 1 && descends; ++i) {
      last = (i % 2 == 0) ? t : s;
      const VertexId y = ball.neighbour(cur, last);
      descends = y != kNoVertex && ball.norm(y) == ball.norm(cur) - 1;
      cur = y;
    }
    if (!descends) continue;
    // The word from the base b up to x starts with `last`; climb the other
    // alternating word of length m - 1, which ends next to the top with t.
    Generator a = (last == s) ? t : s;
    Generator b = last;
    for (int i = 0; i < m - 1; ++i) {
      const VertexId y = ball.neighbour(cur, a);
      if (y == kNoVertex || ball.norm(y) != ball.norm(cur) + 1) {
        throw Error(ErrorCode::kIdentificationAmbiguity,
                    "dihedral coset is not closed below norm " +
                        std::to_string(k + 1));
      }
      cur = y;
      std::swap(a, b);
    }
    if (ball.neighbour(cur, t) != kNoVertex) {
      throw Error(ErrorCode::kIdentificationAmbiguity,
                  "vertex already has a " + std::string(1, to_char(t)) +
                      "-successor at norm " + std::to_string(k + 1));
    }
    ball.link(cur, t, g);
  }
}

CayleyBall build_dihedral(const GroupParams& params, int radius,
                          const BallOptions& options) {
  CayleyBall ball(params, radius);
  for (int k = 0; k < radius; ++k) {
    const VertexId begin = ball.sphere_begin(k);
    const VertexId end = static_cast<VertexId>(ball.size());
    check_growth(ball, end - begin, options);
    for (VertexId x = begin; x < end; ++x) {
      for (Generator s : kGenerators) {
        if (ball.neighbour(x, s) == kNoVertex) grow_dihedral(ball, x, s);
      }
    }
    ball.close_sphere();
  }
  return ball;
}

double max_abs_diff(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

CayleyBall build_matrix_key(const GroupParams& params, int radius,
                            const BallOptions& options) {
  const ReflectionRep rep = reflection_rep(params);
  CayleyBall ball(params, radius);
  std::vector<Eigen::Matrix3d> mats{Eigen::Matrix3d::Identity()};
  using Key = std::array<std::int64_t, 9>;
  for (int k = 0; k < radius; ++k) {
    const VertexId begin = ball.sphere_begin(k);
    const VertexId end = static_cast<VertexId>(ball.size());
    check_growth(ball, end - begin, options);
    std::unordered_map<Key, VertexId, KeyHash> next_sphere;
    for (VertexId x = begin; x < end; ++x) {
      for (Generator s : kGenerators) {
        if (ball.neighbour(x, s) != kNoVertex) continue;
        const Eigen::Matrix3d gm = mats[x] * rep[s];
        const Key key = matrix_key(gm, options.key_quantum);
        if (auto it = next_sphere.find(key); it != next_sphere.end()) {
          if (max_abs_diff(mats[it->second], gm) > options.collision_tolerance) {
            throw Error(ErrorCode::kIdentificationAmbiguity,
                        "equal keys for matrices that differ");
          }
          ball.link(x, s, it->second);
          continue;
        }
        // Entries close to a rounding boundary could have landed in a
        // neighbouring cell; a near-identical matrix there is ambiguous.
        std::vector<int> near;
        for (int e = 0; e < 9; ++e) {
          const double scaled = gm(e / 3, e % 3) / options.key_quantum;
          const double frac = scaled - std::round(scaled);
          if (std::abs(frac) > 0.5 - options.ambiguity_tolerance / options.key_quantum) {
            near.push_back(e);
          }
        }
        if (near.size() > 12) {
          throw Error(ErrorCode::kIdentificationAmbiguity,
                      "too many entries on rounding boundaries");
        }
        for (std::uint32_t mask = 1; mask < (1u << near.size()); ++mask) {
          Key alt = key;
          for (std::size_t b = 0; b < near.size(); ++b) {
            if (!(mask & (1u << b))) continue;
            const int e = near[b];
            const double scaled = gm(e / 3, e % 3) / options.key_quantum;
            alt[static_cast<std::size_t>(e)] +=
                (scaled - std::round(scaled) > 0) ? 1 : -1;
          }
          if (auto it = next_sphere.find(alt); it != next_sphere.end() &&
              max_abs_diff(mats[it->second], gm) <= options.ambiguity_tolerance) {
            throw Error(ErrorCode::kIdentificationAmbiguity,
                        "distinct keys within tolerance at norm " +
                            std::to_string(k + 1));
          }
        }
        const VertexId g = ball.add_vertex(k + 1, x, s);
        ball.link(x, s, g);
        mats.push_back(gm);
        next_sphere.emplace(key, g);
      }
    }
    ball.close_sphere();
  }
  return ball;
}

}  // namespace

CayleyBall::CayleyBall(GroupParams params, int radius)
    : params_(params), radius_(radius) {
  norm_.push_back(0);
  neighbours_.push_back({kNoVertex, kNoVertex, kNoVertex});
  parent_.push_back(kNoVertex);
  parent_gen_.push_back(Generator::L);
  sphere_offsets_ = {0, 1};
}

VertexId CayleyBall::add_vertex(int norm, VertexId parent, Generator via) {
  const auto id = static_cast<VertexId>(norm_.size());
  norm_.push_back(norm);
  neighbours_.push_back({kNoVertex, kNoVertex, kNoVertex});
  parent_.push_back(parent);
  parent_gen_.push_back(via);
  return id;
}

void CayleyBall::link(VertexId a, Generator s, VertexId b) {
  neighbours_[a][static_cast<std::size_t>(index(s))] = b;
  neighbours_[b][static_cast<std::size_t>(index(s))] = a;
}

void CayleyBall::close_sphere() {
  sphere_offsets_.push_back(static_cast<VertexId>(norm_.size()));
}

std::vector<VertexId> CayleyBall::predecessors(VertexId v) const {
  std::vector<VertexId> out;
  for (VertexId w : neighbours_[v]) {
    if (w != kNoVertex && norm_[w] < norm_[v]) out.push_back(w);
  }
  return out;
}

std::vector<VertexId> CayleyBall::successors(VertexId v) const {
  std::vector<VertexId> out;
  for (VertexId w : neighbours_[v]) {
    if (w != kNoVertex && norm_[w] > norm_[v]) out.push_back(w);
  }
  return out;
}

std::vector<Edge> CayleyBall::edges() const {
  std::vector<Edge> out;
  for (VertexId v = 0; v < size(); ++v) {
    for (Generator s : kGenerators) {
      const VertexId w = neighbour(v, s);
      if (w != kNoVertex && w > v) out.push_back({v, w, s});
    }
  }
  return out;
}

Word CayleyBall::word(VertexId v) const {
  Word w;
  while (v != 0) {
    w.push_back(parent_gen_[v]);
    v = parent_[v];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

Eigen::Matrix3d CayleyBall::matrix(VertexId v, const ReflectionRep& rep) const {
  return rep.evaluate(word(v));
}

std::vector<std::size_t> CayleyBall::sphere_sizes() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k + 1 < sphere_offsets_.size(); ++k) {
    out.push_back(sphere_offsets_[k + 1] - sphere_offsets_[k]);
  }
  return out;
}

CayleyBall build_ball(const GroupParams& params, int radius,
                      const BallOptions& options) {
  if (radius < 1) {
    throw Error(ErrorCode::kInvalidParameter, "ball radius must be >= 1");
  }
  return options.mode == IdentityMode::kDihedralClosure
             ? build_dihedral(params, radius, options)
             : build_matrix_key(params, radius, options);
}

std::array<std::int64_t, 9> matrix_key(const Eigen::Matrix3d& m, double quantum) {
  std::array<std::int64_t, 9> key{};
  for (int e = 0; e < 9; ++e) {
    key[static_cast<std::size_t>(e)] =
        std::llround(m(e / 3, e % 3) / quantum);
  }
  return key;
}

BallInvariantReport check_invariants(const CayleyBall& ball,
                                     bool check_determinants) {
  BallInvariantReport report;
  auto fail = [&report](bool& flag, std::string msg) {
    if (report.violations.size() < 20) report.violations.push_back(std::move(msg));
    flag = false;
  };
  if (ball.size() == 0 || ball.norm(0) != 0 || !ball.word(0).empty()) {
    fail(report.identity_at_zero, "vertex 0 is not the identity");
  }
  for (VertexId v = 0; v < ball.size(); ++v) {
    int present = 0;
    for (Generator s : kGenerators) {
      const VertexId w = ball.neighbour(v, s);
      if (w == kNoVertex) continue;
      ++present;
      if (w == v) fail(report.simple, "loop at " + std::to_string(v));
      if (ball.neighbour(w, s) != v) {
        fail(report.simple, "asymmetric edge at " + std::to_string(v));
      }
      if (std::abs(ball.norm(w) - ball.norm(v)) != 1) {
        fail(report.bipartite, "edge " + std::to_string(v) + "-" +
                                   std::to_string(w) + " does not change norm by 1");
      }
      for (Generator t : kGenerators) {
        if (t != s && ball.neighbour(v, t) == w) {
          fail(report.simple, "multi-edge at " + std::to_string(v));
        }
      }
    }
    if (ball.norm(v) < ball.radius() && present != 3) {
      fail(report.trivalent_interior,
           "interior vertex " + std::to_string(v) + " has degree " +
               std::to_string(present));
    }
  }
  if (check_determinants) {
    const ReflectionRep rep = reflection_rep(ball.params());
    // Parents lie on the previous sphere, so two spheres of matrices suffice.
    std::vector<Eigen::Matrix3d> prev{Eigen::Matrix3d::Identity()};
    for (int k = 1; k <= ball.radius(); ++k) {
      const VertexId pb = ball.sphere_begin(k - 1);
      const VertexId b = ball.sphere_begin(k);
      const VertexId e = ball.sphere_begin(k + 1);
      std::vector<Eigen::Matrix3d> cur(e - b);
      for (VertexId v = b; v < e; ++v) {
        // parent is the shortlex-least predecessor
        VertexId parent = kNoVertex;
        Generator via = Generator::L;
        for (Generator s : kGenerators) {
          const VertexId w = ball.neighbour(v, s);
          if (w != kNoVertex && ball.norm(w) == k - 1 && (parent == kNoVertex || w < parent)) {
            parent = w;
            via = s;
          }
        }
        if (parent == kNoVertex) {
          fail(report.bipartite, "vertex " + std::to_string(v) + " has no predecessor");
          continue;
        }
        cur[v - b] = prev[parent - pb] * rep[via];
        // Entries grow exponentially with k; once the rounding error of the
        // cofactor expansion can reach |det| = 1 the float sign says nothing.
        const double scale = cur[v - b].cwiseAbs().maxCoeff();
        if (6.0 * std::numeric_limits<double>::epsilon() * scale * scale * scale > 0.5) continue;
        const double det = cur[v - b].determinant();
        const double expected = (k % 2 == 0) ? 1.0 : -1.0;
        if (!(det * expected > 0)) {
          fail(report.determinant_parity,
               "det sign mismatch at vertex " + std::to_string(v));
        }
      }
      prev = std::move(cur);
    }
  }
  return report;
}

std::string ball_to_json(const CayleyBall& ball) {
  nlohmann::json doc;
  const GroupParams& p = ball.params();
  doc["params"] = {p.l(), p.m(), p.n()};
  doc["radius"] = ball.radius();
  auto& verts = doc["vertices"] = nlohmann::json::array();
  for (VertexId v = 0; v < ball.size(); ++v) {
    verts.push_back({{"id", v}, {"norm", ball.norm(v)}});
  }
  auto& edges = doc["edges"] = nlohmann::json::array();
  for (const Edge& e : ball.edges()) {
    edges.push_back({e.a, e.b, std::string(1, to_char(e.label))});
  }
  return doc.dump();
}

std::string ball_to_csv(const CayleyBall& ball) {
  std::ostringstream out;
  out << "id,norm,L,M,N\n";
  for (VertexId v = 0; v < ball.size(); ++v) {
    out << v << ',' << ball.norm(v);
    for (Generator s : kGenerators) {
      out << ',';
      const VertexId w = ball.neighbour(v, s);
      if (w != kNoVertex) out << w;
    }
    out << '\n';
  }
  return out.str();
}

namespace {

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorCode::kSchemaError, "truncated ball snapshot");
  return v;
}

constexpr std::uint32_t kBallMagic = 0x31424348;  // "HCB1"

}  // namespace

void write_ball(std::ostream& out, const CayleyBall& ball) {
  put(out, kBallMagic);
  put<std::int32_t>(out, ball.params().l());
  put<std::int32_t>(out, ball.params().m());
  put<std::int32_t>(out, ball.params().n());
  put<std::int32_t>(out, ball.radius());
  put<std::uint64_t>(out, ball.size());
  for (VertexId v = 1; v < ball.size(); ++v) {
    const Word w = ball.word(v);
    put<std::int32_t>(out, ball.norm(v));
    // parent is the word minus its last letter
    VertexId parent = 0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) parent = ball.neighbour(parent, w[i]);
    put<std::uint32_t>(out, parent);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(index(w.back())));
    for (Generator s : kGenerators) put<std::uint32_t>(out, ball.neighbour(v, s));
  }
}

CayleyBall read_ball(std::istream& in) {
  if (get<std::uint32_t>(in) != kBallMagic) {
    throw Error(ErrorCode::kSchemaError, "not a ball snapshot");
  }
  const int l = get<std::int32_t>(in);
  const int m = get<std::int32_t>(in);
  const int n = get<std::int32_t>(in);
  const int radius = get<std::int32_t>(in);
  const auto count = get<std::uint64_t>(in);
  CayleyBall ball(GroupParams::make(l, m, n), radius);
  int current = 0;
  std::vector<std::array<VertexId, 3>> links(count);
  for (std::uint64_t v = 1; v < count; ++v) {
    const int norm = get<std::int32_t>(in);
    const auto parent = get<std::uint32_t>(in);
    const auto via = static_cast<Generator>(get<std::uint8_t>(in));
    while (current < norm) {
      if (current > 0) ball.close_sphere();
      ++current;
    }
    ball.add_vertex(norm, parent, via);
    for (auto& w : links[v]) w = get<std::uint32_t>(in);
  }
  while (current < radius) {
    if (current > 0) ball.close_sphere();
    ++current;
  }
  ball.close_sphere();
  for (VertexId v = 1; v < count; ++v) {
    for (Generator s : kGenerators) {
      const VertexId w = links[v][static_cast<std::size_t>(index(s))];
      if (w != kNoVertex) ball.link(v, s, w);
    }
  }
  return ball;
}

}  // namespace hypcone
