#include "hypcone/cone_automaton.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace hypcone {

namespace {

constexpr std::uint64_t mix(std::uint64_t h, std::uint64_t v) noexcept {
  // splitmix64 finalizer over a running combination
  std::uint64_t x = h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2));
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

struct Refinement {
  std::vector<std::uint64_t> colour;
  std::uint64_t signature = 0;
};

Refinement refine(const TruncatedCone& cone) {
  const std::size_t n = cone.size();
  Refinement out;
  out.colour.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    out.colour[v] = mix(0x5A17, static_cast<std::uint64_t>(cone.level[v]));
  }
  std::vector<std::uint64_t> next(n), buf;
  auto distinct = [](std::vector<std::uint64_t> c) {
    std::sort(c.begin(), c.end());
    return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
  };
  std::size_t classes = distinct(out.colour);
  int rounds = 0;
  for (;;) {
    for (std::size_t v = 0; v < n; ++v) {
      std::uint64_t h = mix(out.colour[v], 0xA11CE);
      for (const auto* side : {&cone.up[v], &cone.down[v]}) {
        buf.clear();
        for (int w : *side) buf.push_back(out.colour[static_cast<std::size_t>(w)]);
        std::sort(buf.begin(), buf.end());
        h = mix(h, buf.size());
        for (std::uint64_t c : buf) h = mix(h, c);
      }
      next[v] = h;
    }
    ++rounds;
    const std::size_t refined = distinct(next);
    out.colour.swap(next);
    if (refined == classes) break;
    classes = refined;
  }
  std::vector<std::uint64_t> sorted = out.colour;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t sig = mix(static_cast<std::uint64_t>(rounds), n);
  sig = mix(sig, out.colour.empty() ? 0 : out.colour[0]);
  for (std::uint64_t c : sorted) sig = mix(sig, c);
  out.signature = sig;
  return out;
}

// Backtracking search for a root-preserving isomorphism compatible with the
// refined colours. Vertices of `a` are visited level by level, so every
// non-root vertex has an already-mapped predecessor constraining its image.
bool find_isomorphism(const TruncatedCone& a, const Refinement& ra,
                      const TruncatedCone& b, const Refinement& rb) {
  const std::size_t n = a.size();
  std::vector<int> image(n, -1);
  std::vector<char> used(n, 0);
  image[0] = 0;
  used[0] = 1;
  std::vector<std::vector<int>> candidates(n);
  std::vector<std::size_t> cursor(n, 0);
  std::size_t steps = 0;
  constexpr std::size_t kStepBudget = 50'000'000;

  auto fits = [&](std::size_t v, int u) {
    const auto uu = static_cast<std::size_t>(u);
    if (used[uu] || ra.colour[v] != rb.colour[uu]) return false;
    if (a.up[v].size() != b.up[uu].size() || a.down[v].size() != b.down[uu].size()) {
      return false;
    }
    for (int p : a.up[v]) {
      const int q = image[static_cast<std::size_t>(p)];
      if (std::find(b.up[uu].begin(), b.up[uu].end(), q) == b.up[uu].end()) return false;
    }
    return true;
  };
  auto prepare = [&](std::size_t v) {
    candidates[v].clear();
    cursor[v] = 0;
    const int anchor = image[static_cast<std::size_t>(a.up[v].front())];
    for (int u : b.down[static_cast<std::size_t>(anchor)]) {
      if (fits(v, u)) candidates[v].push_back(u);
    }
  };

  std::size_t v = 1;
  if (n > 1) prepare(1);
  while (v >= 1 && v < n) {
    if (++steps > kStepBudget) {
      throw Error(ErrorCode::kCapExceeded, "cone isomorphism search budget exhausted");
    }
    if (image[v] >= 0) {
      used[static_cast<std::size_t>(image[v])] = 0;
      image[v] = -1;
    }
    if (cursor[v] < candidates[v].size()) {
      const int u = candidates[v][cursor[v]++];
      if (used[static_cast<std::size_t>(u)]) continue;
      image[v] = u;
      used[static_cast<std::size_t>(u)] = 1;
      ++v;
      if (v < n) prepare(v);
    } else {
      --v;
    }
  }
  return v == n;
}

// Partition of the vertices with |x| <= R - k by depth-k cone isomorphism.
// Class ids follow first appearance in vertex order.
std::vector<int> cone_partition(const CayleyBall& ball, int depth) {
  const VertexId end = ball.sphere_begin(ball.radius() - depth + 1);
  std::vector<int> cls(end, -1);
  struct Rep {
    TruncatedCone cone;
    Refinement refinement;
    int id;
  };
  std::unordered_map<std::uint64_t, std::vector<Rep>> buckets;
  int next_id = 0;
  for (VertexId x = 0; x < end; ++x) {
    TruncatedCone cone = truncated_cone(ball, x, depth);
    Refinement ref = refine(cone);
    auto& bucket = buckets[ref.signature];
    int found = -1;
    for (const Rep& rep : bucket) {
      if (rep.cone.size() == cone.size() &&
          find_isomorphism(rep.cone, rep.refinement, cone, ref)) {
        found = rep.id;
        break;
      }
    }
    if (found < 0) {
      found = next_id++;
      bucket.push_back({std::move(cone), std::move(ref), found});
    }
    cls[x] = found;
  }
  return cls;
}

enum class AttemptStatus { kStabilized, kDisagree, kUncovered, kNonDeterministic };

struct Attempt {
  AttemptStatus status = AttemptStatus::kDisagree;
  ConeTypeAutomaton automaton;
};

// Checks depth k against depth k+1 and assembles the automaton.
Attempt assemble(const CayleyBall& ball, int depth, const std::vector<int>& coarse,
                 const std::vector<int>& fine) {
  Attempt out;
  // Same partition on the common domain (the finer depth's domain).
  std::vector<int> fwd, back;
  for (std::size_t v = 0; v < fine.size(); ++v) {
    const auto a = static_cast<std::size_t>(coarse[v]);
    const auto b = static_cast<std::size_t>(fine[v]);
    if (fwd.size() <= a) fwd.resize(a + 1, -1);
    if (back.size() <= b) back.resize(b + 1, -1);
    if ((fwd[a] >= 0 && fwd[a] != fine[v]) || (back[b] >= 0 && back[b] != coarse[v])) {
      return out;
    }
    fwd[a] = fine[v];
    back[b] = coarse[v];
  }

  const int K = *std::max_element(coarse.begin(), coarse.end()) + 1;
  IntMatrix M(static_cast<std::size_t>(K), std::vector<int>(static_cast<std::size_t>(K), 0));
  std::vector<int> preds(static_cast<std::size_t>(K), -1);
  std::vector<char> have_row(static_cast<std::size_t>(K), 0);
  bool deterministic = true;
  std::vector<int> row(static_cast<std::size_t>(K));
  for (VertexId v = 0; v < fine.size(); ++v) {
    std::fill(row.begin(), row.end(), 0);
    for (VertexId w : ball.successors(v)) ++row[static_cast<std::size_t>(coarse[w])];
    const auto t = static_cast<std::size_t>(coarse[v]);
    const int p = static_cast<int>(ball.predecessors(v).size());
    if (!have_row[t]) {
      M[t] = row;
      preds[t] = p;
      have_row[t] = 1;
    } else if (M[t] != row || preds[t] != p) {
      deterministic = false;
    }
  }
  if (!deterministic) {
    out.status = AttemptStatus::kNonDeterministic;
    return out;
  }
  if (std::find(have_row.begin(), have_row.end(), 0) != have_row.end()) {
    out.status = AttemptStatus::kUncovered;
    return out;
  }

  ConeTypeAutomaton& a = out.automaton;
  a.K_total = K;
  a.M = std::move(M);
  a.d.assign(static_cast<std::size_t>(K), 3);
  a.r.resize(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    a.r[ii] = a.d[ii] - std::accumulate(a.M[ii].begin(), a.M[ii].end(), 0);
  }
  a.root_type = coarse[0];
  a.params = ball.params();
  a.type_of.assign(ball.size(), -1);
  std::copy(coarse.begin(), coarse.end(), a.type_of.begin());
  a.stabilization_depth = depth;
  a.ball_radius = ball.radius();
  validate(a);
  out.status = AttemptStatus::kStabilized;
  return out;
}

Attempt try_extract(const CayleyBall& ball, const ExtractOptions& options) {
  const int R = ball.radius();
  const int start = options.start_depth > 0 ? options.start_depth
                                            : ball.params().max_exponent() + 2;
  const int stop = options.max_depth > 0 ? std::min(options.max_depth, R - 2) : R - 2;
  Attempt last;
  bool saw_uncovered = false;
  bool saw_nondeterministic = false;
  if (start > stop) return last;
  std::vector<int> coarse = cone_partition(ball, start);
  for (int k = start; k <= stop; ++k) {
    std::vector<int> fine = cone_partition(ball, k + 1);
    Attempt attempt = assemble(ball, k, coarse, fine);
    if (attempt.status == AttemptStatus::kStabilized) return attempt;
    saw_uncovered |= attempt.status == AttemptStatus::kUncovered;
    saw_nondeterministic |= attempt.status == AttemptStatus::kNonDeterministic;
    coarse = std::move(fine);
  }
  if (saw_nondeterministic) {
    last.status = AttemptStatus::kNonDeterministic;
  } else if (saw_uncovered) {
    last.status = AttemptStatus::kUncovered;
  }
  return last;
}

}  // namespace

TruncatedCone truncated_cone(const CayleyBall& ball, VertexId x, int depth) {
  if (depth < 0 || ball.norm(x) + depth > ball.radius()) {
    throw Error(ErrorCode::kDepthExceedsBall,
                "cone of vertex " + std::to_string(x) + " at depth " +
                    std::to_string(depth) + " leaves the ball of radius " +
                    std::to_string(ball.radius()));
  }
  TruncatedCone cone;
  cone.root = x;
  cone.depth = depth;
  std::unordered_map<VertexId, int> local;
  cone.vertices.push_back(x);
  cone.level.push_back(0);
  local.emplace(x, 0);
  std::size_t begin = 0;
  for (int d = 1; d <= depth; ++d) {
    const std::size_t end = cone.vertices.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (Generator s : kGenerators) {
        const VertexId y = ball.neighbour(cone.vertices[i], s);
        if (y == kNoVertex || ball.norm(y) <= ball.norm(cone.vertices[i])) continue;
        if (local.emplace(y, static_cast<int>(cone.vertices.size())).second) {
          cone.vertices.push_back(y);
          cone.level.push_back(d);
        }
      }
    }
    begin = end;
  }
  cone.up.resize(cone.size());
  cone.down.resize(cone.size());
  for (std::size_t i = 0; i < cone.size(); ++i) {
    if (cone.level[i] == 0) continue;
    for (Generator s : kGenerators) {
      const VertexId y = ball.neighbour(cone.vertices[i], s);
      if (y == kNoVertex || ball.norm(y) >= ball.norm(cone.vertices[i])) continue;
      if (auto it = local.find(y); it != local.end()) {
        cone.up[i].push_back(it->second);
        cone.down[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(i));
      }
    }
  }
  return cone;
}

std::uint64_t cone_signature(const TruncatedCone& cone) { return refine(cone).signature; }

bool cones_isomorphic(const TruncatedCone& a, const TruncatedCone& b) {
  if (a.depth != b.depth || a.size() != b.size()) return false;
  const Refinement ra = refine(a);
  const Refinement rb = refine(b);
  if (ra.signature != rb.signature) return false;
  return find_isomorphism(a, ra, b, rb);
}

ConeTypeAutomaton extract_automaton(const CayleyBall& ball, const ExtractOptions& options) {
  Attempt attempt = try_extract(ball, options);
  switch (attempt.status) {
    case AttemptStatus::kStabilized:
      return std::move(attempt.automaton);
    case AttemptStatus::kNonDeterministic:
      throw Error(ErrorCode::kNonDeterministic,
                  "vertices of one cone type have different successor types");
    case AttemptStatus::kUncovered:
      throw Error(ErrorCode::kNotStabilized,
                  "some cone types only occur at the edge of the typed region");
    case AttemptStatus::kDisagree:
      break;
  }
  throw Error(ErrorCode::kNotStabilized,
              "cone partition did not stabilize within radius " +
                  std::to_string(ball.radius()));
}

ConeTypeAutomaton compute_automaton(const GroupParams& params,
                                    const AutomatonOptions& options,
                                    CayleyBall* ball_out) {
  const int mx = params.max_exponent();
  int depth = options.start_depth > 0 ? options.start_depth : mx + 2;
  int headroom = mx + 4;
  for (int attempt = 0; attempt < 12 && depth <= options.max_depth; ++attempt) {
    const int radius = options.radius_override > 0 ? options.radius_override
                                                   : depth + headroom;
    CayleyBall ball = options.build ? options.build(params, radius)
                                    : build_ball(params, radius, options.ball);
    ExtractOptions ex;
    ex.start_depth = depth;
    Attempt result = try_extract(ball, ex);
    if (result.status == AttemptStatus::kStabilized) {
      if (ball_out) *ball_out = std::move(ball);
      return std::move(result.automaton);
    }
    if (options.radius_override > 0) break;
    // Types seen only near the boundary need a wider typed region; a
    // disagreement between depths needs deeper cones.
    if (result.status == AttemptStatus::kUncovered) {
      headroom += 2;
    } else {
      depth += 2;
    }
  }
  throw Error(ErrorCode::kNotStabilized,
              "no stable cone partition for " + params.name());
}

void validate(const ConeTypeAutomaton& a) {
  const auto K = static_cast<std::size_t>(a.K_total);
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kSchemaError, msg); };
  if (a.K_total < 1) fail("automaton has no types");
  if (a.M.size() != K || a.d.size() != K || a.r.size() != K) fail("dimension mismatch");
  for (std::size_t i = 0; i < K; ++i) {
    if (a.M[i].size() != K) fail("matrix is not square");
    int sum = 0;
    for (int v : a.M[i]) {
      if (v < 0) fail("negative matrix entry");
      sum += v;
    }
    if (a.d[i] < 1) fail("degree must be positive");
    if (a.r[i] != a.d[i] - sum) {
      fail("r[" + std::to_string(i) + "] != d - row sum");
    }
    const bool is_root = a.root_type && static_cast<std::size_t>(*a.root_type) == i;
    if (is_root && a.r[i] != 0) fail("root type must have no predecessors");
    if (!is_root && a.r[i] < 1) {
      fail("type " + std::to_string(i) + " has no predecessors");
    }
  }
  if (a.root_type && (*a.root_type < 0 || static_cast<std::size_t>(*a.root_type) >= K)) {
    fail("root type out of range");
  }
}

int ReducedAutomaton::local_index(int type) const {
  const auto it = std::lower_bound(types.begin(), types.end(), type);
  return (it != types.end() && *it == type) ? static_cast<int>(it - types.begin()) : -1;
}

int primitivity_exponent(const IntMatrix& M) {
  const std::size_t n = M.size();
  if (n == 0) return 0;
  using Bool = std::vector<std::vector<char>>;
  Bool base(n, std::vector<char>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) base[i][j] = M[i][j] > 0;
  }
  Bool power = base;
  for (std::size_t p = 1; p <= n * n; ++p) {
    bool positive = true;
    for (const auto& row : power) {
      positive = positive && std::all_of(row.begin(), row.end(), [](char c) { return c; });
    }
    if (positive) return static_cast<int>(p);
    Bool next(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!power[i][k]) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] |= base[k][j];
      }
    }
    power = std::move(next);
  }
  return 0;
}

ReducedAutomaton reduce(const ConeTypeAutomaton& a) {
  const int K = a.K_total;
  // Tarjan's algorithm, iterative.
  std::vector<int> index(static_cast<std::size_t>(K), -1), low(static_cast<std::size_t>(K), 0),
      comp(static_cast<std::size_t>(K), -1);
  std::vector<char> on_stack(static_cast<std::size_t>(K), 0);
  std::vector<int> stack;
  int counter = 0, components = 0;
  for (int root = 0; root < K; ++root) {
    if (index[static_cast<std::size_t>(root)] >= 0) continue;
    std::vector<std::pair<int, int>> call{{root, 0}};
    while (!call.empty()) {
      auto& [v, next] = call.back();
      const auto vv = static_cast<std::size_t>(v);
      if (next == 0 && index[vv] < 0) {
        index[vv] = low[vv] = counter++;
        stack.push_back(v);
        on_stack[vv] = 1;
      }
      bool descended = false;
      while (next < K) {
        const int w = next++;
        const auto ww = static_cast<std::size_t>(w);
        if (a.M[vv][ww] == 0) continue;
        if (index[ww] < 0) {
          call.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[ww]) low[vv] = std::min(low[vv], index[ww]);
      }
      if (descended) continue;
      if (low[vv] == index[vv]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = components;
        } while (w != v);
        ++components;
      }
      const int finished = v;
      call.pop_back();
      if (!call.empty()) {
        const auto parent = static_cast<std::size_t>(call.back().first);
        low[parent] = std::min(low[parent], low[static_cast<std::size_t>(finished)]);
      }
    }
  }
  std::vector<char> terminal(static_cast<std::size_t>(components), 1);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const auto ci = comp[static_cast<std::size_t>(i)];
      if (a.M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > 0 &&
          ci != comp[static_cast<std::size_t>(j)]) {
        terminal[static_cast<std::size_t>(ci)] = 0;
      }
    }
  }
  const auto count = std::count(terminal.begin(), terminal.end(), 1);
  if (count != 1) {
    throw Error(ErrorCode::kMultipleTerminalSCCs,
                std::to_string(count) + " terminal components in the type digraph");
  }
  const int keep = static_cast<int>(std::find(terminal.begin(), terminal.end(), 1) - terminal.begin());
  ReducedAutomaton out;
  for (int i = 0; i < K; ++i) {
    if (comp[static_cast<std::size_t>(i)] == keep) out.types.push_back(i);
  }
  for (int i : out.types) {
    std::vector<int> row;
    for (int j : out.types) row.push_back(a.M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    out.M.push_back(std::move(row));
    out.d.push_back(a.d[static_cast<std::size_t>(i)]);
    out.r.push_back(a.r[static_cast<std::size_t>(i)]);
  }
  out.primitivity_exponent = primitivity_exponent(out.M);
  if (out.primitivity_exponent == 0) {
    throw Error(ErrorCode::kNotPrimitive, "reduced cone-type matrix is not primitive");
  }
  return out;
}

VerificationReport verify_counts(const GroupParams& params, int actual) {
  VerificationReport rep;
  rep.actual = actual;
  const int a = params.l(), b = params.m(), c = params.n();
  if (a == b && b == c) {
    rep.case_label = "i";
    rep.expected = a + 2;
  } else if (a == b || b == c || a == c) {
    // The repeated value plays the role of n.
    const int n = (a == b) ? a : c;
    const int l = (a == b) ? c : (b == c ? a : b);
    if (l == 2) {
      rep.case_label = "ii.2";
      rep.expected = 2 * n + 5;
    } else {
      rep.case_label = "ii.1";
      rep.expected = l + 2 * n + 1;
    }
  } else {
    std::array<int, 3> v = {a, b, c};
    std::sort(v.begin(), v.end());
    const auto [l, m, n] = v;
    if (l >= 3) {
      rep.case_label = "iii.1";
      rep.expected = 2 * (l + m + n) - 2;
    } else if (m >= 4) {
      rep.case_label = "iii.2";
      rep.expected = 2 * m + 2 * n + 7;
    } else {
      rep.case_label = "iii.3";
      rep.expected = 2 * n + 21;
    }
  }
  return rep;
}

VerificationReport verify_counts(const GroupParams& params, const ConeTypeAutomaton& a) {
  return verify_counts(params, a.K_total);
}

namespace {

std::string dot(const std::vector<int>& ids, const IntMatrix& M, const std::vector<int>& r) {
  std::ostringstream out;
  out << "digraph cone_types {\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << "  " << ids[i] << " [label=\"" << ids[i] << "\"";
    if (r[i] != 1) out << ", xlabel=\"" << r[i] << "\"";
    out << "];\n";
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = 0; j < ids.size(); ++j) {
      for (int k = 0; k < M[i][j]; ++k) out << "  " << ids[i] << " -> " << ids[j] << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string to_digraph_dot(const ConeTypeAutomaton& a) {
  std::vector<int> ids(static_cast<std::size_t>(a.K_total));
  std::iota(ids.begin(), ids.end(), 0);
  return dot(ids, a.M, a.r);
}

std::string to_digraph_dot(const ReducedAutomaton& a) { return dot(a.types, a.M, a.r); }

std::string automaton_to_json(const ConeTypeAutomaton& a, const ReducedAutomaton& reduced) {
  nlohmann::ordered_json doc;
  doc["format"] = "cta-1";
  if (a.params) doc["params"] = {a.params->l(), a.params->m(), a.params->n()};
  doc["K_total"] = a.K_total;
  doc["root_type"] = a.root_type ? nlohmann::ordered_json(*a.root_type) : nlohmann::ordered_json();
  doc["M"] = a.M;
  doc["d"] = a.d;
  doc["r"] = a.r;
  doc["reduced"] = {{"types", reduced.types},
                    {"M", reduced.M},
                    {"p", reduced.primitivity_exponent}};
  return doc.dump(2);
}

ImportedAutomaton automaton_from_json(const std::string& text) {
  auto fail = [](const std::string& msg) -> void {
    throw Error(ErrorCode::kSchemaError, msg);
  };
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("invalid JSON: ") + e.what());
  }
  ImportedAutomaton out;
  ConeTypeAutomaton& a = out.automaton;
  try {
    if (!doc.is_object() || doc.value("format", "") != "cta-1") fail("format must be \"cta-1\"");
    for (const char* key : {"K_total", "M", "d", "r", "reduced"}) {
      if (!doc.contains(key)) fail(std::string("missing field ") + key);
    }
    a.K_total = doc.at("K_total").get<int>();
    a.M = doc.at("M").get<IntMatrix>();
    a.d = doc.at("d").get<std::vector<int>>();
    a.r = doc.at("r").get<std::vector<int>>();
    if (doc.contains("root_type") && !doc["root_type"].is_null()) {
      a.root_type = doc["root_type"].get<int>();
    }
    if (doc.contains("params") && !doc["params"].is_null()) {
      const auto p = doc["params"].get<std::vector<int>>();
      if (p.size() != 3) fail("params must have three entries");
      a.params = GroupParams::make(p[0], p[1], p[2]);
    }
    validate(a);
    const auto& red = doc.at("reduced");
    ReducedAutomaton& ra = out.reduced;
    ra.types = red.at("types").get<std::vector<int>>();
    const IntMatrix given = red.at("M").get<IntMatrix>();
    const int p = red.at("p").get<int>();
    if (ra.types.empty() || !std::is_sorted(ra.types.begin(), ra.types.end()) ||
        std::adjacent_find(ra.types.begin(), ra.types.end()) != ra.types.end()) {
      fail("reduced types must be strictly increasing");
    }
    for (int t : ra.types) {
      if (t < 0 || t >= a.K_total) fail("reduced type out of range");
    }
    for (int i : ra.types) {
      std::vector<int> row;
      for (int j : ra.types) {
        row.push_back(a.M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      }
      ra.M.push_back(std::move(row));
      ra.d.push_back(a.d[static_cast<std::size_t>(i)]);
      ra.r.push_back(a.r[static_cast<std::size_t>(i)]);
    }
    if (given != ra.M) fail("reduced matrix does not match the full matrix");
    ra.primitivity_exponent = primitivity_exponent(ra.M);
    if (ra.primitivity_exponent == 0) {
      throw Error(ErrorCode::kNotPrimitive, "reduced part is not primitive");
    }
    if (p != ra.primitivity_exponent) fail("primitivity exponent mismatch");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("bad field type: ") + e.what());
  }
  return out;
}

std::vector<std::vector<long long>> predicted_spheres(const ConeTypeAutomaton& a, int count) {
  if (!a.root_type) throw Error(ErrorCode::kSchemaError, "automaton has no root type");
  const auto K = static_cast<std::size_t>(a.K_total);
  std::vector<std::vector<long long>> out;
  std::vector<long long> s(K, 0);
  s[static_cast<std::size_t>(*a.root_type)] = 1;
  out.push_back(s);
  for (int k = 0; k < count; ++k) {
    std::vector<long long> next(K, 0);
    for (std::size_t i = 0; i < K; ++i) {
      long long edges = 0;
      for (std::size_t j = 0; j < K; ++j) edges += a.M[j][i] * s[j];
      if (edges == 0) continue;
      if (a.r[i] == 0 || edges % a.r[i] != 0) {
        throw Error(ErrorCode::kSchemaError, "sphere recursion is not integral");
      }
      next[i] = edges / a.r[i];
    }
    s = std::move(next);
    out.push_back(s);
  }
  return out;
}

}  // namespace hypcone
