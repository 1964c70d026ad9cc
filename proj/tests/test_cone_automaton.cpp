#include <doctest.h>

#include <algorithm>
#include <array>
#include <numeric>

#include "hypcone/cone_automaton.hpp"

using namespace hypcone;

namespace {

// True if some relabelling of the types turns a into b.
bool equal_up_to_permutation(const IntMatrix& a, const IntMatrix& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    bool same = true;
    for (std::size_t i = 0; i < a.size() && same; ++i) {
      for (std::size_t j = 0; j < a.size() && same; ++j) {
        same = a[perm[i]][perm[j]] == b[i][j];
      }
    }
    if (same) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

const IntMatrix kPrinted444 = {
    {0, 3, 0, 0, 0, 0}, {0, 0, 2, 0, 0, 0}, {0, 0, 1, 1, 0, 0},
    {0, 0, 1, 0, 1, 0}, {0, 0, 0, 0, 0, 1}, {0, 0, 0, 2, 0, 0},
};

ConeTypeAutomaton tree_automaton() {
  ConeTypeAutomaton a;
  a.K_total = 1;
  a.M = {{2}};
  a.d = {3};
  a.r = {1};
  return a;
}

}  // namespace

TEST_CASE("Delta(4,4,4) has the printed adjacency matrix") {
  const GroupParams p = GroupParams::make(4, 4, 4);
  CayleyBall ball(p, 1);
  const ConeTypeAutomaton a = compute_automaton(p, {}, &ball);
  CHECK(a.K_total == 6);
  CHECK(equal_up_to_permutation(a.M, kPrinted444));
  REQUIRE(a.root_type.has_value());
  CHECK(a.r[static_cast<std::size_t>(*a.root_type)] == 0);
  CHECK_NOTHROW(validate(a));

  const ReducedAutomaton ra = reduce(a);
  CHECK(ra.size() == 4);
  CHECK(ra.primitivity_exponent > 0);
  for (int t : ra.types) CHECK(ra.local_index(t) >= 0);
  CHECK(ra.local_index(*a.root_type) == -1);
}

TEST_CASE("summits of Delta(n,n,n) form one type with two predecessors") {
  const GroupParams p = GroupParams::make(5, 5, 5);
  CayleyBall ball(p, 1);
  const ConeTypeAutomaton a = compute_automaton(p, {}, &ball);
  CHECK(a.K_total == 7);
  int summit = -1;
  for (VertexId v = 1; v < ball.size(); ++v) {
    const int t = a.type_of[v];
    if (t < 0) continue;
    if (ball.predecessors(v).size() == 2) {
      if (summit < 0) summit = t;
      CHECK(t == summit);
      CHECK(ball.successors(v).size() == 1);
    } else {
      CHECK(t != summit);
    }
  }
  REQUIRE(summit >= 0);
  CHECK(a.r[static_cast<std::size_t>(summit)] == 2);
}

TEST_CASE("cones of equal type are isomorphic, others are not") {
  const GroupParams p = GroupParams::make(3, 3, 4);
  CayleyBall ball(p, 1);
  const ConeTypeAutomaton a = compute_automaton(p, {}, &ball);
  const int k = a.stabilization_depth;
  std::vector<VertexId> first(static_cast<std::size_t>(a.K_total), kNoVertex);
  for (VertexId v = 0; v < ball.size(); ++v) {
    const int t = a.type_of[v];
    if (t < 0 || ball.norm(v) + k > ball.radius()) continue;
    auto& rep = first[static_cast<std::size_t>(t)];
    if (rep == kNoVertex) {
      rep = v;
    } else if (v % 7 == 0) {
      const TruncatedCone c1 = truncated_cone(ball, rep, k);
      const TruncatedCone c2 = truncated_cone(ball, v, k);
      CHECK(cone_signature(c1) == cone_signature(c2));
      CHECK(cones_isomorphic(c1, c2));
    }
  }
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = i + 1; j < first.size(); ++j) {
      if (first[i] == kNoVertex || first[j] == kNoVertex) continue;
      CHECK_FALSE(cones_isomorphic(truncated_cone(ball, first[i], k),
                                   truncated_cone(ball, first[j], k)));
    }
  }
}

TEST_CASE("truncated cone of the identity is the whole ball") {
  const GroupParams p = GroupParams::make(2, 3, 7);
  const CayleyBall ball = build_ball(p, 8);
  const TruncatedCone c = truncated_cone(ball, 0, 5);
  CHECK(c.size() == ball.sphere_begin(6));
  CHECK(c.level.front() == 0);
  CHECK(std::is_sorted(c.level.begin(), c.level.end()));
  CHECK(c.up.front().empty());
  CHECK_THROWS_AS(truncated_cone(ball, ball.sphere_begin(4), 5), Error);
}

TEST_CASE("cone-type counts follow the parameter family") {
  for (auto [l, m, n] : {std::array{4, 4, 4}, std::array{3, 3, 4}, std::array{3, 4, 4},
                         std::array{2, 5, 5}, std::array{7, 7, 7}}) {
    const GroupParams p = GroupParams::make(l, m, n);
    const ConeTypeAutomaton a = compute_automaton(p);
    const VerificationReport vr = verify_counts(p, a);
    CAPTURE(p.name());
    CHECK(vr.matches());
  }
  CHECK(verify_counts(GroupParams::make(2, 3, 7), 35).case_label == "iii.3");
  CHECK(verify_counts(GroupParams::make(7, 3, 2), 35).matches());
  CHECK(verify_counts(GroupParams::make(2, 4, 5), 25).case_label == "iii.2");
  CHECK(verify_counts(GroupParams::make(6, 2, 6), 17).case_label == "ii.2");
  CHECK(verify_counts(GroupParams::make(5, 7, 3), 28).case_label == "iii.1");
}

TEST_CASE("predicted spheres match the ball") {
  for (auto [l, m, n] : {std::array{4, 4, 4}, std::array{2, 4, 5}}) {
    const GroupParams p = GroupParams::make(l, m, n);
    CayleyBall ball(p, 1);
    const ConeTypeAutomaton a = compute_automaton(p, {}, &ball);
    const auto sizes = ball.sphere_sizes();
    const auto spheres = predicted_spheres(a, ball.radius() + 1);
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const long long total = std::accumulate(spheres[k].begin(), spheres[k].end(), 0LL);
      CAPTURE(k);
      CHECK(total == static_cast<long long>(sizes[k]));
    }
  }
}

TEST_CASE("reduction of small automata") {
  const ReducedAutomaton tree = reduce(tree_automaton());
  CHECK(tree.types == std::vector<int>{0});
  CHECK(tree.primitivity_exponent == 1);

  ConeTypeAutomaton two_sinks;
  two_sinks.K_total = 3;
  two_sinks.M = {{0, 1, 1}, {0, 2, 0}, {0, 0, 2}};
  two_sinks.d = {3, 3, 3};
  two_sinks.r = {1, 1, 1};
  CHECK_THROWS_WITH_AS(reduce(two_sinks), doctest::Contains("terminal"), Error);

  ConeTypeAutomaton periodic;
  periodic.K_total = 2;
  periodic.M = {{0, 2}, {2, 0}};
  periodic.d = {3, 3};
  periodic.r = {1, 1};
  try {
    reduce(periodic);
    FAIL("expected NotPrimitive");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotPrimitive);
  }

  CHECK(primitivity_exponent({{0, 1}, {1, 1}}) == 2);
  CHECK(primitivity_exponent({{0, 1}, {1, 0}}) == 0);
}

TEST_CASE("validate rejects inconsistent rows") {
  ConeTypeAutomaton a = tree_automaton();
  CHECK_NOTHROW(validate(a));
  a.r = {2};
  CHECK_THROWS_AS(validate(a), Error);
  a = tree_automaton();
  a.root_type = 0;
  CHECK_THROWS_AS(validate(a), Error);
}

TEST_CASE("DOT output lists every arc") {
  const GroupParams p = GroupParams::make(4, 4, 4);
  const ConeTypeAutomaton a = compute_automaton(p);
  const std::string dot = to_digraph_dot(a);
  CHECK(dot.rfind("digraph", 0) == 0);
  int arcs = 0;
  for (std::size_t pos = dot.find("->"); pos != std::string::npos; pos = dot.find("->", pos + 2)) {
    ++arcs;
  }
  int total = 0;
  for (const auto& row : a.M) total += std::accumulate(row.begin(), row.end(), 0);
  CHECK(arcs == total);
  CHECK(to_digraph_dot(reduce(a)).find("->") != std::string::npos);
}

TEST_CASE("cta-1 round trip and schema errors") {
  const GroupParams p = GroupParams::make(3, 3, 4);
  const ConeTypeAutomaton a = compute_automaton(p);
  const ReducedAutomaton ra = reduce(a);
  const std::string text = automaton_to_json(a, ra);
  const ImportedAutomaton back = automaton_from_json(text);
  CHECK(back.automaton.K_total == a.K_total);
  CHECK(back.automaton.M == a.M);
  CHECK(back.automaton.r == a.r);
  CHECK(back.automaton.root_type == a.root_type);
  CHECK(back.reduced.types == ra.types);
  CHECK(back.reduced.primitivity_exponent == ra.primitivity_exponent);
  REQUIRE(back.automaton.params.has_value());
  CHECK(*back.automaton.params == p);

  auto code_of = [](const std::string& doc) {
    try {
      automaton_from_json(doc);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidParameter;
  };
  CHECK(code_of("{") == ErrorCode::kSchemaError);
  CHECK(code_of(R"({"format": "cta-0"})") == ErrorCode::kSchemaError);
  CHECK(code_of(R"({"format": "cta-1", "K_total": 1, "M": [[2]], "d": [3], "r": [0],
                    "reduced": {"types": [0], "M": [[2]], "p": 1}})") ==
        ErrorCode::kSchemaError);
  CHECK(code_of(R"({"format": "cta-1", "K_total": 1, "M": [[2]], "d": [3], "r": [1],
                    "reduced": {"types": [0], "M": [[2]], "p": 3}})") ==
        ErrorCode::kSchemaError);
  CHECK(code_of(R"({"format": "cta-1", "K_total": 2, "M": [[0, 2], [2, 0]],
                    "d": [3, 3], "r": [1, 1],
                    "reduced": {"types": [0, 1], "M": [[0, 2], [2, 0]], "p": 1}})") ==
        ErrorCode::kNotPrimitive);
}
