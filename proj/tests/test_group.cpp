#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypcone/group.hpp"

using namespace hypcone;

namespace {

double inf_norm(const Eigen::Matrix3d& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::Matrix3d power(const Eigen::Matrix3d& m, int k) {
  Eigen::Matrix3d out = Eigen::Matrix3d::Identity();
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

ErrorCode code_of(int l, int m, int n) {
  try {
    GroupParams::make(l, m, n);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kSchemaError;
}

}  // namespace

TEST_CASE("new_params accepts hyperbolic triples and rejects the rest") {
  CHECK_NOTHROW(GroupParams::make(4, 4, 4));
  CHECK_NOTHROW(GroupParams::make(2, 3, 7));
  CHECK(code_of(2, 3, 6) == ErrorCode::kNonHyperbolic);
  CHECK(code_of(3, 3, 3) == ErrorCode::kNonHyperbolic);
  CHECK(code_of(2, 2, 100) == ErrorCode::kNonHyperbolic);
  CHECK(code_of(1, 7, 7) == ErrorCode::kInvalidParameter);

  const auto p = GroupParams::make(7, 3, 2);
  CHECK(p.l() == 7);
  CHECK(p.canonical() == GroupParams::make(2, 3, 7));
  CHECK(p.name() == "Delta(7,3,2)");
}

TEST_CASE("coxeter orders follow (LM)^n, (MN)^l, (NL)^m") {
  const auto p = GroupParams::make(2, 3, 7);
  CHECK(p.coxeter_order(Generator::L, Generator::M) == 7);
  CHECK(p.coxeter_order(Generator::M, Generator::N) == 2);
  CHECK(p.coxeter_order(Generator::N, Generator::L) == 3);
  CHECK(p.coxeter_order(Generator::M, Generator::M) == 1);
}

TEST_CASE("reflection representation invariants") {
  for (auto [l, m, n] : {std::array{4, 4, 4}, std::array{2, 3, 7},
                         std::array{3, 5, 7}, std::array{7, 7, 7}}) {
    const auto params = GroupParams::make(l, m, n);
    const ReflectionRep rep = reflection_rep(params);
    for (Generator s : kGenerators) {
      const auto& sig = rep[s];
      CHECK(inf_norm(sig * sig - Eigen::Matrix3d::Identity()) <= 1e-12);
      CHECK(inf_norm(sig.transpose() * rep.gram * sig - rep.gram) <= 1e-12);
      CHECK(std::abs(sig.determinant() + 1.0) <= 1e-12);
    }
    const auto& L = rep[Generator::L];
    const auto& M = rep[Generator::M];
    const auto& N = rep[Generator::N];
    CHECK(inf_norm(power(L * M, n) - Eigen::Matrix3d::Identity()) <= 1e-11);
    CHECK(inf_norm(power(M * N, l) - Eigen::Matrix3d::Identity()) <= 1e-11);
    CHECK(inf_norm(power(N * L, m) - Eigen::Matrix3d::Identity()) <= 1e-11);
  }

  const ReflectionRep r444 = reflection_rep(GroupParams::make(4, 4, 4));
  CHECK(r444.gram(0, 1) == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(r444.gram(1, 2) == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(r444.gram(2, 0) == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-15));

  const ReflectionRep r237 = reflection_rep(GroupParams::make(2, 3, 7));
  CHECK(std::abs(r237.gram(1, 2)) < 1e-15);
  const Eigen::Matrix3d mn = r237[Generator::M] * r237[Generator::N];
  const Eigen::Matrix3d nm = r237[Generator::N] * r237[Generator::M];
  CHECK(inf_norm(mn - nm) <= 1e-12);
}

TEST_CASE("free_reduce cancels adjacent pairs") {
  CHECK(to_string(free_reduce(parse_word("LLM"))) == "M");
  CHECK(free_reduce(Word{}).empty());
  CHECK(free_reduce(parse_word("LMML")).empty());
  CHECK(to_string(free_reduce(parse_word("LMNNMLM"))) == "M");
  CHECK_THROWS_AS(parse_word("LX"), Error);
}

TEST_CASE("tits_equal decides the word problem") {
  const auto p237 = GroupParams::make(2, 3, 7);
  const auto p444 = GroupParams::make(4, 4, 4);
  CHECK(tits_equal(p237, parse_word("MN"), parse_word("NM")));
  CHECK_FALSE(tits_equal(p444, parse_word("MN"), parse_word("NM")));
  CHECK_FALSE(tits_equal(p444, parse_word("L"), parse_word("M")));
  CHECK_FALSE(tits_equal(p237, parse_word("L"), parse_word("M")));
  CHECK(tits_equal(p444, parse_word("LMLMLMLM"), Word{}));
  CHECK_FALSE(tits_equal(p444, parse_word("LMLMLM"), Word{}));
  // (NL)^3 = e in Delta(2,3,7), so LNL = NLN.
  CHECK(tits_equal(p237, parse_word("LNL"), parse_word("NLN")));
  // Needs a braid move before anything cancels.
  CHECK(tits_equal(p237, parse_word("LNLN"), parse_word("NL")));
  CHECK_THROWS_AS(tits_equal(p444, Word(20, Generator::L), Word(5, Generator::M)),
                  Error);
}

TEST_CASE("tits_equal agrees with the reflection representation on short words") {
  // All words of length <= 5 against identity: matrix test vs Tits.
  for (auto [l, m, n] : {std::array{2, 3, 7}, std::array{3, 3, 4}}) {
    const auto params = GroupParams::make(l, m, n);
    const ReflectionRep rep = reflection_rep(params);
    for (int len = 1; len <= 6; ++len) {
      int total = 1;
      for (int i = 0; i < len; ++i) total *= 3;
      for (int code = 0; code < total; ++code) {
        Word w;
        for (int c = code, i = 0; i < len; ++i, c /= 3) {
          w.push_back(static_cast<Generator>(c % 3));
        }
        const bool by_matrix =
            inf_norm(rep.evaluate(w) - Eigen::Matrix3d::Identity()) < 1e-9;
        CHECK(tits_equal(params, w, Word{}) == by_matrix);
      }
    }
  }
}
