#include "hypcone/group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <optional>
#include <unordered_set>

namespace hypcone {

char to_char(Generator s) noexcept { return "LMN"[index(s)]; }

Word parse_word(std::string_view letters) {
  Word w;
  w.reserve(letters.size());
  for (char c : letters) {
    switch (c) {
      case 'L': w.push_back(Generator::L); break;
      case 'M': w.push_back(Generator::M); break;
      case 'N': w.push_back(Generator::N); break;
      default:
        throw Error(ErrorCode::kInvalidParameter,
                    std::string("not a generator letter: ") + c);
    }
  }
  return w;
}

std::string to_string(const Word& w) {
  std::string out;
  out.reserve(w.size());
  for (Generator s : w) out.push_back(to_char(s));
  return out;
}

GroupParams GroupParams::make(int l, int m, int n) {
  if (l < 2 || m < 2 || n < 2) {
    throw Error(ErrorCode::kInvalidParameter,
                "exponents must be >= 2, got (" + std::to_string(l) + "," +
                    std::to_string(m) + "," + std::to_string(n) + ")");
  }
  // 1/l + 1/m + 1/n < 1  <=>  mn + ln + lm < lmn, exact in integers.
  const long long lm = 1LL * l * m, ln = 1LL * l * n, mn = 1LL * m * n;
  if (mn + ln + lm >= lm * n) {
    throw Error(ErrorCode::kNonHyperbolic,
                "1/l + 1/m + 1/n >= 1 for (" + std::to_string(l) + "," +
                    std::to_string(m) + "," + std::to_string(n) + ")");
  }
  return GroupParams(l, m, n);
}

int GroupParams::max_exponent() const noexcept {
  return std::max({l_, m_, n_});
}

int GroupParams::coxeter_order(Generator s, Generator t) const noexcept {
  if (s == t) return 1;
  const int a = std::min(index(s), index(t));
  const int b = std::max(index(s), index(t));
  if (a == 0 && b == 1) return n_;  // (LM)^n
  if (a == 1 && b == 2) return l_;  // (MN)^l
  return m_;                        // (NL)^m
}

GroupParams GroupParams::canonical() const {
  std::array<int, 3> v = {l_, m_, n_};
  std::sort(v.begin(), v.end());
  return GroupParams(v[0], v[1], v[2]);
}

std::string GroupParams::name() const {
  return "Delta(" + std::to_string(l_) + "," + std::to_string(m_) + "," +
         std::to_string(n_) + ")";
}

Eigen::Matrix3d ReflectionRep::evaluate(const Word& w) const {
  Eigen::Matrix3d acc = Eigen::Matrix3d::Identity();
  for (Generator s : w) acc = acc * (*this)[s];
  return acc;
}

ReflectionRep reflection_rep(const GroupParams& params) {
  ReflectionRep rep;
  rep.gram = Eigen::Matrix3d::Identity();
  for (Generator s : kGenerators) {
    for (Generator t : kGenerators) {
      if (s == t) continue;
      rep.gram(index(s), index(t)) =
          -std::cos(std::numbers::pi / params.coxeter_order(s, t));
    }
  }
  for (Generator s : kGenerators) {
    const int i = index(s);
    Eigen::Matrix3d sigma = Eigen::Matrix3d::Identity();
    sigma.row(i) -= 2.0 * rep.gram.row(i);
    rep.sigma[static_cast<std::size_t>(i)] = sigma;
  }
  return rep;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Generator s : w) {
    if (!out.empty() && out.back() == s) {
      out.pop_back();
    } else {
      out.push_back(s);
    }
  }
  return out;
}

namespace {

Generator from_char(char c) {
  return c == 'L' ? Generator::L : (c == 'M' ? Generator::M : Generator::N);
}

// Applies every braid move (st... of length m_st -> ts...) at every position.
void braid_neighbours(const GroupParams& params, const std::string& w,
                      std::vector<std::string>& out) {
  out.clear();
  const std::size_t len = w.size();
  for (std::size_t i = 0; i + 1 < len; ++i) {
    if (w[i] == w[i + 1]) continue;
    const Generator s = from_char(w[i]);
    const Generator t = from_char(w[i + 1]);
    const auto m = static_cast<std::size_t>(params.coxeter_order(s, t));
    if (i + m > len) continue;
    bool alternating = true;
    for (std::size_t k = 2; k < m && alternating; ++k) {
      alternating = w[i + k] == w[i + k - 2];
    }
    if (!alternating) continue;
    std::string v = w;
    for (std::size_t k = 0; k < m; ++k) v[i + k] = (k % 2 == 0) ? w[i + 1] : w[i];
    out.push_back(std::move(v));
  }
}

bool has_square(const std::string& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] == w[i + 1]) return true;
  }
  return false;
}

std::string cancel_first_square(const std::string& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] == w[i + 1]) {
      std::string v = w.substr(0, i) + w.substr(i + 2);
      return to_string(free_reduce(parse_word(v)));
    }
  }
  return w;
}

}  // namespace

Word tits_reduce(const GroupParams& params, const Word& w) {
  std::string current = to_string(free_reduce(w));
  std::vector<std::string> next;
  for (;;) {
    if (has_square(current)) {
      current = cancel_first_square(current);
      continue;
    }
    // Explore the braid class of `current` until a square shows up.
    std::unordered_set<std::string> seen{current};
    std::deque<std::string> queue{current};
    std::optional<std::string> shortened;
    std::string least = current;
    while (!queue.empty() && !shortened) {
      std::string v = std::move(queue.front());
      queue.pop_front();
      braid_neighbours(params, v, next);
      for (auto& u : next) {
        if (!seen.insert(u).second) continue;
        if (has_square(u)) {
          shortened = cancel_first_square(u);
          break;
        }
        least = std::min(least, u);
        queue.push_back(std::move(u));
      }
    }
    if (!shortened) return parse_word(least);
    current = std::move(*shortened);
  }
}

bool tits_equal(const GroupParams& params, const Word& w1, const Word& w2,
                std::size_t cap) {
  if (w1.size() + w2.size() > cap) {
    throw Error(ErrorCode::kCapExceeded,
                "combined word length " + std::to_string(w1.size() + w2.size()) +
                    " exceeds cap " + std::to_string(cap));
  }
  Word probe = w1;
  probe.insert(probe.end(), w2.rbegin(), w2.rend());
  return tits_reduce(params, probe).empty();
}

}  // namespace hypcone
