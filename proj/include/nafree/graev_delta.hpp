#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nafree/free_group.hpp"
#include "nafree/rational.hpp"
#include "nafree/ultrametric.hpp"

namespace nafree {

/*
 * Ultra-metric on the symmetrized alphabet X u X^-1 u {e} of n generators.
 * Index layout: x_i -> 2i, x_i^-1 -> 2i+1, e -> 2n.
 */
class SymmetrizedAlphabet {
public:
  SymmetrizedAlphabet() = default;

  explicit SymmetrizedAlphabet(DistanceMatrix dist) : dist_(std::move(dist)) {
    if (dist_.size() % 2 == 0) throw InputError("symmetrized alphabet must have 2n+1 letters (missing inverses or e)");
    auto report = validate_ultrametric(dist_);
    if (!report) throw InputError("alphabet metric is not an ultra-metric: " + report.message);
  }

  std::size_t generators() const { return dist_.size() / 2; }
  std::size_t size() const { return dist_.size(); }
  std::size_t identity() const { return dist_.size() - 1; }
  static std::size_t index(const Letter& l) { return 2 * static_cast<std::size_t>(l.gen) + (l.exp < 0 ? 1 : 0); }
  /// Index of the formal inverse; e is its own inverse.
  std::size_t inverse_index(std::size_t i) const { return i == identity() ? i : (i ^ 1U); }

  const Rational& d(std::size_t a, std::size_t b) const { return dist_[a][b]; }
  const DistanceMatrix& matrix() const { return dist_; }

private:
  DistanceMatrix dist_;
};

struct GrauCheck {
  bool ok = true;
  std::string violation;
  /// d(x^-1, y) = max(d(x,e), d(y,e)) for all generators x, y
  bool strong_hypothesis = false;
};

/// Checks d(x^-1,y^-1) = d(x,y) and d(x^-1,y) = d(x,y^-1) over X u {e}.
inline GrauCheck check_grau_conditions(const SymmetrizedAlphabet& a) {
  GrauCheck out;
  std::vector<std::size_t> base;  // X u {e}
  for (std::size_t g = 0; g < a.generators(); ++g) base.push_back(2 * g);
  base.push_back(a.identity());
  auto name = [&](std::size_t i) {
    if (i == a.identity()) return std::string("e");
    return "x" + std::to_string(i / 2) + (i % 2 ? "'" : "");
  };
  for (std::size_t x : base)
    for (std::size_t y : base) {
      const auto xi = a.inverse_index(x), yi = a.inverse_index(y);
      if (a.d(xi, yi) != a.d(x, y)) {
        out.ok = false;
        out.violation = "d(" + name(xi) + "," + name(yi) + ") != d(" + name(x) + "," + name(y) + ")";
        return out;
      }
      if (a.d(xi, y) != a.d(x, yi)) {
        out.ok = false;
        out.violation = "d(" + name(xi) + "," + name(y) + ") != d(" + name(x) + "," + name(yi) + ")";
        return out;
      }
    }
  out.strong_hypothesis = true;
  for (std::size_t g = 0; g < a.generators() && out.strong_hypothesis; ++g)
    for (std::size_t h = 0; h < a.generators(); ++h)
      if (a.d(2 * g + 1, 2 * h) != max(a.d(2 * g, a.identity()), a.d(2 * h, a.identity()))) {
        out.strong_hypothesis = false;
        break;
      }
  return out;
}

struct DeltaOptions {
  std::size_t cap = 6;
  /// generators added (with inverses) to the search alphabet beyond letters(w)
  std::vector<PointId> extra_generators;
};

/*
 * Norm N(w) = delta(w, e): the minimum over trivial words t of the padded
 * length of w (letters from letters(w), their inverses, e and any extra
 * generators) of max_i d(w_i, t_i). Odd-length words get one e inserted at
 * every possible position.
 */
inline Rational graev_delta_norm(const FreeWord& w, const SymmetrizedAlphabet& alphabet, const DeltaOptions& opt = {}) {
  detail::check_letters(w, alphabet.generators());
  if (w.length() > opt.cap)
    throw InputError("reduced length " + std::to_string(w.length()) + " exceeds cap " + std::to_string(opt.cap));
  if (w.is_identity()) return Rational(0);

  std::set<std::size_t> alpha{alphabet.identity()};
  for (const auto& l : w.letters()) {
    alpha.insert(SymmetrizedAlphabet::index(l));
    alpha.insert(SymmetrizedAlphabet::index(l.inverse()));
  }
  for (PointId z : opt.extra_generators) {
    if (z < 0 || static_cast<std::size_t>(z) >= alphabet.generators()) throw InputError("extra generator out of range");
    alpha.insert(2 * static_cast<std::size_t>(z));
    alpha.insert(2 * static_cast<std::size_t>(z) + 1);
  }
  const std::vector<std::size_t> letters(alpha.begin(), alpha.end());

  std::vector<std::vector<std::size_t>> paddings;
  std::vector<std::size_t> word;
  for (const auto& l : w.letters()) word.push_back(SymmetrizedAlphabet::index(l));
  if (word.size() % 2 == 0) {
    paddings.push_back(word);
  } else {
    for (std::size_t pos = 0; pos <= word.size(); ++pos) {
      auto p = word;
      p.insert(p.begin() + static_cast<std::ptrdiff_t>(pos), alphabet.identity());
      paddings.push_back(std::move(p));
    }
  }

  std::optional<Rational> best;
  std::vector<std::size_t> stack;  // reduced non-e letters of t so far
  const std::size_t e = alphabet.identity();
  for (const auto& padded : paddings) {
    const std::size_t len = padded.size();
    auto dfs = [&](auto&& self, std::size_t i, const Rational& cost) -> void {
      if (best && !(cost < *best)) return;
      if (stack.size() > len - i) return;
      if (i == len) {
        best = cost;
        return;
      }
      for (std::size_t t : letters) {
        const Rational c = max(cost, alphabet.d(padded[i], t));
        if (best && !(c < *best)) continue;
        if (t == e) {
          self(self, i + 1, c);
        } else if (!stack.empty() && stack.back() == alphabet.inverse_index(t)) {
          stack.pop_back();
          self(self, i + 1, c);
          stack.push_back(alphabet.inverse_index(t));
        } else {
          stack.push_back(t);
          self(self, i + 1, c);
          stack.pop_back();
        }
      }
    };
    dfs(dfs, 0, Rational(0));
  }
  return *best;
}

/// delta(u, v) = N(u^-1 v).
inline Rational graev_delta_bruteforce(const FreeWord& u, const FreeWord& v, const SymmetrizedAlphabet& alphabet,
                                       const DeltaOptions& opt = {}) {
  auto grau = check_grau_conditions(alphabet);
  if (!grau.ok) throw InputError("alphabet metric fails the symmetry conditions: " + grau.violation);
  return graev_delta_norm(u.inverse() * v, alphabet, opt);
}

struct AlphabetGap {
  PointId extra = -1;
  Rational restricted, extended;
};

/// Generators outside letters(w) whose addition to the search alphabet changes N(w).
inline std::vector<AlphabetGap> alphabet_extension_gaps(const FreeWord& w, const SymmetrizedAlphabet& alphabet,
                                                        std::size_t cap = 6) {
  std::vector<AlphabetGap> gaps;
  const Rational restricted = graev_delta_norm(w, alphabet, {cap, {}});
  for (std::size_t z = 0; z < alphabet.generators(); ++z) {
    bool used = std::any_of(w.letters().begin(), w.letters().end(), [&](const Letter& l) { return l.gen == static_cast<PointId>(z); });
    if (used) continue;
    const Rational ext = graev_delta_norm(w, alphabet, {cap, {static_cast<PointId>(z)}});
    if (ext != restricted) gaps.push_back({static_cast<PointId>(z), restricted, ext});
  }
  return gaps;
}

}  // namespace nafree
