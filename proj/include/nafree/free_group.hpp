#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nafree/abelian_free.hpp"
#include "nafree/boolean_free.hpp"
#include "nafree/partition.hpp"

namespace nafree {

struct Letter {
  PointId gen = 0;
  int exp = 1;  // +1 or -1

  Letter inverse() const { return {gen, -exp}; }
  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// Freely reduced word in F(X); the empty word is the identity.
class FreeWord {
public:
  FreeWord() = default;
  FreeWord(std::initializer_list<Letter> letters) : FreeWord(std::vector<Letter>(letters)) {}

  /// Reduces the given letter sequence.
  explicit FreeWord(const std::vector<Letter>& letters) {
    for (const auto& l : letters) push(l);
  }

  static FreeWord gen(PointId x, int exp = 1) { return FreeWord{Letter{x, exp}}; }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  FreeWord inverse() const {
    FreeWord r;
    r.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) r.letters_.push_back(it->inverse());
    return r;
  }

  friend FreeWord operator*(const FreeWord& u, const FreeWord& v) {
    std::size_t cancel = 0;
    const std::size_t lim = std::min(u.length(), v.length());
    while (cancel < lim && u.letters_[u.length() - 1 - cancel] == v.letters_[cancel].inverse()) ++cancel;
    FreeWord r;
    r.letters_.reserve(u.length() + v.length() - 2 * cancel);
    r.letters_.insert(r.letters_.end(), u.letters_.begin(), u.letters_.end() - static_cast<std::ptrdiff_t>(cancel));
    r.letters_.insert(r.letters_.end(), v.letters_.begin() + static_cast<std::ptrdiff_t>(cancel), v.letters_.end());
    return r;
  }

  friend bool operator==(const FreeWord&, const FreeWord&) = default;
  friend auto operator<=>(const FreeWord&, const FreeWord&) = default;

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (const auto& l : letters_) {
      h ^= static_cast<std::size_t>(l.gen * 2 + (l.exp < 0 ? 1 : 0));
      h *= 1099511628211ULL;
    }
    return h;
  }

private:
  void push(const Letter& l) {
    if (l.exp != 1 && l.exp != -1) throw InputError("letter exponent must be +1 or -1");
    if (!letters_.empty() && letters_.back() == l.inverse()) letters_.pop_back();
    else letters_.push_back(l);
  }

  std::vector<Letter> letters_;
};

struct FreeWordHash {
  std::size_t operator()(const FreeWord& w) const { return w.hash(); }
};

inline FreeWord fg_multiply(const FreeWord& u, const FreeWord& v) { return u * v; }
inline FreeWord fg_invert(const FreeWord& u) { return u.inverse(); }

/// All reduced words over `gens` generators of length <= max_len, shortlex order.
inline std::vector<FreeWord> all_reduced_words(std::size_t gens, std::size_t max_len) {
  std::vector<FreeWord> out{FreeWord{}};
  std::size_t start = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = start; i < end; ++i)
      for (std::size_t g = 0; g < gens; ++g)
        for (int e : {1, -1}) {
          const Letter l{static_cast<PointId>(g), e};
          const auto& base = out[i].letters();
          if (!base.empty() && base.back() == l.inverse()) continue;
          auto letters = base;
          letters.push_back(l);
          out.emplace_back(letters);
        }
    start = end;
  }
  return out;
}

namespace detail {
inline void check_letters(const FreeWord& w, std::size_t ground) {
  for (const auto& l : w.letters())
    if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= ground)
      throw InputError("word mentions letter " + std::to_string(l.gen) + " outside the alphabet");
}
}  // namespace detail

/// Replaces each letter by its block and reduces: the induced map F(X) -> F(X/eps).
inline FreeWord quotient_hom(const FreeWord& w, const Partition& eps) {
  detail::check_letters(w, eps.ground_size());
  std::vector<Letter> img;
  img.reserve(w.length());
  for (const auto& l : w.letters()) img.push_back({eps.block_of(l.gen), l.exp});
  return FreeWord(img);
}

/// Membership in the normal subgroup generated by conjugates of x^-1 y, x ~ y: the kernel of quotient_hom.
inline bool eps_tilde_membership(const FreeWord& w, const Partition& eps) { return quotient_hom(w, eps).is_identity(); }

/*
 * Finitely supported assignment F(X) -> partitions: a default partition
 * plus overrides at finitely many words. When a chain is supplied every
 * assigned partition must be one of its levels.
 */
class PsiAssignment {
public:
  explicit PsiAssignment(Partition fallback, std::map<FreeWord, Partition> overrides = {},
                         const PartitionChain* chain = nullptr)
      : default_(std::move(fallback)), overrides_(std::move(overrides)) {
    for (const auto& [w, p] : overrides_) {
      if (p.ground_size() != default_.ground_size()) throw InputError("psi override over a different ground set");
      detail::check_letters(w, default_.ground_size());
    }
    if (chain) {
      auto in_chain = [&](const Partition& p) {
        return std::any_of(chain->levels().begin(), chain->levels().end(),
                           [&](const ChainLevel& l) { return l.partition == p; });
      };
      if (!in_chain(default_)) throw InputError("psi default partition is not a chain level");
      for (const auto& [w, p] : overrides_)
        if (!in_chain(p)) throw InputError("psi override partition is not a chain level");
    }
  }

  std::size_t ground_size() const { return default_.ground_size(); }
  const Partition& operator()(const FreeWord& w) const {
    auto it = overrides_.find(w);
    return it == overrides_.end() ? default_ : it->second;
  }

private:
  Partition default_;
  std::map<FreeWord, Partition> overrides_;
};

inline constexpr std::size_t kMaxClosureCap = 8;

/// The set of j2 / j2* generators x^-1 y and x y^-1 for x ~ y, x != y.
inline std::vector<FreeWord> pair_generators(const Partition& eps) {
  std::vector<FreeWord> out;
  for (const auto& block : eps.blocks())
    for (PointId x : block)
      for (PointId y : block) {
        if (x == y) continue;
        out.push_back(FreeWord{Letter{x, -1}, Letter{y, 1}});
        out.push_back(FreeWord{Letter{x, 1}, Letter{y, -1}});
      }
  return out;
}

/*
 * Elements of [V_psi] of reduced length <= cap reachable by right
 * multiplication with generators w g w^-1 (|w| <= cap, g from psi(w)),
 * never leaving the cap. Presence proves membership; absence proves nothing
 * for non-constant psi.
 */
inline std::vector<FreeWord> v_psi_ball(const PsiAssignment& psi, std::size_t cap, std::size_t max_cap = kMaxClosureCap) {
  if (cap > max_cap) throw InputError("closure length cap " + std::to_string(cap) + " exceeds " + std::to_string(max_cap));
  std::unordered_set<FreeWord, FreeWordHash> gen_set;
  for (const auto& w : all_reduced_words(psi.ground_size(), cap)) {
    const auto winv = w.inverse();
    for (const auto& g : pair_generators(psi(w))) {
      auto c = w * g * winv;
      if (c.length() <= cap) gen_set.insert(std::move(c));
    }
  }
  std::vector<FreeWord> gens(gen_set.begin(), gen_set.end());
  std::sort(gens.begin(), gens.end());

  std::unordered_set<FreeWord, FreeWordHash> seen{FreeWord{}};
  std::vector<FreeWord> frontier{FreeWord{}};
  while (!frontier.empty()) {
    std::vector<FreeWord> next;
    for (const auto& s : frontier)
      for (const auto& g : gens) {
        auto p = s * g;
        if (p.length() <= cap && seen.insert(p).second) next.push_back(std::move(p));
      }
    frontier = std::move(next);
  }
  std::vector<FreeWord> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](const FreeWord& a, const FreeWord& b) {
    return a.length() != b.length() ? a.length() < b.length() : a < b;
  });
  return out;
}

inline AbelianWord project_to_abelian(const FreeWord& w) {
  AbelianWord a;
  for (const auto& l : w.letters()) a.add_term(l.gen, l.exp);
  return a;
}

inline BooleanWord project_to_boolean(const FreeWord& w) {
  std::vector<PointId> pts;
  for (const auto& l : w.letters()) pts.push_back(l.gen);
  return BooleanWord::sum_of(std::move(pts));
}

}  // namespace nafree
