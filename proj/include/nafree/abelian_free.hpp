#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nafree/boolean_free.hpp"
#include "nafree/partition.hpp"

namespace nafree {

/// Element of the free abelian group A(X): point -> nonzero integer coefficient.
class AbelianWord {
public:
  AbelianWord() = default;
  AbelianWord(std::initializer_list<std::pair<const PointId, std::int64_t>> terms) {
    for (auto [p, k] : terms) add_term(p, k);
  }

  void add_term(PointId p, std::int64_t k) {
    if (p < 0) throw InputError("negative point id");
    auto& c = coeffs_[p];
    c += k;
    if (c == 0) coeffs_.erase(p);
  }

  const std::map<PointId, std::int64_t>& coeffs() const { return coeffs_; }
  std::int64_t coeff(PointId p) const {
    auto it = coeffs_.find(p);
    return it == coeffs_.end() ? 0 : it->second;
  }
  bool is_zero() const { return coeffs_.empty(); }

  std::vector<PointId> support() const {
    std::vector<PointId> s;
    for (auto& [p, k] : coeffs_) s.push_back(p);
    return s;
  }

  friend AbelianWord operator+(AbelianWord u, const AbelianWord& v) {
    for (auto& [p, k] : v.coeffs_) u.add_term(p, k);
    return u;
  }
  AbelianWord operator-() const {
    AbelianWord r;
    for (auto& [p, k] : coeffs_) r.coeffs_[p] = -k;
    return r;
  }
  friend AbelianWord operator-(const AbelianWord& u, const AbelianWord& v) { return u + (-v); }

  friend bool operator==(const AbelianWord&, const AbelianWord&) = default;
  friend auto operator<=>(const AbelianWord&, const AbelianWord&) = default;

private:
  std::map<PointId, std::int64_t> coeffs_;
};

inline AbelianWord ab_add(const AbelianWord& u, const AbelianWord& v) { return u + v; }
inline AbelianWord ab_negate(const AbelianWord& u) { return -u; }

/// Word length: sum of |coefficients|.
inline std::int64_t lh(const AbelianWord& w) {
  std::int64_t s = 0;
  for (auto& [p, k] : w.coeffs()) s += std::llabs(k);
  return s;
}

/// Image of w in the free abelian group over the blocks of eps.
inline std::vector<std::int64_t> class_sums(const AbelianWord& w, const Partition& eps) {
  std::vector<std::int64_t> sums(eps.block_count(), 0);
  for (auto& [p, k] : w.coeffs()) {
    if (static_cast<std::size_t>(p) >= eps.ground_size())
      throw InputError("word mentions point " + std::to_string(p) + " outside the ground set");
    sums[eps.block_of(p)] += k;
  }
  return sums;
}

/// w lies in the subgroup generated by {x - y : x ~ y} iff every class sum vanishes.
inline bool ab_eps_membership(const AbelianWord& w, const Partition& eps) {
  for (auto s : class_sums(w, eps))
    if (s != 0) return false;
  return true;
}

/// Number of integer vectors in Z^dim with l1 norm <= n.
inline std::uint64_t bn_size(std::size_t dim, std::size_t n) {
  auto binom = [](std::uint64_t a, std::uint64_t b) {
    if (b > a) return std::uint64_t{0};
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  std::uint64_t total = 0;
  for (std::size_t k = 0; k <= std::min(dim, n); ++k) total += (std::uint64_t{1} << k) * binom(dim, k) * binom(n, k);
  return total;
}

struct BnLimits {
  std::size_t max_length = 6;
  std::size_t max_points = 5;
};

/// All words of length <= n over points 0..ground-1, ordered by coefficient vector.
inline std::vector<AbelianWord> enumerate_Bn(std::size_t n, std::size_t ground, BnLimits limits = {}) {
  if (n > limits.max_length || ground > limits.max_points)
    throw InputError("B_n enumeration cap exceeded (n <= " + std::to_string(limits.max_length) +
                     ", |X| <= " + std::to_string(limits.max_points) + ")");
  std::vector<AbelianWord> out;
  std::vector<std::int64_t> coeff(ground, 0);
  auto rec = [&](auto&& self, std::size_t i, std::int64_t budget) -> void {
    if (i == ground) {
      AbelianWord w;
      for (std::size_t p = 0; p < ground; ++p)
        if (coeff[p] != 0) w.add_term(static_cast<PointId>(p), coeff[p]);
      out.push_back(std::move(w));
      return;
    }
    for (std::int64_t k = -budget; k <= budget; ++k) {
      coeff[i] = k;
      self(self, i + 1, budget - std::llabs(k));
    }
    coeff[i] = 0;
  };
  rec(rec, 0, static_cast<std::int64_t>(n));
  return out;
}

struct BnAvoidanceReport {
  std::size_t level = 0;
  std::size_t checked = 0;
  /// every v in B_n with w - v in <eps>; empty when the coset avoids B_n
  std::vector<AbelianWord> hits;
  bool verified() const { return hits.empty(); }
};

/*
 * Picks the coarsest chain level separating supp(w) pairwise and then checks
 * every v in B_n for w - v in <eps>.
 */
inline BnAvoidanceReport bn_avoidance_check(const AbelianWord& w, std::size_t n, const PartitionChain& base,
                                            BnLimits limits = {}) {
  if (lh(w) <= static_cast<std::int64_t>(n)) throw InputError("lh(w) must exceed n");
  if (base.empty()) throw InputError("empty chain");
  std::optional<std::size_t> level;
  for (std::size_t i = 0; i < base.size() && !level; ++i)
    if (separates_pairwise(w.support(), base.level(i).partition)) level = i;
  if (!level) throw InputError("no separating level in the chain");
  const auto& eps = base.level(*level).partition;
  BnAvoidanceReport report{*level, 0, {}};
  for (const auto& v : enumerate_Bn(n, eps.ground_size(), limits)) {
    ++report.checked;
    if (ab_eps_membership(w - v, eps)) report.hits.push_back(v);
  }
  return report;
}

/*
 * Returns a generator v = x - y with x ~ y under eps and lh(w + v) = lh(w) + 2,
 * which needs coeff(x) >= 0 and coeff(y) <= 0. Throws when eps offers none.
 */
inline AbelianWord bn_interior_witness(const AbelianWord& w, std::size_t n, const Partition& eps) {
  if (lh(w) > static_cast<std::int64_t>(n)) throw InputError("witness needs lh(w) <= n");
  for (const auto& block : eps.blocks())
    for (PointId x : block)
      for (PointId y : block) {
        if (x == y || w.coeff(x) < 0 || w.coeff(y) > 0) continue;
        AbelianWord v{{x, 1}, {y, -1}};
        return v;
      }
  throw InputError("partition has no length-raising generator for this word");
}

}  // namespace nafree
