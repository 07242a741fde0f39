#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nafree/finite_group.hpp"
#include "nafree/partition.hpp"
#include "nafree/rational.hpp"
#include "nafree/ultrametric.hpp"

namespace nafree {

/*
 * Element of the free Boolean group B(X): a finite subset of X with
 * symmetric difference as the group law. The empty set is the zero word.
 */
class BooleanWord {
public:
  BooleanWord() = default;

  /// Formal sum of the given points; repeated points cancel in pairs.
  static BooleanWord sum_of(std::vector<PointId> points) {
    std::sort(points.begin(), points.end());
    BooleanWord w;
    for (std::size_t i = 0; i < points.size();) {
      std::size_t j = i;
      while (j < points.size() && points[j] == points[i]) ++j;
      if ((j - i) % 2 == 1) w.points_.push_back(points[i]);
      i = j;
    }
    return w;
  }
  static BooleanWord of(std::initializer_list<PointId> pts) { return sum_of(std::vector<PointId>(pts)); }

  /// Word whose points are the set bits of `mask`.
  static BooleanWord from_mask(unsigned long long mask) {
    BooleanWord w;
    for (PointId p = 0; mask != 0; ++p, mask >>= 1)
      if (mask & 1ULL) w.points_.push_back(p);
    return w;
  }

  const std::vector<PointId>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool is_zero() const { return points_.empty(); }
  bool contains(PointId p) const { return std::binary_search(points_.begin(), points_.end(), p); }

  friend BooleanWord operator+(const BooleanWord& u, const BooleanWord& v) {
    BooleanWord w;
    std::set_symmetric_difference(u.points_.begin(), u.points_.end(), v.points_.begin(), v.points_.end(),
                                  std::back_inserter(w.points_));
    return w;
  }

  friend bool operator==(const BooleanWord&, const BooleanWord&) = default;
  friend auto operator<=>(const BooleanWord&, const BooleanWord&) = default;

private:
  std::vector<PointId> points_;
};

inline BooleanWord bool_add(const BooleanWord& u, const BooleanWord& v) { return u + v; }

/// All 2^n words over n points, in mask order.
inline std::vector<BooleanWord> all_boolean_words(std::size_t n) {
  std::vector<BooleanWord> out;
  for (unsigned long long m = 0; m < (1ULL << n); ++m) out.push_back(BooleanWord::from_mask(m));
  return out;
}

namespace detail {
inline void check_points(const BooleanWord& u, std::size_t ground) {
  for (PointId p : u.points())
    if (p < 0 || static_cast<std::size_t>(p) >= ground)
      throw InputError("word mentions point " + std::to_string(p) + " outside the ground set");
}
}  // namespace detail

/// u when |u| is even, u with the zero element adjoined when |u| is odd.
inline std::vector<PointId> support(const BooleanWord& u, const AugmentedSpace& space) {
  if (u.is_zero()) throw InputError("support of the zero word is undefined");
  detail::check_points(u, space.ground_size());
  std::vector<PointId> s = u.points();
  if (s.size() % 2 == 1) s.push_back(space.zero());
  return s;
}

/// A list of pairs over X plus the zero element; represents the sum of all entries.
struct Configuration {
  std::vector<std::pair<PointId, PointId>> pairs;

  bool is_normal() const {
    std::vector<PointId> all;
    for (auto [a, b] : pairs) {
      all.push_back(a);
      all.push_back(b);
    }
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) == all.end();
  }

  /// The Boolean word this configuration represents; the zero element drops out.
  BooleanWord word(const AugmentedSpace& space) const {
    std::vector<PointId> all;
    for (auto [a, b] : pairs) {
      if (a != space.zero()) all.push_back(a);
      if (b != space.zero()) all.push_back(b);
    }
    return BooleanWord::sum_of(std::move(all));
  }

  /// Pairs with the smaller id first, sorted.
  Configuration canonical() const {
    Configuration c = *this;
    for (auto& pr : c.pairs)
      if (pr.second < pr.first) std::swap(pr.first, pr.second);
    std::sort(c.pairs.begin(), c.pairs.end());
    return c;
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// d-length: the largest pair distance, 0 for the empty configuration.
inline Rational phi(const Configuration& config, const AugmentedSpace& space) {
  Rational best(0);
  for (auto [a, b] : config.pairs) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= space.size() || static_cast<std::size_t>(b) >= space.size())
      throw InputError("configuration mentions an unknown point");
    best = max(best, space.d(a, b));
  }
  return best;
}

/*
 * Applies the elementary moves until the configuration is normal:
 * trivial pairs (t,t) are deleted, and two pairs sharing an entry are merged
 * by the chain rule (a,t),(t,b) -> (a,b) after orienting them by inversion.
 * Each merge removes a pair, so this terminates; phi never increases.
 */
inline Configuration reduce_configuration(const Configuration& config) {
  auto pairs = config.pairs;
  for (;;) {
    std::erase_if(pairs, [](const auto& pr) { return pr.first == pr.second; });
    bool merged = false;
    for (std::size_t i = 0; i < pairs.size() && !merged; ++i)
      for (std::size_t k = 0; k < pairs.size() && !merged; ++k) {
        if (i == k) continue;
        auto a = pairs[i];
        auto b = pairs[k];
        // orient so that a.second == b.first
        if (a.second != b.first) {
          if (a.first == b.first) std::swap(a.first, a.second);
          else if (a.second == b.second) std::swap(b.first, b.second);
          else if (a.first == b.second) {
            std::swap(a.first, a.second);
            std::swap(b.first, b.second);
          } else {
            continue;
          }
        }
        const std::pair<PointId, PointId> joined{a.first, b.second};
        const auto hi = std::max(i, k), lo = std::min(i, k);
        pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(hi));
        pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(lo));
        pairs.push_back(joined);
        merged = true;
      }
    if (!merged) break;
  }
  return Configuration{pairs}.canonical();
}

inline constexpr std::size_t kDefaultEnumerationCap = 12;

/// Every perfect pairing of supp(u): (2k-1)!! configurations for |supp(u)| = 2k.
inline std::vector<Configuration> enumerate_normal_configurations(const BooleanWord& u, const AugmentedSpace& space,
                                                                  std::size_t cap = kDefaultEnumerationCap) {
  auto supp = support(u, space);
  if (supp.size() > cap)
    throw InputError("support size " + std::to_string(supp.size()) + " exceeds enumeration cap " + std::to_string(cap));
  std::vector<Configuration> out;
  Configuration current;
  std::vector<bool> used(supp.size(), false);
  auto rec = [&](auto&& self) -> void {
    std::size_t first = 0;
    while (first < supp.size() && used[first]) ++first;
    if (first == supp.size()) {
      out.push_back(current);
      return;
    }
    used[first] = true;
    for (std::size_t j = first + 1; j < supp.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      current.pairs.emplace_back(supp[first], supp[j]);
      self(self);
      current.pairs.pop_back();
      used[j] = false;
    }
    used[first] = false;
  };
  rec(rec);
  return out;
}

struct NormCertificate {
  Rational value;
  Configuration witness;
  PointId basepoint = 0;
};

/// Minimum of phi over all normal configurations of u. The zero word has norm 0.
inline NormCertificate graev_norm_bruteforce(const BooleanWord& u, const AugmentedSpace& space,
                                             std::size_t cap = kDefaultEnumerationCap) {
  NormCertificate cert;
  cert.basepoint = space.basepoint();
  if (u.is_zero()) return cert;
  bool first = true;
  for (auto& c : enumerate_normal_configurations(u, space, cap)) {
    auto v = phi(c, space);
    if (first || v < cert.value) {
      cert.value = v;
      cert.witness = c;
      first = false;
    }
  }
  cert.witness = cert.witness.canonical();
  return cert;
}

/*
 * Smallest distance r among support points such that every class of
 * d <= r holds an even number of support points. A pairing with every pair
 * inside a class then has phi <= r, and no pairing can do better because
 * some pair must cross between classes of any smaller radius.
 */
inline NormCertificate graev_norm_fast(const BooleanWord& u, const AugmentedSpace& space) {
  NormCertificate cert;
  cert.basepoint = space.basepoint();
  if (u.is_zero()) return cert;
  const auto supp = support(u, space);
  std::vector<Rational> radii;
  for (std::size_t i = 0; i < supp.size(); ++i)
    for (std::size_t j = i + 1; j < supp.size(); ++j) radii.push_back(space.d(supp[i], supp[j]));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  for (const auto& r : radii) {
    std::vector<std::vector<PointId>> classes;
    for (PointId p : supp) {
      auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& c) { return space.d(c.front(), p) <= r; });
      if (it == classes.end()) classes.push_back({p});
      else it->push_back(p);
    }
    if (std::all_of(classes.begin(), classes.end(), [](const auto& c) { return c.size() % 2 == 0; })) {
      for (const auto& c : classes)
        for (std::size_t i = 0; i < c.size(); i += 2) cert.witness.pairs.emplace_back(c[i], c[i + 1]);
      cert.witness = cert.witness.canonical();
      cert.value = phi(cert.witness, space);
      return cert;
    }
  }
  throw std::logic_error("no even threshold found; space is not an ultra-metric");
}

/// ||u + v||
inline Rational graev_metric(const BooleanWord& u, const BooleanWord& v, const AugmentedSpace& space) {
  return graev_norm_fast(u + v, space).value;
}

/// Parity rule: u lies in the subgroup generated by {x + y : x ~ y} iff every block meets u evenly.
inline bool eps_subgroup_membership(const BooleanWord& u, const Partition& eps) {
  detail::check_points(u, eps.ground_size());
  std::vector<int> count(eps.block_count(), 0);
  for (PointId p : u.points()) ++count[eps.block_of(p)];
  return std::all_of(count.begin(), count.end(), [](int c) { return c % 2 == 0; });
}

/// Per-block counts of u's points, the evidence behind the parity rule.
inline std::vector<int> parity_table(const BooleanWord& u, const Partition& eps) {
  detail::check_points(u, eps.ground_size());
  std::vector<int> count(eps.block_count(), 0);
  for (PointId p : u.points()) ++count[eps.block_of(p)];
  return count;
}

inline bool separates_pairwise(const std::vector<PointId>& pts, const Partition& eps) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (eps.related(pts[i], pts[j])) return false;
  return true;
}

/// Index of the coarsest level separating the points of u pairwise, if any.
inline std::optional<std::size_t> separating_entourage(const BooleanWord& u, const PartitionChain& base) {
  if (u.is_zero()) throw InputError("separating entourage needs a nonzero word");
  for (std::size_t i = 0; i < base.size(); ++i) {
    detail::check_points(u, base.level(i).partition.ground_size());
    if (separates_pairwise(u.points(), base.level(i).partition)) return i;
  }
  return std::nullopt;
}

struct ClosednessWitness {
  std::size_t level = 0;
  /// membership of u + {x} for each x; all false for a valid witness
  std::vector<bool> memberships;
};

/// Coarsest level eps with (u + <eps>) disjoint from the copy of X in B(X).
inline std::optional<ClosednessWitness> closedness_witness(const BooleanWord& u, const PartitionChain& base) {
  if (u.size() == 1) throw InputError("word of length 1 lies in the image of X");
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto& eps = base.level(i).partition;
    ClosednessWitness w{i, {}};
    bool ok = true;
    for (std::size_t x = 0; x < eps.ground_size(); ++x) {
      bool in = eps_subgroup_membership(u + BooleanWord::of({static_cast<PointId>(x)}), eps);
      w.memberships.push_back(in);
      ok = ok && !in;
    }
    if (ok) return w;
  }
  return std::nullopt;
}

struct BallSubgroupRow {
  BooleanWord word;
  Rational norm;
  bool in_ball = false;
  bool in_subgroup = false;
  bool agrees() const { return in_ball == in_subgroup; }
};

struct BallSubgroupReport {
  Rational eps;
  std::vector<BallSubgroupRow> rows;
  bool all_agree() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.agrees(); });
  }
};

/// Compares ||u|| < eps with membership in the subgroup generated by {x + y : d(x,y) < eps}.
inline BallSubgroupReport ball_equals_subgroup(const AugmentedSpace& space, const Rational& eps,
                                               const std::vector<BooleanWord>& pool) {
  if (!(Rational(0) < eps && eps < Rational(1))) throw InputError("eps must lie strictly between 0 and 1");
  const auto generators = open_ball_partition(space.base(), eps);
  BallSubgroupReport report{eps, {}};
  for (const auto& u : pool) {
    BallSubgroupRow row{u, graev_norm_fast(u, space).value};
    row.in_ball = row.norm < eps;
    row.in_subgroup = eps_subgroup_membership(u, generators);
    report.rows.push_back(std::move(row));
  }
  return report;
}

/*
 * A group action on X checked once to be isometric, lifted to B(X) by
 * g.u = {g x : x in u}.
 */
class LiftedAction {
public:
  LiftedAction(GroupAction action, const UltraMetricSpace& space) : action_(std::move(action)) {
    if (auto v = action_.isometry_violation(space)) throw InputError("action is not isometric: " + v->message);
  }

  const GroupAction& action() const { return action_; }

  BooleanWord apply(Element g, const BooleanWord& u) const {
    detail::check_points(u, action_.point_count());
    std::vector<PointId> img;
    for (PointId p : u.points()) img.push_back(action_.act(g, p));
    return BooleanWord::sum_of(std::move(img));
  }

private:
  GroupAction action_;
};

inline BooleanWord lift_action(const LiftedAction& action, const BooleanWord& u, Element g) { return action.apply(g, u); }

/*
 * True when g keeps every distance to the zero element, i.e. g is an
 * isometry of the augmented space. Exactly then ||g.u|| = ||u|| for odd
 * words too; even words never reach the zero element.
 */
inline bool fixes_zero_distances(const LiftedAction& action, const AugmentedSpace& space, Element g) {
  for (std::size_t x = 0; x < space.ground_size(); ++x)
    if (space.d(action.action().act(g, static_cast<PointId>(x)), space.zero()) != space.d(x, space.zero())) return false;
  return true;
}

}  // namespace nafree
