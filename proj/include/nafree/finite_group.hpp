#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nafree/rational.hpp"
#include "nafree/ultrametric.hpp"

namespace nafree {

using Element = int;

/// Explicit finite group given by its Cayley table. Axioms are checked on construction.
class FiniteGroupTable {
public:
  FiniteGroupTable() : FiniteGroupTable(std::vector<std::vector<Element>>{{0}}) {}

  explicit FiniteGroupTable(std::vector<std::vector<Element>> mul, std::vector<std::string> names = {})
      : mul_(std::move(mul)), names_(std::move(names)) {
    const std::size_t n = mul_.size();
    if (n == 0) throw InputError("group must be nonempty");
    for (const auto& row : mul_) {
      if (row.size() != n) throw InputError("group table is not square");
      for (Element x : row)
        if (x < 0 || static_cast<std::size_t>(x) >= n) throw InputError("group table entry out of range");
    }
    if (names_.empty())
      for (std::size_t i = 0; i < n; ++i) names_.push_back(std::to_string(i));
    if (names_.size() != n) throw InputError("group element names do not match order");

    std::optional<Element> id;
    for (std::size_t e = 0; e < n && !id; ++e) {
      bool ok = true;
      for (std::size_t g = 0; g < n && ok; ++g) ok = mul_[e][g] == static_cast<Element>(g) && mul_[g][e] == static_cast<Element>(g);
      if (ok) id = static_cast<Element>(e);
    }
    if (!id) throw InputError("group table has no identity");
    identity_ = *id;

    inv_.assign(n, -1);
    for (std::size_t g = 0; g < n; ++g) {
      for (std::size_t h = 0; h < n; ++h)
        if (mul_[g][h] == identity_ && mul_[h][g] == identity_) inv_[g] = static_cast<Element>(h);
      if (inv_[g] < 0) throw InputError("element " + names_[g] + " has no inverse");
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]])
            throw InputError("group table is not associative at (" + names_[a] + "," + names_[b] + "," + names_[c] + ")");
  }

  static FiniteGroupTable cyclic(std::size_t n) {
    std::vector<std::vector<Element>> mul(n, std::vector<Element>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) mul[a][b] = static_cast<Element>((a + b) % n);
    return FiniteGroupTable(std::move(mul));
  }

  /// (Z/2)^k with elements encoded as bitmasks.
  static FiniteGroupTable elementary_abelian_2(std::size_t k) {
    const std::size_t n = std::size_t{1} << k;
    std::vector<std::vector<Element>> mul(n, std::vector<Element>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) mul[a][b] = static_cast<Element>(a ^ b);
    return FiniteGroupTable(std::move(mul));
  }

  /// Symmetric group on `k` letters; element i is the i-th permutation in lexicographic order.
  static FiniteGroupTable symmetric(std::size_t k) {
    auto perms = permutations(k);
    return from_permutations(perms);
  }

  /// Group of the given permutations, which must be closed under composition.
  /// Multiplication is composition: (g*h)(x) = g(h(x)).
  static FiniteGroupTable from_permutations(const std::vector<std::vector<int>>& perms) {
    const std::size_t n = perms.size();
    std::vector<std::vector<Element>> mul(n, std::vector<Element>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::vector<int> c(perms[b].size());
        for (std::size_t x = 0; x < c.size(); ++x) c[x] = perms[a][perms[b][x]];
        auto it = std::find(perms.begin(), perms.end(), c);
        if (it == perms.end()) throw InputError("permutation set is not closed under composition");
        mul[a][b] = static_cast<Element>(it - perms.begin());
      }
    return FiniteGroupTable(std::move(mul));
  }

  static std::vector<std::vector<int>> permutations(std::size_t k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
  }

  std::size_t order() const { return mul_.size(); }
  Element identity() const { return identity_; }
  Element mul(Element a, Element b) const { return mul_[a][b]; }
  Element inv(Element a) const { return inv_[a]; }
  const std::vector<std::vector<Element>>& table() const { return mul_; }
  const std::string& name(Element g) const { return names_.at(g); }

  bool is_abelian() const {
    for (std::size_t a = 0; a < order(); ++a)
      for (std::size_t b = 0; b < order(); ++b)
        if (mul_[a][b] != mul_[b][a]) return false;
    return true;
  }

  /// Every element has order at most 2.
  bool is_boolean() const {
    for (std::size_t a = 0; a < order(); ++a)
      if (mul_[a][a] != identity_) return false;
    return true;
  }

  bool is_subgroup(const std::vector<bool>& member) const {
    if (member.size() != order() || !member[identity_]) return false;
    for (std::size_t a = 0; a < order(); ++a) {
      if (!member[a]) continue;
      if (!member[inv_[a]]) return false;
      for (std::size_t b = 0; b < order(); ++b)
        if (member[b] && !member[mul_[a][b]]) return false;
    }
    return true;
  }

  bool is_normal_subgroup(const std::vector<bool>& member) const {
    if (!is_subgroup(member)) return false;
    for (std::size_t a = 0; a < order(); ++a)
      for (std::size_t h = 0; h < order(); ++h)
        if (member[h] && !member[mul_[mul_[a][h]][inv_[a]]]) return false;
    return true;
  }

  /// Subgroup generated by `gens`, as a membership mask.
  std::vector<bool> generated_subgroup(const std::vector<Element>& gens) const {
    std::vector<bool> in(order(), false);
    std::vector<Element> todo{identity_};
    in[identity_] = true;
    while (!todo.empty()) {
      Element x = todo.back();
      todo.pop_back();
      for (Element g : gens) {
        Element y = mul_[x][g];
        if (!in[y]) {
          in[y] = true;
          todo.push_back(y);
        }
      }
    }
    return in;
  }

private:
  std::vector<std::vector<Element>> mul_;
  std::vector<std::string> names_;
  std::vector<Element> inv_;
  Element identity_ = 0;
};

inline std::vector<bool> subset_mask(const FiniteGroupTable& g, const std::vector<Element>& elems) {
  std::vector<bool> mask(g.order(), false);
  for (Element e : elems) {
    if (e < 0 || static_cast<std::size_t>(e) >= g.order()) throw InputError("element out of range");
    mask[e] = true;
  }
  return mask;
}

/// Ultra-seminorm on a finite group: p(e) = 0, p(g^-1) = p(g), p(gh) <= max(p(g), p(h)).
class SeminormTable {
public:
  SeminormTable(FiniteGroupTable group, std::vector<Rational> value) : group_(std::move(group)), value_(std::move(value)) {
    if (value_.size() != group_.order()) throw InputError("seminorm table size differs from group order");
    if (!value_[group_.identity()].is_zero()) throw InputError("seminorm is nonzero at the identity");
    for (std::size_t g = 0; g < value_.size(); ++g) {
      if (value_[g].is_negative()) throw InputError("negative seminorm value");
      if (value_[g] != value_[group_.inv(g)]) throw InputError("seminorm not symmetric at " + group_.name(g));
      for (std::size_t h = 0; h < value_.size(); ++h)
        if (max(value_[g], value_[h]) < value_[group_.mul(g, h)])
          throw InputError("seminorm violates p(gh) <= max(p(g), p(h)) at (" + group_.name(g) + "," + group_.name(h) + ")");
    }
  }

  const FiniteGroupTable& group() const { return group_; }
  const Rational& operator()(Element g) const { return value_.at(g); }
  const std::vector<Rational>& values() const { return value_; }

  /// p(g) = 0 only at the identity.
  bool is_norm() const {
    for (std::size_t g = 0; g < value_.size(); ++g)
      if (static_cast<Element>(g) != group_.identity() && value_[g].is_zero()) return false;
    return true;
  }

  /// p(a g a^-1) = p(g) for all a, g.
  bool is_invariant() const {
    for (std::size_t a = 0; a < value_.size(); ++a)
      for (std::size_t g = 0; g < value_.size(); ++g)
        if (value_[group_.mul(group_.mul(a, g), group_.inv(a))] != value_[g]) return false;
    return true;
  }

private:
  FiniteGroupTable group_;
  std::vector<Rational> value_;
};

/// p = 0 on H and 1 off H.
inline SeminormTable seminorm_from_subgroup(const FiniteGroupTable& g, const std::vector<bool>& h) {
  if (!g.is_subgroup(h)) throw InputError("subset is not a subgroup");
  std::vector<Rational> v(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) v[i] = h[i] ? Rational(0) : Rational(1);
  return SeminormTable(g, std::move(v));
}

struct SubgroupFromSeminorm {
  std::vector<bool> members;
  bool seminorm_invariant = false;
  bool normal = false;
};

/// {g : p(g) < eps}; normality is checked whenever p is invariant.
inline SubgroupFromSeminorm subgroup_from_seminorm(const SeminormTable& p, const Rational& eps) {
  if (!(Rational(0) < eps)) throw InputError("eps must be positive");
  const auto& g = p.group();
  SubgroupFromSeminorm out;
  out.members.assign(g.order(), false);
  for (std::size_t i = 0; i < g.order(); ++i) out.members[i] = p(i) < eps;
  if (!g.is_subgroup(out.members)) throw std::logic_error("open ball of an ultra-seminorm is not a subgroup");
  out.seminorm_invariant = p.is_invariant();
  out.normal = g.is_normal_subgroup(out.members);
  if (out.seminorm_invariant && !out.normal) throw std::logic_error("ball of an invariant seminorm is not normal");
  return out;
}

struct ActionViolation {
  PointId p = -1, q = -1;
  Element g = -1;
  std::string message;
};

/*
 * Left action G x X -> X given as a table act[g][x]. Construction checks
 * that each row is a permutation, the identity acts trivially and
 * act(gh, x) = act(g, act(h, x)).
 */
class GroupAction {
public:
  GroupAction(FiniteGroupTable group, std::vector<std::vector<PointId>> table)
      : group_(std::move(group)), table_(std::move(table)) {
    if (table_.size() != group_.order()) throw InputError("action table rows differ from group order");
    const std::size_t n = table_.empty() ? 0 : table_.front().size();
    for (const auto& row : table_) {
      if (row.size() != n) throw InputError("action table rows have different lengths");
      std::vector<bool> hit(n, false);
      for (PointId x : row) {
        if (x < 0 || static_cast<std::size_t>(x) >= n) throw InputError("action maps outside the space");
        if (hit[x]) throw InputError("action row is not a permutation");
        hit[x] = true;
      }
    }
    for (std::size_t x = 0; x < n; ++x)
      if (table_[group_.identity()][x] != static_cast<PointId>(x)) throw InputError("identity does not act trivially");
    for (std::size_t g = 0; g < group_.order(); ++g)
      for (std::size_t h = 0; h < group_.order(); ++h)
        for (std::size_t x = 0; x < n; ++x)
          if (table_[group_.mul(g, h)][x] != table_[g][table_[h][x]])
            throw InputError("action table inconsistent with group table at (" + group_.name(g) + "," + group_.name(h) + ")");
  }

  const FiniteGroupTable& group() const { return group_; }
  std::size_t point_count() const { return table_.empty() ? 0 : table_.front().size(); }
  PointId act(Element g, PointId x) const { return table_.at(g).at(x); }
  const std::vector<std::vector<PointId>>& table() const { return table_; }

  /// First (g, p, q) with d(gp, gq) != d(p, q), if any.
  template <MetricSpaceLike S>
  std::optional<ActionViolation> isometry_violation(const S& space) const {
    if (space.size() != point_count()) throw InputError("action and space have different point counts");
    for (std::size_t g = 0; g < group_.order(); ++g)
      for (std::size_t p = 0; p < point_count(); ++p)
        for (std::size_t q = p + 1; q < point_count(); ++q)
          if (space.d(table_[g][p], table_[g][q]) != space.d(p, q))
            return ActionViolation{static_cast<PointId>(p), static_cast<PointId>(q), static_cast<Element>(g),
                                   "element " + group_.name(g) + " does not preserve d(" + std::to_string(p) + "," +
                                       std::to_string(q) + ")"};
    return std::nullopt;
  }

private:
  FiniteGroupTable group_;
  std::vector<std::vector<PointId>> table_;
};

/// p(g) = d(x0, g x0) for an isometric action.
inline SeminormTable seminorm_from_action(const GroupAction& action, const UltraMetricSpace& space, PointId x0) {
  if (x0 < 0 || static_cast<std::size_t>(x0) >= space.size()) throw InputError("x0 not in space");
  if (auto v = action.isometry_violation(space)) throw InputError("action is not isometric: " + v->message);
  const auto& g = action.group();
  std::vector<Rational> val(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) val[i] = space.d(x0, action.act(i, x0));
  return SeminormTable(g, std::move(val));
}

struct InvariantMetric {
  DistanceMatrix dist;
  /// False when p vanishes off the identity, so dist is only a pseudometric.
  bool is_metric = true;
};

/// d(x, y) = p(x^-1 y); left invariance is checked on the whole table.
inline InvariantMetric metric_from_seminorm(const SeminormTable& p) {
  const auto& g = p.group();
  InvariantMetric out;
  out.dist.assign(g.order(), std::vector<Rational>(g.order()));
  for (std::size_t x = 0; x < g.order(); ++x)
    for (std::size_t y = 0; y < g.order(); ++y) out.dist[x][y] = p(g.mul(g.inv(x), y));
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t x = 0; x < g.order(); ++x)
      for (std::size_t y = 0; y < g.order(); ++y)
        if (out.dist[g.mul(a, x)][g.mul(a, y)] != out.dist[x][y])
          throw std::logic_error("metric from seminorm is not left invariant");
  out.is_metric = p.is_norm();
  return out;
}

/// The full isometry group of a finite space acting on its points.
template <MetricSpaceLike S>
GroupAction isometry_group(const S& space) {
  std::vector<std::vector<int>> isos;
  for (auto& perm : FiniteGroupTable::permutations(space.size())) {
    bool ok = true;
    for (std::size_t p = 0; p < space.size() && ok; ++p)
      for (std::size_t q = p + 1; q < space.size() && ok; ++q) ok = space.d(perm[p], perm[q]) == space.d(p, q);
    if (ok) isos.push_back(perm);
  }
  auto group = FiniteGroupTable::from_permutations(isos);
  return GroupAction(std::move(group), isos);
}

}  // namespace nafree
