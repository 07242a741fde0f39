#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nafree/partition.hpp"
#include "nafree/rational.hpp"

namespace nafree {

using DistanceMatrix = std::vector<std::vector<Rational>>;

/// Name reserved for the adjoined zero element of an augmented space.
inline constexpr const char* kZeroName = "0";

struct MetricViolation {
  enum class Kind { none, nonzero_diagonal, zero_distance, asymmetric, strong_triangle };

  Kind kind = Kind::none;
  PointId p = -1, q = -1, r = -1;
  std::string message;

  bool ok() const { return kind == Kind::none; }
  explicit operator bool() const { return ok(); }
};

enum class MetricMode { metric, pseudometric };

/*
 * Checks the (pseudo)ultra-metric axioms on a square matrix and reports the
 * first violation in row-major triple order. Shape errors and negative
 * entries are input errors and throw.
 */
inline MetricViolation validate_ultrametric(const DistanceMatrix& m, MetricMode mode = MetricMode::metric) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw InputError("distance matrix is not square (row " + std::to_string(i) + ")");
    for (std::size_t j = 0; j < n; ++j)
      if (m[i][j].is_negative())
        throw InputError("negative distance at (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  MetricViolation v;
  auto fail = [&](MetricViolation::Kind k, std::size_t p, std::size_t q, std::size_t r, std::string msg) {
    v.kind = k;
    v.p = static_cast<PointId>(p);
    v.q = static_cast<PointId>(q);
    v.r = static_cast<PointId>(r);
    v.message = std::move(msg);
    return v;
  };
  for (std::size_t i = 0; i < n; ++i)
    if (!m[i][i].is_zero()) return fail(MetricViolation::Kind::nonzero_diagonal, i, i, i, "d(p,p) = " + m[i][i].str() + " != 0");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m[i][j] != m[j][i])
        return fail(MetricViolation::Kind::asymmetric, i, j, j, "d(p,q) = " + m[i][j].str() + " but d(q,p) = " + m[j][i].str());
      if (mode == MetricMode::metric && m[i][j].is_zero())
        return fail(MetricViolation::Kind::zero_distance, i, j, j, "d(p,q) = 0 for distinct points");
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (max(m[i][j], m[j][k]) < m[i][k])
          return fail(MetricViolation::Kind::strong_triangle, i, j, k,
                      "d(p,r) = " + m[i][k].str() + " > max(d(p,q), d(q,r)) = max(" + m[i][j].str() + ", " +
                          m[j][k].str() + ")");
  return v;
}

/// Finite ultra-metric space over dense point ids 0..n-1 with a name side table.
class UltraMetricSpace {
public:
  UltraMetricSpace() = default;

  UltraMetricSpace(std::vector<std::string> names, DistanceMatrix dist, std::optional<PointId> basepoint = {})
      : names_(std::move(names)), dist_(std::move(dist)), basepoint_(basepoint) {
    if (names_.size() != dist_.size()) throw InputError("point names and matrix size differ");
    if (names_.empty()) throw InputError("space must have at least one point");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == kZeroName) throw InputError("point name \"0\" is reserved for the zero element");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j]) throw InputError("duplicate point name '" + names_[i] + "'");
    }
    auto report = validate_ultrametric(dist_);
    if (!report) throw InputError("not an ultra-metric: " + report.message);
    if (basepoint_ && (*basepoint_ < 0 || static_cast<std::size_t>(*basepoint_) >= size()))
      throw InputError("basepoint outside the space");
  }

  /// Unnamed space; points are called p0, p1, ...
  explicit UltraMetricSpace(const DistanceMatrix& dist) : UltraMetricSpace(default_names(dist.size()), dist) {}

  std::size_t size() const { return dist_.size(); }
  const Rational& d(PointId p, PointId q) const { return dist_[p][q]; }
  const DistanceMatrix& matrix() const { return dist_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(PointId p) const { return names_.at(p); }
  std::optional<PointId> basepoint() const { return basepoint_; }

  PointId index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<PointId>(i);
    throw InputError("unknown point '" + name + "'");
  }

  static std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
    return out;
  }

private:
  std::vector<std::string> names_;
  DistanceMatrix dist_;
  std::optional<PointId> basepoint_;
};

/*
 * X together with an adjoined zero element, placed at id n = |X|, with
 * d(x, 0) = max(d(x, x0), 1).
 */
class AugmentedSpace {
public:
  AugmentedSpace() = default;

  AugmentedSpace(UltraMetricSpace base, PointId x0) : base_(std::move(base)), x0_(x0) {
    const std::size_t n = base_.size();
    if (x0 < 0 || static_cast<std::size_t>(x0) >= n) throw InputError("basepoint not in space");
    dist_.assign(n + 1, std::vector<Rational>(n + 1));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dist_[i][j] = base_.d(i, j);
    for (std::size_t i = 0; i < n; ++i) {
      dist_[i][n] = max(base_.d(i, x0), Rational(1));
      dist_[n][i] = dist_[i][n];
    }
  }

  const UltraMetricSpace& base() const { return base_; }
  PointId basepoint() const { return x0_; }
  PointId zero() const { return static_cast<PointId>(base_.size()); }
  std::size_t ground_size() const { return base_.size(); }
  /// |X| + 1
  std::size_t size() const { return dist_.size(); }
  const Rational& d(PointId p, PointId q) const { return dist_[p][q]; }
  const DistanceMatrix& matrix() const { return dist_; }

  std::string name(PointId p) const { return p == zero() ? std::string(kZeroName) : base_.name(p); }

private:
  UltraMetricSpace base_;
  PointId x0_ = 0;
  DistanceMatrix dist_;
};

/// Adjoins the zero element. Defaults to the recorded basepoint, else the lowest id.
inline AugmentedSpace extend_with_zero(const UltraMetricSpace& space, std::optional<PointId> x0 = {}) {
  PointId base = x0 ? *x0 : space.basepoint().value_or(0);
  if (base < 0 || static_cast<std::size_t>(base) >= space.size())
    throw InputError("basepoint " + std::to_string(base) + " not in space");
  return AugmentedSpace(space, base);
}

template <class S>
concept MetricSpaceLike = requires(const S& s, PointId p) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.d(p, p) } -> std::convertible_to<const Rational&>;
};

namespace detail {
template <MetricSpaceLike S, class Within>
Partition threshold_partition(const S& space, Within within) {
  std::vector<int> label(space.size(), -1);
  int next = 0;
  for (std::size_t p = 0; p < space.size(); ++p) {
    if (label[p] != -1) continue;
    label[p] = next;
    for (std::size_t q = p + 1; q < space.size(); ++q)
      if (label[q] == -1 && within(space.d(p, q))) label[q] = next;
    ++next;
  }
  return Partition::from_labels(label);
}
}  // namespace detail

/// Classes of d(p,q) <= r. Transitive because of the strong triangle inequality.
template <MetricSpaceLike S>
Partition ball_partition(const S& space, const Rational& r) {
  if (r.is_negative()) throw InputError("negative ball radius");
  return detail::threshold_partition(space, [&](const Rational& v) { return v <= r; });
}

/// Classes of d(p,q) < r.
template <MetricSpaceLike S>
Partition open_ball_partition(const S& space, const Rational& r) {
  if (!(Rational(0) < r)) throw InputError("open ball radius must be positive");
  return detail::threshold_partition(space, [&](const Rational& v) { return v < r; });
}

/// Sorted distinct values d(p,q), including 0.
template <MetricSpaceLike S>
std::vector<Rational> distance_values(const S& space) {
  std::set<Rational> vals;
  for (std::size_t p = 0; p < space.size(); ++p)
    for (std::size_t q = 0; q < space.size(); ++q) vals.insert(space.d(p, q));
  return {vals.begin(), vals.end()};
}

/// One level per distinct distance value, coarsest first, ending with the singleton partition at 0.
template <MetricSpaceLike S>
PartitionChain ball_chain(const S& space) {
  auto vals = distance_values(space);
  std::vector<ChainLevel> levels;
  for (auto it = vals.rbegin(); it != vals.rend(); ++it) levels.push_back({*it, ball_partition(space, *it)});
  return PartitionChain(std::move(levels));
}

struct CombinedMetric {
  DistanceMatrix dist;
  /// False when some pair p != q is at distance 0 in every member of the family.
  bool separates = true;
  PointId unseparated_p = -1, unseparated_q = -1;
};

/*
 * d(x,y) = max_n 2^{-n} d_n(x,y) for n = 1..N. Every member must be an
 * ultra-pseudometric bounded by 1 over the same point count. Separation
 * failure is reported on the result, not thrown.
 */
inline CombinedMetric combine_pseudometrics(const std::vector<DistanceMatrix>& family) {
  if (family.empty()) throw InputError("empty pseudometric family");
  const std::size_t n = family.front().size();
  CombinedMetric out;
  out.dist.assign(n, std::vector<Rational>(n));
  Rational weight(1);
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& m = family[k];
    if (m.size() != n) throw InputError("pseudometric " + std::to_string(k) + " has a different size");
    auto report = validate_ultrametric(m, MetricMode::pseudometric);
    if (!report) throw InputError("member " + std::to_string(k) + " is not an ultra-pseudometric: " + report.message);
    weight = weight * Rational(1, 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (Rational(1) < m[i][j]) throw InputError("member " + std::to_string(k) + " is not bounded by 1");
        out.dist[i][j] = max(out.dist[i][j], weight * m[i][j]);
      }
  }
  for (std::size_t i = 0; i < n && out.separates; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (out.dist[i][j].is_zero()) {
        out.separates = false;
        out.unseparated_p = static_cast<PointId>(i);
        out.unseparated_q = static_cast<PointId>(j);
        break;
      }
  return out;
}

}  // namespace nafree
