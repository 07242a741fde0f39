#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nafree/rational.hpp"

namespace nafree {

using PointId = int;

/// Raised when a block list is not a partition of the ground set.
class PartitionError : public InputError {
public:
  PartitionError(const std::string& what, PointId point) : InputError(what), point_(point) {}
  PointId point() const { return point_; }

private:
  PointId point_;
};

/*
 * An equivalence relation on {0, ..., n-1}, stored as its blocks.
 *
 * Blocks are kept sorted internally and ordered by their smallest member, so
 * two partitions describing the same relation compare equal.
 */
class Partition {
public:
  Partition() = default;

  /// Throws PartitionError naming the first point that is repeated or missing.
  Partition(std::size_t ground_size, std::vector<std::vector<PointId>> blocks)
      : block_of_(ground_size, -1) {
    for (auto& b : blocks) {
      if (b.empty()) throw PartitionError("empty block", -1);
      std::sort(b.begin(), b.end());
    }
    std::sort(blocks.begin(), blocks.end());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (PointId p : blocks[i]) {
        if (p < 0 || static_cast<std::size_t>(p) >= ground_size)
          throw PartitionError("point " + std::to_string(p) + " outside ground set", p);
        if (block_of_[p] != -1)
          throw PartitionError("point " + std::to_string(p) + " lies in two blocks", p);
        block_of_[p] = static_cast<int>(i);
      }
    }
    for (std::size_t p = 0; p < ground_size; ++p)
      if (block_of_[p] == -1)
        throw PartitionError("point " + std::to_string(p) + " not covered", static_cast<PointId>(p));
    blocks_ = std::move(blocks);
  }

  /// Builds the partition whose classes are the fibres of `label`.
  static Partition from_labels(const std::vector<int>& label) {
    std::vector<std::vector<PointId>> blocks;
    std::vector<std::pair<int, std::size_t>> seen;
    for (std::size_t p = 0; p < label.size(); ++p) {
      auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& s) { return s.first == label[p]; });
      if (it == seen.end()) {
        seen.emplace_back(label[p], blocks.size());
        blocks.push_back({static_cast<PointId>(p)});
      } else {
        blocks[it->second].push_back(static_cast<PointId>(p));
      }
    }
    return Partition(label.size(), std::move(blocks));
  }

  static Partition singletons(std::size_t n) {
    std::vector<int> label(n);
    for (std::size_t i = 0; i < n; ++i) label[i] = static_cast<int>(i);
    return from_labels(label);
  }

  static Partition whole(std::size_t n) { return from_labels(std::vector<int>(n, 0)); }

  std::size_t ground_size() const { return block_of_.size(); }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<std::vector<PointId>>& blocks() const { return blocks_; }
  const std::vector<PointId>& block(std::size_t i) const { return blocks_[i]; }
  int block_of(PointId p) const { return block_of_.at(p); }

  bool related(PointId p, PointId q) const { return block_of(p) == block_of(q); }

  /// True when every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const {
    if (coarser.ground_size() != ground_size()) return false;
    for (const auto& b : blocks_)
      for (PointId p : b)
        if (coarser.block_of(p) != coarser.block_of(b.front())) return false;
    return true;
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.blocks_ == b.blocks_; }

private:
  std::vector<std::vector<PointId>> blocks_;
  std::vector<int> block_of_;
};

struct ChainLevel {
  Rational threshold;
  Partition partition;
};

/*
 * Finite stand-in for a uniformity base: partitions indexed by strictly
 * decreasing thresholds, each level refining the one before it. Level 0 is
 * the coarsest.
 */
class PartitionChain {
public:
  PartitionChain() = default;

  explicit PartitionChain(std::vector<ChainLevel> levels) : levels_(std::move(levels)) {
    for (std::size_t i = 1; i < levels_.size(); ++i) {
      if (!(levels_[i].threshold < levels_[i - 1].threshold))
        throw InputError("chain thresholds must strictly decrease (level " + std::to_string(i) + ")");
      if (levels_[i].partition.ground_size() != levels_[0].partition.ground_size())
        throw InputError("chain levels over different ground sets");
      if (!levels_[i].partition.refines(levels_[i - 1].partition))
        throw InputError("chain level " + std::to_string(i) + " does not refine level " + std::to_string(i - 1));
    }
  }

  std::size_t size() const { return levels_.size(); }
  bool empty() const { return levels_.empty(); }
  const ChainLevel& level(std::size_t i) const { return levels_.at(i); }
  const std::vector<ChainLevel>& levels() const { return levels_; }

private:
  std::vector<ChainLevel> levels_;
};

}  // namespace nafree
