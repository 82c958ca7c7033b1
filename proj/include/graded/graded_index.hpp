#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace graded {

/// Partition of a finite vector set into ordered levels k = 0..K.
///
/// Flat indices are level-major and keep the within-level label order, so
/// level k occupies the contiguous range [offset(k), offset(k) + size(k)).
class GradedIndex {
 public:
  GradedIndex() = default;
  /// Throws InvalidIndex on an empty level or a label repeated within a level.
  explicit GradedIndex(std::vector<std::vector<std::string>> levels);

  std::size_t level_count() const noexcept { return levels_.size(); }
  Eigen::Index total() const noexcept { return offsets_.empty() ? 0 : offsets_.back(); }

  const std::vector<std::string>& labels(std::size_t level) const { return levels_.at(level); }
  const std::vector<std::vector<std::string>>& levels() const noexcept { return levels_; }
  Eigen::Index size(std::size_t level) const { return static_cast<Eigen::Index>(levels_.at(level).size()); }
  Eigen::Index offset(std::size_t level) const { return offsets_.at(level); }

  /// Flat column of label position alpha within level k.
  Eigen::Index flat(std::size_t level, std::size_t alpha) const;
  /// Flat indices of every element of a level, in label order.
  std::vector<Eigen::Index> flat_range(std::size_t level) const;
  /// Level that owns a flat index.
  std::size_t level_of(Eigen::Index flat) const;

  bool all_singleton() const noexcept;

  friend bool operator==(const GradedIndex&, const GradedIndex&) = default;

 private:
  std::vector<std::vector<std::string>> levels_;
  std::vector<Eigen::Index> offsets_;  // level_count() + 1 entries
};

}  // namespace graded
