#include "graded/graded_index.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "graded/errors.hpp"

namespace graded {

GradedIndex::GradedIndex(std::vector<std::vector<std::string>> levels) : levels_(std::move(levels)) {
  offsets_.reserve(levels_.size() + 1);
  offsets_.push_back(0);
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    const auto& labels = levels_[k];
    if (labels.empty()) throw InvalidIndex("level " + std::to_string(k) + " is empty");
    std::set<std::string> seen;
    for (const auto& label : labels)
      if (!seen.insert(label).second)
        throw InvalidIndex("label '" + label + "' appears twice in level " + std::to_string(k));
    offsets_.push_back(offsets_.back() + static_cast<Eigen::Index>(labels.size()));
  }
}

Eigen::Index GradedIndex::flat(std::size_t level, std::size_t alpha) const {
  if (alpha >= levels_.at(level).size()) throw std::out_of_range("label position out of range");
  return offsets_[level] + static_cast<Eigen::Index>(alpha);
}

std::vector<Eigen::Index> GradedIndex::flat_range(std::size_t level) const {
  std::vector<Eigen::Index> out(levels_.at(level).size());
  std::iota(out.begin(), out.end(), offsets_[level]);
  return out;
}

std::size_t GradedIndex::level_of(Eigen::Index flat) const {
  if (flat < 0 || flat >= total()) throw std::out_of_range("flat index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

bool GradedIndex::all_singleton() const noexcept {
  return std::all_of(levels_.begin(), levels_.end(), [](const auto& l) { return l.size() == 1; });
}

}  // namespace graded
