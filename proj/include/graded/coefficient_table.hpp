#pragma once

#include <string>
#include <utility>
#include <vector>

#include "graded/graded_index.hpp"
#include "graded/matrix_kernel.hpp"

namespace graded {

/// A lone isotropic vector moved from one level into the next.
struct Promotion {
  std::size_t from_level = 0;
  std::string label;
  std::size_t to_level = 0;

  friend bool operator==(const Promotion&, const Promotion&) = default;
};

/// One output level: each f vector as a coefficient column over the full flat e basis.
template <typename Real>
struct LevelCoefficients {
  std::vector<std::string> labels;
  /// Flat indices of the e vectors normalized at this level (its own elements,
  /// preceded by any promoted ones).
  std::vector<Index> members;
  /// total x members.size()
  ComplexMatrix<Real> coefficients;
  /// Q^k (or the pseudo normalizer R^k): the block of `coefficients` on the member rows.
  ComplexMatrix<Real> q;
  /// (j, P^{kj}) for every finished lower level j, ascending.
  std::vector<std::pair<std::size_t, ComplexMatrix<Real>>> projections;
  /// Pseudo-norm of every column: +1 or -1.
  std::vector<int> signs;

  Index size() const noexcept { return coefficients.cols(); }
};

template <typename Real>
struct CoefficientTable {
  /// Grading of the input system.
  GradedIndex index;
  std::vector<LevelCoefficients<Real>> levels;
  std::vector<Promotion> promotions;

  Index total() const noexcept { return index.total(); }

  /// All coefficient columns side by side, level-major.
  ComplexMatrix<Real> matrix() const {
    Index cols = 0;
    for (const auto& level : levels) cols += level.size();
    ComplexMatrix<Real> out(total(), cols);
    Index at = 0;
    for (const auto& level : levels) {
      out.middleCols(at, level.size()) = level.coefficients;
      at += level.size();
    }
    return out;
  }

  std::vector<int> signs() const {
    std::vector<int> out;
    for (const auto& level : levels) out.insert(out.end(), level.signs.begin(), level.signs.end());
    return out;
  }
};

}  // namespace graded
