#pragma once

// Graded orthonormalization: every level is orthonormalized symmetrically
// (inverse square root of its projected Gram matrix) after projecting out all
// finished lower levels. All vectors live in coefficient space over the flat e
// basis, and every inner product is a contraction with the full Gram matrix G:
// <c, d> = c^dagger G d.

#include <algorithm>
#include <cmath>
#include <vector>

#include "graded/coefficient_table.hpp"
#include "graded/errors.hpp"
#include "graded/gram_source.hpp"
#include "graded/matrix_kernel.hpp"

namespace graded {

/// D^{kj} = <f^j_beta, e^k_gamma>, shape |I_j| x |members|.
template <typename Real>
ComplexMatrix<Real> compute_D(const HermitianMatrix<Real>& gram, const CoefficientTable<Real>& table,
                              const std::vector<Index>& members, std::size_t j) {
  if (j >= table.levels.size())
    throw LevelNotReady("level " + std::to_string(j) + " is not finished (frontier " +
                        std::to_string(table.levels.size()) + ")");
  const auto& cj = table.levels[j].coefficients;
  ComplexMatrix<Real> columns(gram.dim(), static_cast<Index>(members.size()));
  for (Index c = 0; c < columns.cols(); ++c) columns.col(c) = gram.matrix().col(members[static_cast<std::size_t>(c)]);
  return cj.adjoint() * columns;
}

/// D^{kj} for the elements of input level k.
template <typename Real>
ComplexMatrix<Real> compute_D(const GramSource<Real>& source, const CoefficientTable<Real>& table, std::size_t k,
                              std::size_t j) {
  if (j >= k) throw LevelNotReady("D^{kj} needs j < k");
  return compute_D(full_gram(source), table, source.index().flat_range(k), j);
}

/// Delta = D^dagger J D, with J = diag(signs) of the lower level (identity when empty).
template <typename Real>
HermitianMatrix<Real> compute_delta(const ComplexMatrix<Real>& d, const std::vector<int>& signs = {}) {
  ComplexMatrix<Real> jd = d;
  for (std::size_t r = 0; r < signs.size(); ++r)
    if (signs[r] < 0) jd.row(static_cast<Index>(r)) = -jd.row(static_cast<Index>(r));
  return hermitize(ComplexMatrix<Real>(d.adjoint() * jd)).matrix;
}

/// B^k = Gamma^k - sum_j Delta^{kj}, summed in ascending j.
template <typename Real>
HermitianMatrix<Real> compute_B(const HermitianMatrix<Real>& gamma, const std::vector<HermitianMatrix<Real>>& deltas) {
  ComplexMatrix<Real> b = gamma.matrix();
  for (const auto& delta : deltas) {
    if (delta.dim() != gamma.dim()) throw ShapeMismatch("Delta and Gamma dimensions differ");
    b -= delta.matrix();
  }
  return hermitize(b).matrix;
}

/// Q^k = (B^k)^{-1/2}. A near-singular B^k means the input of level k is
/// linearly dependent; a clearly negative eigenvalue means the metric is not
/// positive definite.
template <typename Real>
HermitianMatrix<Real> compute_Q(const HermitianMatrix<Real>& b, Real degeneracy_tol = Real(kDefaultDegeneracyTol),
                                std::size_t level = 0) {
  try {
    return inv_sqrt(b, degeneracy_tol);
  } catch (const NotPositiveDefinite& e) {
    const double band = static_cast<double>(degeneracy_tol) * std::max(std::abs(e.max_eigenvalue()), 0.0);
    if (e.min_eigenvalue() < -band || e.max_eigenvalue() < 0.0)
      throw DegenerateMetric("Gram matrix is not positive definite at level " + std::to_string(level) +
                                 " (eigenvalue " + std::to_string(e.min_eigenvalue()) + "); use the pseudo metric",
                             static_cast<long>(level));
    throw LinearlyDependentInput(level, e.min_eigenvalue());
  }
}

/// P^{kj} = -J^j D^{kj} Q^k (J^j = identity for an empty sign list).
template <typename Real>
ComplexMatrix<Real> compute_P(const ComplexMatrix<Real>& d, const ComplexMatrix<Real>& q,
                              const std::vector<int>& signs = {}) {
  if (d.cols() != q.rows())
    throw ShapeMismatch("D has " + std::to_string(d.cols()) + " columns but Q has " + std::to_string(q.rows()) +
                        " rows");
  ComplexMatrix<Real> p = -(d * q);
  for (std::size_t r = 0; r < signs.size(); ++r)
    if (signs[r] < 0) p.row(static_cast<Index>(r)) = -p.row(static_cast<Index>(r));
  return p;
}

/// Gram matrix of h_alpha = e_alpha - sum_j sum_beta eps_beta <f^j_beta, e_alpha> f^j_beta
/// for the given member elements, built directly from the projected vectors.
template <typename Real>
HermitianMatrix<Real> compute_h_gram(const HermitianMatrix<Real>& gram, const CoefficientTable<Real>& table,
                                     const std::vector<Index>& members) {
  ComplexMatrix<Real> h = ComplexMatrix<Real>::Zero(gram.dim(), static_cast<Index>(members.size()));
  for (Index c = 0; c < h.cols(); ++c) h(members[static_cast<std::size_t>(c)], c) = Real(1);
  // Overlaps are taken against the raw e vectors, not the partially projected h.
  const ComplexMatrix<Real> e = h;
  for (std::size_t j = 0; j < table.levels.size(); ++j) {
    const auto& level = table.levels[j];
    ComplexMatrix<Real> overlaps = level.coefficients.adjoint() * (gram.matrix() * e);
    for (std::size_t r = 0; r < level.signs.size(); ++r)
      if (level.signs[r] < 0) overlaps.row(static_cast<Index>(r)) = -overlaps.row(static_cast<Index>(r));
    h -= level.coefficients * overlaps;
  }
  return hermitize(ComplexMatrix<Real>(h.adjoint() * gram.matrix() * h)).matrix;
}

/// compute_h_gram for input level k; requires exactly levels 0..k-1 finished.
template <typename Real>
HermitianMatrix<Real> compute_h_gram(const GramSource<Real>& source, const CoefficientTable<Real>& table,
                                     std::size_t k) {
  if (table.levels.size() < k) throw LevelNotReady("levels below " + std::to_string(k) + " are not all finished");
  CoefficientTable<Real> lower = table;
  lower.levels.resize(k);
  return compute_h_gram(full_gram(source), lower, source.index().flat_range(k));
}

namespace detail {

template <typename Real>
struct ProjectedLevel {
  HermitianMatrix<Real> gamma;
  std::vector<ComplexMatrix<Real>> d;  // one per finished level
  HermitianMatrix<Real> b;
};

template <typename Real>
ProjectedLevel<Real> project_level(const HermitianMatrix<Real>& gram, const CoefficientTable<Real>& table,
                                   const std::vector<Index>& members) {
  ProjectedLevel<Real> out;
  out.gamma = gram.block(members);
  std::vector<HermitianMatrix<Real>> deltas;
  for (std::size_t j = 0; j < table.levels.size(); ++j) {
    out.d.push_back(compute_D(gram, table, members, j));
    deltas.push_back(compute_delta(out.d.back(), table.levels[j].signs));
  }
  out.b = compute_B(out.gamma, deltas);
  return out;
}

// C^k = E_members Q + sum_j C^j P^{kj}.
template <typename Real>
LevelCoefficients<Real> finish_level(const CoefficientTable<Real>& table, const ProjectedLevel<Real>& projected,
                                     std::vector<Index> members, std::vector<std::string> labels,
                                     ComplexMatrix<Real> q, std::vector<int> signs) {
  LevelCoefficients<Real> level;
  const Index total = table.total();
  level.coefficients = ComplexMatrix<Real>::Zero(total, q.cols());
  for (Index r = 0; r < q.rows(); ++r) level.coefficients.row(members[static_cast<std::size_t>(r)]) = q.row(r);
  for (std::size_t j = 0; j < table.levels.size(); ++j) {
    auto p = compute_P(projected.d[j], q, table.levels[j].signs);
    if (p.rows() > 0) level.coefficients += table.levels[j].coefficients * p;
    level.projections.emplace_back(j, std::move(p));
  }
  level.labels = std::move(labels);
  level.members = std::move(members);
  level.q = std::move(q);
  level.signs = std::move(signs);
  return level;
}

}  // namespace detail

/// Orthonormalizes a graded system given by its full Gram matrix (Euclidean metric).
template <typename Real>
CoefficientTable<Real> orthonormalize_graded(const GradedIndex& index, const HermitianMatrix<Real>& gram,
                                             Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  if (gram.dim() != index.total()) throw DimensionMismatch("Gram matrix does not match the grading");
  CoefficientTable<Real> table;
  table.index = index;
  for (std::size_t k = 0; k < index.level_count(); ++k) {
    auto members = index.flat_range(k);
    const auto projected = detail::project_level(gram, table, members);
    ComplexMatrix<Real> q = compute_Q(projected.b, degeneracy_tol, k).matrix();
    std::vector<int> signs(members.size(), 1);
    table.levels.push_back(detail::finish_level(table, projected, std::move(members), index.labels(k), std::move(q),
                                                std::move(signs)));
  }
  return table;
}

template <typename Real>
CoefficientTable<Real> orthonormalize_graded(const GramSource<Real>& source,
                                             Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  return orthonormalize_graded(source.index(), full_gram(source), degeneracy_tol);
}

/// Modified Gram-Schmidt over the flat (level-major) order. Every element is its
/// own output level; used as a reference.
template <typename Real>
CoefficientTable<Real> gram_schmidt_reference(const GradedIndex& index, const HermitianMatrix<Real>& gram,
                                              Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  if (gram.dim() != index.total()) throw DimensionMismatch("Gram matrix does not match the grading");
  const Index n = gram.dim();
  const auto& g = gram.matrix();
  ComplexMatrix<Real> c = ComplexMatrix<Real>::Identity(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j) {
      const Complex<Real> overlap = (c.col(j).adjoint() * g * c.col(i)).value();
      c.col(i) -= overlap * c.col(j);
    }
    const Real norm2 = (c.col(i).adjoint() * g * c.col(i)).value().real();
    if (!(norm2 > degeneracy_tol * g(i, i).real()))
      throw LinearlyDependentInput(index.level_of(i), static_cast<double>(norm2));
    c.col(i) /= std::sqrt(norm2);
  }
  CoefficientTable<Real> table;
  table.index = index;
  for (Index i = 0; i < n; ++i) {
    LevelCoefficients<Real> level;
    const std::size_t k = index.level_of(i);
    level.labels = {index.labels(k)[static_cast<std::size_t>(i - index.offset(k))]};
    level.members = {i};
    level.coefficients = c.col(i);
    level.q = c.block(i, i, 1, 1);
    level.signs = {1};
    table.levels.push_back(std::move(level));
  }
  return table;
}

template <typename Real>
CoefficientTable<Real> gram_schmidt_reference(const GramSource<Real>& source,
                                              Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  return gram_schmidt_reference(source.index(), full_gram(source), degeneracy_tol);
}

/// Symmetric orthonormalization of the whole set at once, C = G^{-1/2}; the
/// grading is ignored and the output is a single level.
template <typename Real>
CoefficientTable<Real> gram_method_reference(const GradedIndex& index, const HermitianMatrix<Real>& gram,
                                             Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  if (gram.dim() != index.total()) throw DimensionMismatch("Gram matrix does not match the grading");
  LevelCoefficients<Real> level;
  level.coefficients = compute_Q(gram, degeneracy_tol, 0).matrix();
  level.q = level.coefficients;
  for (std::size_t k = 0; k < index.level_count(); ++k)
    level.labels.insert(level.labels.end(), index.labels(k).begin(), index.labels(k).end());
  for (Index i = 0; i < gram.dim(); ++i) level.members.push_back(i);
  level.signs.assign(static_cast<std::size_t>(gram.dim()), 1);
  CoefficientTable<Real> table;
  table.index = index;
  table.levels.push_back(std::move(level));
  return table;
}

template <typename Real>
CoefficientTable<Real> gram_method_reference(const GramSource<Real>& source,
                                             Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  return gram_method_reference(source.index(), full_gram(source), degeneracy_tol);
}

template <typename Real>
struct VerificationReport {
  /// max |C^dagger G C - diag(eps)|
  Real max_residual = 0;
  /// Per output level: cond(Q^k) as a ratio of singular values (1 for empty levels).
  std::vector<Real> condition_numbers;
  /// Each level's columns vanish exactly on rows outside the levels up to it.
  bool grading_ok = true;
  Real tolerance = 0;
  bool passed = false;
};

template <typename Real>
Real condition_number(const ComplexMatrix<Real>& q) {
  if (q.size() == 0) return Real(1);
  const auto eig = eigh(hermitize(ComplexMatrix<Real>(q.adjoint() * q)).matrix);
  const Real smallest = eig.values(eig.values.size() - 1);
  if (!(smallest > Real(0))) return std::numeric_limits<Real>::infinity();
  return std::sqrt(eig.values(0) / smallest);
}

template <typename Real>
VerificationReport<Real> verify(const HermitianMatrix<Real>& gram, const CoefficientTable<Real>& table,
                                Real tolerance = Real(kDefaultVerifyTol)) {
  VerificationReport<Real> report;
  report.tolerance = tolerance;
  const ComplexMatrix<Real> c = table.matrix();
  const auto signs = table.signs();
  ComplexMatrix<Real> residual = c.adjoint() * gram.matrix() * c;
  for (std::size_t i = 0; i < signs.size(); ++i) residual(static_cast<Index>(i), static_cast<Index>(i)) -= Real(signs[i]);
  report.max_residual = max_abs(residual);

  std::vector<bool> allowed(static_cast<std::size_t>(table.total()), false);
  for (const auto& level : table.levels) {
    for (Index m : level.members) allowed[static_cast<std::size_t>(m)] = true;
    for (Index r = 0; r < level.coefficients.rows(); ++r)
      if (!allowed[static_cast<std::size_t>(r)])
        for (Index col = 0; col < level.coefficients.cols(); ++col)
          if (level.coefficients(r, col) != Complex<Real>(0)) report.grading_ok = false;
    report.condition_numbers.push_back(condition_number(level.q));
  }
  report.passed = report.grading_ok && report.max_residual <= tolerance;
  return report;
}

template <typename Real>
VerificationReport<Real> verify(const GramSource<Real>& source, const CoefficientTable<Real>& table,
                                Real tolerance = Real(kDefaultVerifyTol)) {
  return verify(full_gram(source), table, tolerance);
}

/// For a table over the Fourier grading (columns in flat order), the largest
/// deviation from f_{-m} = conj(f_{+m}) read through the mirror m -> -m of rows
/// and columns. Zero for the graded recursion under any real weight.
template <typename Real>
Real conjugate_symmetry_defect(const CoefficientTable<Real>& table) {
  const ComplexMatrix<Real> c = table.matrix();
  if (c.cols() != c.rows()) throw ShapeMismatch("conjugate symmetry needs one column per input element");
  auto mirror = [](Index flat) -> Index { return flat == 0 ? 0 : flat % 2 == 1 ? flat + 1 : flat - 1; };
  Real worst = 0;
  for (Index col = 0; col < c.cols(); ++col)
    for (Index row = 0; row < c.rows(); ++row)
      worst = std::max(worst, std::abs(c(row, col) - std::conj(c(mirror(row), mirror(col)))));
  return worst;
}

}  // namespace graded
