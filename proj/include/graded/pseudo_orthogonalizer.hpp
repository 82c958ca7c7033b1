#pragma once

// Graded pseudo-orthonormalization for nondegenerate indefinite metrics.
//
// Lower levels are projected out with their pseudo-norms:
//   h_alpha = e_alpha - sum_j sum_beta eps_beta <f^j_beta, e_alpha> f^j_beta,
//   B^k     = Gamma^k - sum_j D^{kj dagger} J^j D^{kj},   J^j = diag(eps^j),
// which is the only projection making h orthogonal to every finished f and
// reduces to the Euclidean recursion when all eps = +1. Each level is then
// normalized to pseudo-norms +-1. A level that reduces to one isotropic vector
// is merged into the next level before that level is processed.

#include <cmath>
#include <string>
#include <vector>

#include "graded/orthogonalizer.hpp"

namespace graded {

/// True iff b is 1x1 and |b(0,0)| <= degeneracy_tol * max(scale, 1).
template <typename Real>
bool detect_isotropic_level(const HermitianMatrix<Real>& b, Real degeneracy_tol = Real(kDefaultDegeneracyTol),
                            Real scale = Real(1)) {
  return b.dim() == 1 && std::abs(b(0, 0).real()) <= degeneracy_tol * std::max(scale, Real(1));
}

template <typename Real>
CoefficientTable<Real> pseudo_orthonormalize_graded(const GradedIndex& index, const HermitianMatrix<Real>& gram,
                                                    Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  if (gram.dim() != index.total()) throw DimensionMismatch("Gram matrix does not match the grading");
  CoefficientTable<Real> table;
  table.index = index;
  std::vector<Index> carried_members;
  std::vector<std::string> carried_labels;

  for (std::size_t k = 0; k < index.level_count(); ++k) {
    std::vector<Index> members = std::move(carried_members);
    std::vector<std::string> labels = std::move(carried_labels);
    carried_members.clear();
    carried_labels.clear();
    for (Index m : index.flat_range(k)) members.push_back(m);
    labels.insert(labels.end(), index.labels(k).begin(), index.labels(k).end());

    const auto projected = detail::project_level(gram, table, members);
    const auto& b = projected.b;

    if (detect_isotropic_level(b, degeneracy_tol, max_abs(projected.gamma.matrix()))) {
      if (k + 1 == index.level_count()) throw TerminalIsotropicVector(k);
      table.promotions.push_back(Promotion{index.level_of(members.front()), labels.front(), k + 1});
      carried_members = std::move(members);
      carried_labels = std::move(labels);
      LevelCoefficients<Real> empty;
      empty.coefficients.resize(table.total(), 0);
      table.levels.push_back(std::move(empty));
      continue;
    }

    ComplexMatrix<Real> q;
    std::vector<int> signs;
    Index positive = 0;
    Index negative = 0;
    if (b.dim() == 1) {
      (b(0, 0).real() > 0 ? positive : negative) = 1;
    } else {
      try {
        const auto split = signature_split(b, degeneracy_tol);
        positive = split.positive;
        negative = split.negative;
      } catch (const DegenerateMetric& e) {
        throw DegenerateMetric("level " + std::to_string(k) + ": " + e.what(), static_cast<long>(k));
      }
    }
    if (negative == 0) {
      q = inv_sqrt(b, degeneracy_tol).matrix();
      signs.assign(members.size(), 1);
    } else if (positive == 0) {
      q = inv_sqrt(hermitize(ComplexMatrix<Real>(-b.matrix())).matrix, degeneracy_tol).matrix();
      signs.assign(members.size(), -1);
    } else {
      auto normalizer = pseudo_normalizer(b, degeneracy_tol);
      q = std::move(normalizer.r);
      signs = std::move(normalizer.signs);
    }
    table.levels.push_back(
        detail::finish_level(table, projected, std::move(members), std::move(labels), std::move(q), std::move(signs)));
  }
  return table;
}

template <typename Real>
CoefficientTable<Real> pseudo_orthonormalize_graded(const GramSource<Real>& source,
                                                    Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  return pseudo_orthonormalize_graded(source.index(), full_gram(source), degeneracy_tol);
}

/// Why sequential pseudo-Gram-Schmidt stalls on an isotropic first vector:
/// orthogonalizing e2 + alpha e1 against e1 requires <e1,e1> alpha = -<e1,e2>.
template <typename Real>
struct FailureTrace {
  Complex<Real> coefficient;  // <e1, e1>
  Complex<Real> rhs;          // -<e1, e2>
  bool solvable = true;
  std::string explanation;
};

template <typename Real>
FailureTrace<Real> gram_schmidt_pseudo_failure_demo(const HermitianMatrix<Real>& gram,
                                                    Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  if (gram.dim() != 2) throw NotACounterexample("the demonstration needs a 2x2 Gram matrix");
  const Real scale = std::max(max_abs(gram.matrix()), Real(1));
  if (std::abs(gram(0, 0).real()) > degeneracy_tol * scale)
    throw NotACounterexample("e1 is not isotropic; sequential orthogonalization proceeds normally");
  if (std::abs(gram(0, 1)) <= degeneracy_tol * scale)
    throw NotACounterexample("e1 and e2 are initially orthogonal; there is nothing to orthogonalize");
  FailureTrace<Real> trace;
  trace.coefficient = gram(0, 0);
  trace.rhs = -gram(0, 1);
  trace.solvable = false;
  trace.explanation = "e1 is isotropic, so <e1, e2 + alpha e1> = <e1, e2> for every alpha: the equation 0 * alpha = " +
                      std::to_string(static_cast<double>(trace.rhs.real())) +
                      (trace.rhs.imag() != 0 ? " + " + std::to_string(static_cast<double>(trace.rhs.imag())) + "i" : "") +
                      " has no solution";
  return trace;
}

}  // namespace graded
