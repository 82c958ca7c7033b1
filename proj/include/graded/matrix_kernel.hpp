#pragma once

// Dense complex matrices and the Hermitian spectral operations used by the
// orthogonalizers: cyclic Jacobi eigendecomposition, principal inverse square
// root and signature normalization of indefinite Gram matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "graded/errors.hpp"

namespace graded {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

inline constexpr double kDefaultDegeneracyTol = 1e-10;
inline constexpr double kDefaultVerifyTol = 1e-9;

/// Largest entry magnitude, 0 for an empty matrix.
template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  return m.size() == 0 ? Real(0) : m.cwiseAbs().maxCoeff();
}

/// Square complex matrix with A(i,j) == conj(A(j,i)) exactly and a real
/// diagonal. Instances are only produced by symmetrizing construction.
template <typename Real>
class HermitianMatrix {
 public:
  using Scalar = Complex<Real>;
  using Matrix = ComplexMatrix<Real>;

  HermitianMatrix() = default;

  static HermitianMatrix identity(Index dim) { return HermitianMatrix(Matrix::Identity(dim, dim)); }

  static HermitianMatrix diagonal(const RealVector<Real>& values) {
    return HermitianMatrix(values.template cast<Scalar>().asDiagonal().toDenseMatrix());
  }

  Index dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  Scalar operator()(Index i, Index j) const { return m_(i, j); }

  /// Principal submatrix on the given row/column indices.
  HermitianMatrix block(const std::vector<Index>& idx) const {
    Matrix out(static_cast<Index>(idx.size()), static_cast<Index>(idx.size()));
    for (Index r = 0; r < out.rows(); ++r)
      for (Index c = 0; c < out.cols(); ++c) out(r, c) = m_(idx[r], idx[c]);
    return HermitianMatrix(std::move(out));
  }

  template <typename Derived>
  friend auto hermitize(const Eigen::MatrixBase<Derived>& a);

 private:
  explicit HermitianMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

template <typename Real>
struct Hermitized {
  HermitianMatrix<Real> matrix;
  /// Largest entrywise change made by symmetrization.
  Real adjustment;
};

/// (a + a^dagger) / 2 with the diagonal forced real.
template <typename Derived>
auto hermitize(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Matrix = ComplexMatrix<Real>;
  if (a.rows() != a.cols()) throw NonSquare(a.rows(), a.cols());
  const Matrix in = a.template cast<Complex<Real>>();
  const Index n = in.rows();
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    out(i, i) = Complex<Real>(in(i, i).real(), Real(0));
    for (Index j = i + 1; j < n; ++j) {
      const Complex<Real> v = (in(i, j) + std::conj(in(j, i))) / Real(2);
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  const Real adjustment = max_abs(out - in);
  return Hermitized<Real>{HermitianMatrix<Real>(std::move(out)), adjustment};
}

template <typename Real>
struct EigenDecomposition {
  /// Descending.
  RealVector<Real> values;
  /// Columns are unit eigenvectors; largest-magnitude component real positive.
  ComplexMatrix<Real> vectors;
};

namespace detail {

inline constexpr int kMaxJacobiSweeps = 50;

template <typename Real>
Real off_diagonal_norm(const ComplexMatrix<Real>& a) {
  Real sum = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// Rotation is needed unless the pair is already negligible relative to its
// diagonal entries (classical relative-accuracy test for Jacobi).
template <typename Real>
bool needs_rotation(const ComplexMatrix<Real>& a, Index p, Index q) {
  const Real apq = std::abs(a(p, q));
  if (apq == Real(0)) return false;
  const Real diag = std::sqrt(std::abs(a(p, p).real()) * std::abs(a(q, q).real()));
  return apq > std::numeric_limits<Real>::epsilon() * diag;
}

// Annihilate a(p,q) with the unitary U = Phi * G, where Phi removes the phase of
// a(p,q) and G is the real Jacobi rotation of the resulting symmetric pair.
template <typename Real>
void rotate(ComplexMatrix<Real>& a, ComplexMatrix<Real>& v, Index p, Index q) {
  using C = Complex<Real>;
  const C apq = a(p, q);
  const Real r = std::abs(apq);
  const C phase = apq / r;  // e^{i phi}
  const Real theta = (a(q, q).real() - a(p, p).real()) / (Real(2) * r);
  const Real t = (theta >= 0 ? Real(1) : Real(-1)) / (std::abs(theta) + std::sqrt(theta * theta + Real(1)));
  const Real c = Real(1) / std::sqrt(t * t + Real(1));
  const Real s = t * c;

  const C u_pp(c, 0);
  const C u_pq(s, 0);
  const C u_qp = -s * std::conj(phase);
  const C u_qq = c * std::conj(phase);

  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {  // A <- A U
    const C akp = a(k, p);
    const C akq = a(k, q);
    a(k, p) = akp * u_pp + akq * u_qp;
    a(k, q) = akp * u_pq + akq * u_qq;
  }
  for (Index k = 0; k < n; ++k) {  // A <- U^dagger A
    const C apk = a(p, k);
    const C aqk = a(q, k);
    a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
    a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
  }
  a(p, q) = C(0);
  a(q, p) = C(0);
  a(p, p) = C(a(p, p).real(), 0);
  a(q, q) = C(a(q, q).real(), 0);
  for (Index k = 0; k < n; ++k) {  // V <- V U
    const C vkp = v(k, p);
    const C vkq = v(k, q);
    v(k, p) = vkp * u_pp + vkq * u_qp;
    v(k, q) = vkp * u_pq + vkq * u_qq;
  }
}

template <typename Real>
void fix_phase(Eigen::Ref<ComplexMatrix<Real>> col) {
  const Real largest = max_abs(col);
  if (largest == Real(0)) return;
  Index pivot = 0;
  for (Index i = 0; i < col.rows(); ++i) {
    if (std::abs(col(i, 0)) >= largest * (Real(1) - Real(1e-12))) {
      pivot = i;
      break;
    }
  }
  const Complex<Real> z = col(pivot, 0);
  col *= std::conj(z) / std::abs(z);
  col(pivot, 0) = Complex<Real>(col(pivot, 0).real(), 0);
}

// Modified Gram-Schmidt over columns [first, last).
template <typename Real>
void orthonormalize_columns(ComplexMatrix<Real>& v, Index first, Index last) {
  for (Index j = first; j < last; ++j) {
    for (Index i = first; i < j; ++i) {
      const Complex<Real> proj = v.col(i).dot(v.col(j));
      v.col(j) -= proj * v.col(i);
    }
    v.col(j) /= v.col(j).norm();
  }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Values are returned in descending order. Eigenvectors within a cluster of
/// (numerically) equal eigenvalues are re-orthonormalized, then each column's
/// phase is fixed so that its largest-magnitude component is real positive.
/// Throws NoConvergence if the sweep cap is reached or the reconstruction
/// residual exceeds tol * dim * maxAbs(a).
template <typename Real>
EigenDecomposition<Real> eigh(const HermitianMatrix<Real>& a, Real tol = Real(1e-11)) {
  using Matrix = ComplexMatrix<Real>;
  const Index n = a.dim();
  Matrix work = a.matrix();
  Matrix v = Matrix::Identity(n, n);

  const Real frobenius = work.norm();
  const Real threshold = Real(1e-13) * frobenius;
  bool converged = false;
  for (int sweep = 0; sweep < detail::kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q)
        if (detail::needs_rotation(work, p, q)) {
          detail::rotate(work, v, p, q);
          rotated = true;
        }
    if (!rotated) {
      converged = detail::off_diagonal_norm(work) <= threshold;
      break;
    }
  }
  if (!converged)
    throw NoConvergence("Jacobi eigensolver did not converge within " + std::to_string(detail::kMaxJacobiSweeps) +
                        " sweeps");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return work(i, i).real() > work(j, j).real(); });

  EigenDecomposition<Real> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = work(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }

  const Real scale = n == 0 ? Real(0) : out.values.cwiseAbs().maxCoeff();
  const Real cluster_width = Real(1e-12) * scale;
  for (Index first = 0; first < n;) {
    Index last = first + 1;
    while (last < n && out.values(last - 1) - out.values(last) <= cluster_width) ++last;
    if (last - first > 1) detail::orthonormalize_columns(out.vectors, first, last);
    first = last;
  }
  for (Index k = 0; k < n; ++k) detail::fix_phase<Real>(out.vectors.col(k));

  const Real max_entry = max_abs(a.matrix());
  const Matrix reconstructed =
      out.vectors * out.values.template cast<Complex<Real>>().asDiagonal() * out.vectors.adjoint();
  const Real residual = max_abs(reconstructed - a.matrix());
  if (residual > tol * static_cast<Real>(std::max<Index>(n, 1)) * max_entry)
    throw NoConvergence("Jacobi eigendecomposition residual " + std::to_string(static_cast<double>(residual)) +
                        " exceeds tolerance");
  return out;
}

/// V f(values) V^dagger, hermitized.
template <typename Real, typename F>
HermitianMatrix<Real> apply_spectral(const EigenDecomposition<Real>& eig, F&& f) {
  RealVector<Real> mapped(eig.values.size());
  for (Index k = 0; k < mapped.size(); ++k) mapped(k) = f(eig.values(k));
  const ComplexMatrix<Real> m = eig.vectors * mapped.template cast<Complex<Real>>().asDiagonal() * eig.vectors.adjoint();
  return hermitize(m).matrix;
}

/// Principal inverse square root of a Hermitian positive definite matrix.
/// Throws NotPositiveDefinite if any eigenvalue is <= degeneracy_tol * max eigenvalue.
template <typename Real>
HermitianMatrix<Real> inv_sqrt(const HermitianMatrix<Real>& a, Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  if (a.dim() == 0) return a;
  const auto eig = eigh(a);
  const Real largest = eig.values(0);
  const Real smallest = eig.values(eig.values.size() - 1);
  if (largest <= Real(0) || smallest <= degeneracy_tol * largest)
    throw NotPositiveDefinite(static_cast<double>(smallest), static_cast<double>(largest));
  return apply_spectral(eig, [](Real x) { return Real(1) / std::sqrt(x); });
}

template <typename Real>
struct SignatureSplit {
  Index positive = 0;  // p
  Index negative = 0;  // q
  EigenDecomposition<Real> decomposition;
};

/// Signature (p, q) of a nondegenerate Hermitian matrix.
/// Throws DegenerateMetric if an eigenvalue lies within degeneracy_tol * maxAbs eigenvalue of zero.
template <typename Real>
SignatureSplit<Real> signature_split(const HermitianMatrix<Real>& a,
                                     Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  SignatureSplit<Real> out;
  out.decomposition = eigh(a);
  const auto& values = out.decomposition.values;
  const Real scale = values.size() == 0 ? Real(0) : values.cwiseAbs().maxCoeff();
  const Real band = degeneracy_tol * scale;
  for (Index k = 0; k < values.size(); ++k) {
    if (values(k) > band && scale > Real(0))
      ++out.positive;
    else if (values(k) < -band && scale > Real(0))
      ++out.negative;
    else
      throw DegenerateMetric("Gram matrix is degenerate: eigenvalue " + std::to_string(static_cast<double>(values(k))) +
                             " lies in the dead band of width " + std::to_string(static_cast<double>(band)));
  }
  return out;
}

template <typename Real>
struct PseudoNormalizer {
  /// R with R^dagger A R = E_p (+) (-E_q).
  ComplexMatrix<Real> r;
  /// +1 p times, then -1 q times, matching the columns of r.
  std::vector<int> signs;
};

/// Solves R^dagger A R = E_p (+) (-E_q) as R = U |Lambda|^{-1/2}.
/// Positive columns come first (descending eigenvalue), then negative ones
/// (descending |eigenvalue|).
template <typename Real>
PseudoNormalizer<Real> pseudo_normalizer(const HermitianMatrix<Real>& a,
                                         Real degeneracy_tol = Real(kDefaultDegeneracyTol)) {
  const auto split = signature_split(a, degeneracy_tol);
  const auto& eig = split.decomposition;
  const Index n = a.dim();
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  for (Index k = 0; k < split.positive; ++k) order.push_back(k);
  for (Index k = n - 1; k >= split.positive; --k) order.push_back(k);

  PseudoNormalizer<Real> out;
  out.r.resize(n, n);
  out.signs.reserve(static_cast<std::size_t>(n));
  for (Index c = 0; c < n; ++c) {
    const Index k = order[static_cast<std::size_t>(c)];
    out.r.col(c) = eig.vectors.col(k) / std::sqrt(std::abs(eig.values(k)));
    out.signs.push_back(eig.values(k) > 0 ? 1 : -1);
  }
  return out;
}

}  // namespace graded
