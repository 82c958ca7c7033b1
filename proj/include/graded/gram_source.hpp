#pragma once

// Graded vector systems described by their Gram matrices: explicit matrices,
// exponentials e^{imx} on the circle under a positive weight, and monomials on
// a box under a tensor-product weight.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "graded/errors.hpp"
#include "graded/graded_index.hpp"
#include "graded/matrix_kernel.hpp"
#include "graded/quadrature.hpp"

namespace graded {

enum class GramKind { explicit_matrix, fourier, monomial };

/// Positive weight, either identically 1 or sampled on a grid.
template <typename Real>
struct WeightFunction {
  enum class Kind { uniform, samples };
  Kind kind = Kind::uniform;
  std::vector<Real> values;

  static WeightFunction uniform() { return {}; }
  static WeightFunction sampled(std::vector<Real> v) { return {Kind::samples, std::move(v)}; }
};

template <typename Real>
struct MonomialBasisSpec {
  int dimension = 1;
  int max_degree = 0;
  std::vector<std::pair<Real, Real>> domain;  // one [lo, hi] per axis
  /// Sampled weights are given per tensor quadrature node, axis 0 slowest.
  WeightFunction<Real> weight;
  int quadrature_order = 1;  // Gauss-Legendre points per axis
};

template <typename Real>
struct ExplicitGram {
  HermitianMatrix<Real> matrix;
};

template <typename Real>
struct FourierGram {
  int max_harmonic = 0;
  WeightFunction<Real> weight;
};

template <typename Real>
struct MonomialGram {
  MonomialBasisSpec<Real> spec;
  std::vector<std::vector<int>> exponents;  // per flat index
};

/// A graded vector system known through its Gram matrix.
template <typename Real>
class GramSource {
 public:
  using Parameters = std::variant<ExplicitGram<Real>, FourierGram<Real>, MonomialGram<Real>>;

  GramSource(GradedIndex index, Parameters params) : index_(std::move(index)), params_(std::move(params)) {}

  GramKind kind() const noexcept { return static_cast<GramKind>(params_.index()); }
  const GradedIndex& index() const noexcept { return index_; }
  const Parameters& parameters() const noexcept { return params_; }

 private:
  GradedIndex index_;
  Parameters params_;
};

template <typename Real>
GramSource<Real> build_explicit(GradedIndex index, HermitianMatrix<Real> matrix) {
  if (matrix.dim() != index.total())
    throw DimensionMismatch("Gram matrix has dimension " + std::to_string(matrix.dim()) + " but the grading has " +
                            std::to_string(index.total()) + " elements");
  return GramSource<Real>(std::move(index), ExplicitGram<Real>{std::move(matrix)});
}

/// Rejects matrices whose symmetrization moves any entry by more than 1e-12 * maxAbs.
template <typename Real>
GramSource<Real> build_explicit(GradedIndex index, const ComplexMatrix<Real>& matrix) {
  auto h = hermitize(matrix);
  const Real scale = max_abs(matrix);
  if (h.adjustment > Real(1e-12) * scale)
    throw NonHermitian(static_cast<double>(h.adjustment), static_cast<double>(scale));
  return build_explicit(std::move(index), std::move(h.matrix));
}

namespace detail {

template <typename Real>
void check_weight(const WeightFunction<Real>& w) {
  for (std::size_t i = 0; i < w.values.size(); ++i)
    if (!(w.values[i] > Real(0)) || !std::isfinite(static_cast<double>(w.values[i])))
      throw NonPositiveWeight("weight sample " + std::to_string(i) + " is not a positive finite number");
}

// Harmonic m of a flat index: level 0 holds m = 0, level k holds (+k, -k).
inline int harmonic_of(Index flat) {
  if (flat == 0) return 0;
  const int k = static_cast<int>((flat + 1) / 2);
  return flat % 2 == 1 ? k : -k;
}

inline void multi_indices(int dimension, int degree, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == dimension - 1) {
    prefix.push_back(degree);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int a = degree; a >= 0; --a) {
    prefix.push_back(a);
    multi_indices(dimension, degree - a, prefix, out);
    prefix.pop_back();
  }
}

inline std::string monomial_label(const std::vector<int>& m) {
  static const char* names3[] = {"x", "y", "z"};
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += m.size() == 1 ? std::string("x") : m.size() <= 3 ? std::string(names3[i]) : "x" + std::to_string(i + 1);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

}  // namespace detail

/// Multi-indices of total degree k in descending lexicographic order.
inline std::vector<std::vector<int>> monomial_level(int dimension, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  detail::multi_indices(dimension, degree, prefix, out);
  return out;
}

/// e_m = e^{imx}, |m| <= M, in L2([0, 2pi], rho). Level 0 = {0}, level k = {+k, -k}.
template <typename Real>
GramSource<Real> fourier_gram(int max_harmonic, WeightFunction<Real> weight) {
  if (max_harmonic < 0) throw InvalidIndex("max_harmonic must be non-negative");
  detail::check_weight(weight);
  if (weight.kind == WeightFunction<Real>::Kind::samples) {
    const auto needed = static_cast<std::size_t>(4 * max_harmonic + 1);
    if (weight.values.size() < needed)
      throw InsufficientGrid("sampling grid too coarse: weight has " + std::to_string(weight.values.size()) + " samples; harmonic " +
                             std::to_string(max_harmonic) + " needs at least " + std::to_string(needed));
  }
  std::vector<std::vector<std::string>> levels{{"0"}};
  for (int k = 1; k <= max_harmonic; ++k) levels.push_back({"+" + std::to_string(k), "-" + std::to_string(k)});
  return GramSource<Real>(GradedIndex(std::move(levels)), FourierGram<Real>{max_harmonic, std::move(weight)});
}

template <typename Real>
GramSource<Real> monomial_gram(MonomialBasisSpec<Real> spec) {
  if (spec.dimension < 1) throw InvalidDomain("monomial dimension must be at least 1");
  if (spec.max_degree < 0) throw InvalidDomain("max_degree must be non-negative");
  if (static_cast<int>(spec.domain.size()) != spec.dimension)
    throw DimensionMismatch("domain has " + std::to_string(spec.domain.size()) + " intervals for dimension " +
                            std::to_string(spec.dimension));
  for (const auto& [lo, hi] : spec.domain)
    if (!(lo < hi)) throw InvalidDomain("domain interval must satisfy lo < hi");
  if (spec.quadrature_order < spec.max_degree + 1)
    throw QuadratureOrderTooLow("quadrature order " + std::to_string(spec.quadrature_order) +
                                " is below max_degree + 1 = " + std::to_string(spec.max_degree + 1));
  detail::check_weight(spec.weight);
  if (spec.weight.kind == WeightFunction<Real>::Kind::samples) {
    std::size_t nodes = 1;
    for (int i = 0; i < spec.dimension; ++i) nodes *= static_cast<std::size_t>(spec.quadrature_order);
    if (spec.weight.values.size() != nodes)
      throw DimensionMismatch("sampled monomial weight needs one value per quadrature node (" + std::to_string(nodes) +
                              "), got " + std::to_string(spec.weight.values.size()));
  }
  std::vector<std::vector<std::string>> levels;
  std::vector<std::vector<int>> exponents;
  for (int k = 0; k <= spec.max_degree; ++k) {
    auto level = monomial_level(spec.dimension, k);
    std::vector<std::string> labels;
    for (auto& m : level) {
      labels.push_back(detail::monomial_label(m));
      exponents.push_back(std::move(m));
    }
    levels.push_back(std::move(labels));
  }
  return GramSource<Real>(GradedIndex(std::move(levels)), MonomialGram<Real>{std::move(spec), std::move(exponents)});
}

namespace detail {

template <typename Real>
HermitianMatrix<Real> assemble(const ExplicitGram<Real>& p, const GradedIndex&) {
  return p.matrix;
}

// (e_a, e_b) = int e^{i(m_a - m_b)x} rho(x) dx, trapezoid rule on the periodic grid.
template <typename Real>
HermitianMatrix<Real> assemble(const FourierGram<Real>& p, const GradedIndex& index) {
  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  const int span = 2 * p.max_harmonic;
  std::vector<Complex<Real>> moment(static_cast<std::size_t>(2 * span + 1));
  if (p.weight.kind == WeightFunction<Real>::Kind::uniform) {
    moment[static_cast<std::size_t>(span)] = two_pi;
  } else {
    const auto n = static_cast<long long>(p.weight.values.size());
    for (int d = -span; d <= span; ++d) {
      Complex<Real> sum(0);
      for (long long j = 0; j < n; ++j) {
        const long long r = ((static_cast<long long>(d) * j) % n + n) % n;
        sum += std::polar(p.weight.values[static_cast<std::size_t>(j)], two_pi * Real(r) / Real(n));
      }
      moment[static_cast<std::size_t>(d + span)] = sum * (two_pi / Real(n));
    }
  }
  const Index total = index.total();
  ComplexMatrix<Real> g(total, total);
  for (Index a = 0; a < total; ++a)
    for (Index b = 0; b < total; ++b)
      g(a, b) = moment[static_cast<std::size_t>(harmonic_of(a) - harmonic_of(b) + span)];
  return hermitize(g).matrix;
}

template <typename Real>
HermitianMatrix<Real> assemble(const MonomialGram<Real>& p, const GradedIndex& index) {
  const auto& spec = p.spec;
  const auto rule = gauss_legendre<Real>(spec.quadrature_order);
  const int n = spec.dimension;
  const int order = spec.quadrature_order;

  std::size_t nodes = 1;
  for (int i = 0; i < n; ++i) nodes *= static_cast<std::size_t>(order);

  // Tensor nodes, axis 0 slowest.
  std::vector<std::vector<Real>> points(nodes, std::vector<Real>(static_cast<std::size_t>(n)));
  std::vector<Real> weights(nodes, Real(1));
  for (std::size_t node = 0; node < nodes; ++node) {
    std::size_t rest = node;
    for (int axis = n - 1; axis >= 0; --axis) {
      const std::size_t q = rest % static_cast<std::size_t>(order);
      rest /= static_cast<std::size_t>(order);
      const auto [lo, hi] = spec.domain[static_cast<std::size_t>(axis)];
      const Real half = (hi - lo) / 2;
      points[node][static_cast<std::size_t>(axis)] = half * rule.nodes[q] + (hi + lo) / 2;
      weights[node] *= half * rule.weights[q];
    }
    if (spec.weight.kind == WeightFunction<Real>::Kind::samples) weights[node] *= spec.weight.values[node];
  }

  const Index total = index.total();
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> values(static_cast<Index>(nodes), total);
  for (std::size_t node = 0; node < nodes; ++node)
    for (Index a = 0; a < total; ++a) {
      Real v = 1;
      const auto& m = p.exponents[static_cast<std::size_t>(a)];
      for (int axis = 0; axis < n; ++axis)
        for (int e = 0; e < m[static_cast<std::size_t>(axis)]; ++e) v *= points[node][static_cast<std::size_t>(axis)];
      values(static_cast<Index>(node), a) = v;
    }

  ComplexMatrix<Real> g(total, total);
  for (Index a = 0; a < total; ++a)
    for (Index b = a; b < total; ++b) {
      Real sum = 0;
      for (std::size_t node = 0; node < nodes; ++node) {
        const auto row = static_cast<Index>(node);
        sum += weights[node] * values(row, a) * values(row, b);
      }
      g(a, b) = sum;
      g(b, a) = sum;
    }
  return hermitize(g).matrix;
}

}  // namespace detail

/// Full Gram matrix over the flat index of the source.
template <typename Real>
HermitianMatrix<Real> full_gram(const GramSource<Real>& source) {
  return std::visit([&](const auto& p) { return detail::assemble(p, source.index()); }, source.parameters());
}

}  // namespace graded
