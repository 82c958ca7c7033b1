#include "doctest.h"

#include <numbers>
#include <numeric>

#include "graded/orthogonalizer.hpp"
#include "support/oracles.hpp"
#include "support/random_problems.hpp"

using namespace graded;
using namespace graded::testing;
using cd = std::complex<double>;
using Levels = std::vector<std::vector<std::string>>;

namespace {

HermitianMatrix<double> herm(const CMatrix& m) { return hermitize(m).matrix; }

// Euclidean plane with e1 = (1, 0), e2 = (1, 1).
HermitianMatrix<double> skew_plane() {
  CMatrix g(2, 2);
  g << 1, 1, 1, 2;
  return herm(g);
}

}  // namespace

TEST_CASE("compute_D") {
  SUBCASE("identity Gram gives vanishing overlaps") {
    const GradedIndex index(Levels{{"a", "b"}, {"c", "d"}});
    const auto g = HermitianMatrix<double>::identity(4);
    const auto table = orthonormalize_graded(index, g);
    CHECK(max_abs(compute_D(g, table, index.flat_range(1), 0)) == 0.0);
  }
  SUBCASE("skew plane") {
    const GradedIndex index(Levels{{"a"}, {"b"}});
    auto table = orthonormalize_graded(index, skew_plane());
    table.levels.resize(1);
    const auto d = compute_D(skew_plane(), table, index.flat_range(1), 0);
    CHECK(std::abs(d(0, 0) - 1.0) <= 1e-15);
    CHECK_THROWS_AS(compute_D(skew_plane(), table, index.flat_range(1), 1), LevelNotReady);
  }
  SUBCASE("Fourier modes under the uniform weight") {
    const auto source = fourier_gram(1, WeightFunction<double>::uniform());
    auto table = orthonormalize_graded(source);
    table.levels.resize(1);
    CHECK(max_abs(compute_D(source, table, 1, 0)) == 0.0);
    CHECK_THROWS_AS(compute_D(source, table, 1, 1), LevelNotReady);
  }
}

TEST_CASE("compute_B and compute_Q") {
  CHECK(compute_B(HermitianMatrix<double>::identity(2), {}).matrix() == CMatrix::Identity(2, 2));
  CMatrix two(1, 1), one(1, 1);
  two << 2;
  one << 1;
  CHECK(compute_B(herm(two), {herm(one)}).matrix() == one);

  CMatrix four(1, 1);
  four << 4;
  CHECK(std::abs(compute_Q(herm(four))(0, 0) - 0.5) < 1e-16);
  CHECK(compute_Q(HermitianMatrix<double>::identity(3)).matrix() == CMatrix::Identity(3, 3));
  CMatrix b(2, 2);
  b << 1, 0.5, 0.5, 1;
  const auto q = compute_Q(herm(b));
  CHECK(std::abs(q(0, 0) - 1.115355) < 1e-6);
  CHECK(std::abs(q(0, 1) + 0.298858) < 1e-6);

  CMatrix singular(2, 2);
  singular << 1, 1, 1, 1;
  try {
    compute_Q(herm(singular), 1e-10, 3);
    FAIL("expected LinearlyDependentInput");
  } catch (const LinearlyDependentInput& e) {
    CHECK(e.level() == 3);
  }
  CMatrix indefinite(2, 2);
  indefinite << 1, 0, 0, -1;
  CHECK_THROWS_AS(compute_Q(herm(indefinite)), DegenerateMetric);
}

TEST_CASE("compute_P") {
  CHECK(max_abs(compute_P(CMatrix(CMatrix::Zero(2, 3)), CMatrix(CMatrix::Identity(3, 3)))) == 0.0);
  CMatrix d(1, 1), q(1, 1);
  d << 1;
  q << 1;
  CHECK(compute_P(d, q)(0, 0) == cd(-1));
  CHECK(compute_P(d, q, {-1})(0, 0) == cd(1));
  CHECK_THROWS_AS(compute_P(CMatrix(2, 3), CMatrix(2, 2)), ShapeMismatch);
}

TEST_CASE("orthonormalize_graded worked examples") {
  SUBCASE("identity Gram is left alone") {
    const GradedIndex index(Levels{{"a", "b"}, {"c"}, {"d", "e"}});
    const auto table = orthonormalize_graded(index, HermitianMatrix<double>::identity(5));
    CHECK(table.matrix() == CMatrix::Identity(5, 5));
  }
  SUBCASE("skew plane matches Gram-Schmidt by hand") {
    const GradedIndex index(Levels{{"a"}, {"b"}});
    const auto table = orthonormalize_graded(index, skew_plane());
    CMatrix expected(2, 2);
    expected << 1, -1, 0, 1;
    CHECK(max_abs(CMatrix(table.matrix() - expected)) <= 1e-15);
    CHECK(std::abs(table.levels[1].projections[0].second(0, 0) + 1.0) <= 1e-15);
  }
  SUBCASE("uniform Fourier modes are only rescaled") {
    const auto table = orthonormalize_graded(fourier_gram(1, WeightFunction<double>::uniform()));
    const double s = 1.0 / std::sqrt(2 * std::numbers::pi);
    CHECK(max_abs(CMatrix(table.matrix() - s * CMatrix::Identity(3, 3))) <= 1e-15);
  }
  SUBCASE("level 0 of a Fourier system is a real positive constant") {
    std::vector<double> w(21);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = 1.5 + std::sin(2 * std::numbers::pi * j / 21.0) + 0.3 * std::cos(4 * std::numbers::pi * j / 21.0);
    const auto table = orthonormalize_graded(fourier_gram(5, WeightFunction<double>::sampled(w)));
    const auto& f0 = table.levels[0].coefficients;
    CHECK(f0(0, 0).imag() == 0.0);
    CHECK(f0(0, 0).real() > 0.0);
    CHECK(max_abs(f0.bottomRows(f0.rows() - 1)) == 0.0);
  }
  SUBCASE("failures name the level") {
    CMatrix g(3, 3);
    g << 1, 0, 1, 0, 1, 0, 1, 0, 1;  // e3 repeats e1
    try {
      orthonormalize_graded(GradedIndex(Levels{{"a"}, {"b", "c"}}), herm(g));
      FAIL("expected LinearlyDependentInput");
    } catch (const LinearlyDependentInput& e) {
      CHECK(e.level() == 1);
    }
    CMatrix minkowski(2, 2);
    minkowski << 1, 0, 0, -1;
    CHECK_THROWS_AS(orthonormalize_graded(GradedIndex(Levels{{"a"}, {"b"}}), herm(minkowski)), DegenerateMetric);
    CHECK_THROWS_AS(orthonormalize_graded(GradedIndex(Levels{{"a"}}), HermitianMatrix<double>::identity(2)),
                    DimensionMismatch);
  }
}

TEST_CASE("reference methods") {
  SUBCASE("identity Gram") {
    const GradedIndex index(Levels{{"a", "b"}, {"c"}});
    CHECK(gram_schmidt_reference(index, HermitianMatrix<double>::identity(3)).matrix() == CMatrix::Identity(3, 3));
    CHECK(gram_method_reference(index, HermitianMatrix<double>::identity(3)).matrix() == CMatrix::Identity(3, 3));
  }
  SUBCASE("skew plane") {
    const auto table = gram_schmidt_reference(GradedIndex(Levels{{"a"}, {"b"}}), skew_plane());
    CMatrix expected(2, 2);
    expected << 1, -1, 0, 1;
    CHECK(max_abs(CMatrix(table.matrix() - expected)) <= 1e-15);
  }
  SUBCASE("Gram method is the inverse square root") {
    CMatrix g(2, 2);
    g << 1, 0.5, 0.5, 1;
    const auto table = gram_method_reference(GradedIndex(Levels{{"a"}, {"b"}}), herm(g));
    CHECK(table.levels.size() == 1);
    CHECK(std::abs(table.matrix()(0, 0) - 1.115355) < 1e-6);
    CHECK(std::abs(table.matrix()(1, 0) + 0.298858) < 1e-6);
  }
  SUBCASE("dependent input") {
    CMatrix g(2, 2);
    g << 1, 1, 1, 1;
    CHECK_THROWS_AS(gram_schmidt_reference(GradedIndex(Levels{{"a"}, {"b"}}), herm(g)), LinearlyDependentInput);
    CHECK_THROWS_AS(gram_method_reference(GradedIndex(Levels{{"a"}, {"b"}}), herm(g)), LinearlyDependentInput);
  }
}

TEST_CASE("compute_h_gram") {
  SUBCASE("level 0 is the raw block") {
    Rng rng(31);
    const GradedIndex index(Levels{{"a", "b"}, {"c"}});
    const auto g = random_spd(3, 10.0, rng);
    const auto source = build_explicit(index, g);
    const CoefficientTable<double> empty{index, {}, {}};
    CHECK(compute_h_gram(source, empty, 0).matrix() == g.block({0, 1}).matrix());
  }
  SUBCASE("skew plane") {
    const auto source = build_explicit(GradedIndex(Levels{{"a"}, {"b"}}), skew_plane());
    const auto table = orthonormalize_graded(source);
    CHECK(std::abs(compute_h_gram(source, table, 1)(0, 0) - 1.0) <= 1e-15);
    const CoefficientTable<double> empty{source.index(), {}, {}};
    CHECK_THROWS_AS(compute_h_gram(source, empty, 1), LevelNotReady);
  }
  SUBCASE("identity Gram") {
    const auto source = build_explicit(GradedIndex(Levels{{"a"}, {"b", "c"}}), HermitianMatrix<double>::identity(3));
    const auto table = orthonormalize_graded(source);
    CHECK(compute_h_gram(source, table, 1).matrix() == CMatrix::Identity(2, 2));
  }
}

TEST_CASE("verify") {
  Rng rng(32);
  const GradedIndex index(Levels{{"a", "b"}, {"c"}, {"d", "e", "f"}});
  const auto g = random_spd(6, 100.0, rng);
  auto table = orthonormalize_graded(index, g);
  const auto report = verify(g, table);
  CHECK(report.passed);
  CHECK(report.grading_ok);
  CHECK(report.max_residual <= 1e-10);
  CHECK(report.condition_numbers.size() == 3);
  CHECK(verify(HermitianMatrix<double>::identity(6), orthonormalize_graded(index, HermitianMatrix<double>::identity(6)))
            .max_residual == 0.0);

  table.levels[1].coefficients(0, 0) += 0.1;
  const auto corrupted = verify(g, table);
  CHECK_FALSE(corrupted.passed);
  CHECK(corrupted.max_residual >= 0.01);

  auto leaky = orthonormalize_graded(index, g);
  leaky.levels[0].coefficients(5, 0) = 1e-300;
  CHECK_FALSE(verify(g, leaky).grading_ok);
}

TEST_CASE("random graded problems: orthonormality, B oracle, structure") {
  Rng rng(33);
  double worst = 0;
  double worst_b = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto index = random_grading(2 + trial % 7, 1, 5, 40, rng);
    const auto g = random_spd(index.total(), 1e4, rng);
    const auto table = orthonormalize_graded(index, g);
    const auto report = verify(g, table);
    worst = std::max(worst, report.max_residual);
    CHECK(report.grading_ok);
    for (std::size_t k = 0; k < index.level_count(); ++k) {
      const auto& level = table.levels[k];
      // Q^k is Hermitian positive definite and sits on the level's own rows.
      CHECK(eigh(hermitize(level.q).matrix).values.minCoeff() > 0.0);
      CHECK(level.coefficients.middleRows(index.offset(k), index.size(k)) == level.q);
      CoefficientTable<double> lower = table;
      lower.levels.resize(k);
      const auto projected = detail::project_level(g, lower, index.flat_range(k));
      const auto oracle = compute_h_gram(g, lower, index.flat_range(k));
      worst_b = std::max(worst_b, max_abs(CMatrix(projected.b.matrix() - oracle.matrix())));
    }
  }
  MESSAGE("worst orthonormality residual " << worst << ", worst B-oracle gap " << worst_b);
  CHECK(worst <= 1e-9);
  CHECK(worst_b <= 1e-10);
}

TEST_CASE("degenerations to the classical methods") {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial % 12;
    const auto g = random_spd(n, 1e4, rng);
    const auto singletons = singleton_grading(n);
    const auto graded_table = orthonormalize_graded(singletons, g);
    const auto gs = gram_schmidt_reference(singletons, g);
    CHECK(max_abs(CMatrix(graded_table.matrix() - gs.matrix())) <= 1e-10);

    const auto one_level = single_level(n);
    const auto table = orthonormalize_graded(one_level, g);
    CHECK(max_abs(CMatrix(table.levels[0].q - inv_sqrt(g).matrix())) <= 1e-12);
  }
  SUBCASE("methods genuinely differ on multi-element levels") {
    CMatrix m(4, 4);
    m << 2, 0.5, 0.3, 0.1, 0.5, 1.5, 0.2, 0.4, 0.3, 0.2, 1.8, 0.6, 0.1, 0.4, 0.6, 1.2;
    const GradedIndex index(Levels{{"a", "b"}, {"c", "d"}});
    const auto g = herm(m);
    const auto graded_table = orthonormalize_graded(index, g);
    CHECK(max_abs(CMatrix(graded_table.matrix() - gram_schmidt_reference(index, g).matrix())) > 1e-3);
    CHECK(max_abs(CMatrix(graded_table.matrix() - gram_method_reference(index, g).matrix())) > 1e-3);
  }
}

TEST_CASE("within-level permutation equivariance") {
  Rng rng(35);
  const GradedIndex index(Levels{{"a", "b"}, {"c", "d", "e"}, {"f", "g"}});
  const auto g = random_spd(7, 50.0, rng);
  const std::vector<Index> perm{0, 1, 4, 2, 3, 5, 6};  // new position i holds old element perm[i]
  const CMatrix p = permutation_matrix(perm);
  const auto permuted_gram = herm(CMatrix(p * g.matrix() * p.transpose()));
  const GradedIndex permuted_index(Levels{{"a", "b"}, {"e", "c", "d"}, {"f", "g"}});
  const CMatrix base = orthonormalize_graded(index, g).matrix();
  const CMatrix moved = orthonormalize_graded(permuted_index, permuted_gram).matrix();
  // Rows and columns of the permuted run, mapped back.
  CHECK(max_abs(CMatrix(p.transpose() * moved * p - base)) <= 1e-12);
}

TEST_CASE("Fourier conjugate symmetry") {
  std::vector<double> w(64);
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = 2.0 + std::cos(2 * std::numbers::pi * j / 64.0);
  const int max_harmonic = 8;
  const auto table = orthonormalize_graded(fourier_gram(max_harmonic, WeightFunction<double>::sampled(w)));
  auto flat = [](int m) -> Index { return m == 0 ? 0 : m > 0 ? 2 * m - 1 : -2 * m; };
  double worst = 0;
  for (int k = 1; k <= max_harmonic; ++k) {
    const auto& c = table.levels[static_cast<std::size_t>(k)].coefficients;
    for (int m = -max_harmonic; m <= max_harmonic; ++m)
      worst = std::max(worst, std::abs(c(flat(m), 0) - std::conj(c(flat(-m), 1))));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("monomials on [-1, 1] become normalized Legendre polynomials") {
  MonomialBasisSpec<double> spec;
  spec.dimension = 1;
  spec.max_degree = 6;
  spec.domain = {{-1.0, 1.0}};
  spec.quadrature_order = 7;
  const auto table = orthonormalize_graded(monomial_gram(spec));
  for (int k = 0; k <= 6; ++k) {
    const auto legendre = legendre_coefficients(k);
    const double scale = std::sqrt((2.0 * k + 1.0) / 2.0);
    const auto& c = table.levels[static_cast<std::size_t>(k)].coefficients;
    for (int i = 0; i <= 6; ++i) {
      const double expected = i < static_cast<int>(legendre.size()) ? scale * legendre[static_cast<std::size_t>(i)] : 0.0;
      CHECK(std::abs(c(i, 0) - expected) <= 1e-8);
    }
  }
}
