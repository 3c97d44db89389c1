#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "ttortho/errors.hpp"
#include "ttortho/generators.hpp"
#include "ttortho/metrics.hpp"
#include "ttortho/ortho.hpp"

using namespace ttortho;

TEST(MultiIndexMap, PsiExamples) {
  const MultiIndexMap map({15, 15, 15});
  const std::vector<std::size_t> origin{0, 0, 0};
  EXPECT_EQ(map.psi(origin), 0u);
  const std::vector<std::size_t> idx{2, 1, 0};
  EXPECT_EQ(map.psi(idx), 17u);
  EXPECT_EQ(map.strides(), (std::vector<std::size_t>{1, 15, 225}));
  EXPECT_EQ(map.size(), 3375u);
}

TEST(MultiIndexMap, ExhaustiveRoundTrip) {
  const MultiIndexMap map({4, 4, 4});
  for (std::size_t i = 0; i < map.size(); ++i) EXPECT_EQ(map.psi(map.phi(i)), i);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c) {
        const std::vector<std::size_t> idx{a, b, c};
        EXPECT_EQ(map.phi(map.psi(idx)), idx);
      }
}

TEST(MultiIndexMap, OutOfRange) {
  const MultiIndexMap map({3, 2});
  const std::vector<std::size_t> bad{3, 0};
  const std::vector<std::size_t> wrong_order{0};
  EXPECT_THROW(map.psi(bad), IndexError);
  EXPECT_THROW(map.psi(wrong_order), IndexError);
  EXPECT_THROW(map.phi(6), IndexError);
  EXPECT_THROW(canonical_tt(map, 6), IndexError);
}

TEST(CanonicalTT, OrthonormalAndUnit) {
  const MultiIndexMap map({4, 4, 4});
  const std::vector<TTVector> basis = canonical_basis(map, 20);
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = 0; j < 20; ++j)
      EXPECT_EQ(inner_product(basis[i], basis[j]), i == j ? 1.0 : 0.0);
    const std::vector<double> v = densify(basis[i]);
    for (std::size_t p = 0; p < v.size(); ++p) EXPECT_EQ(v[p], p == i ? 1.0 : 0.0);
    EXPECT_EQ(storage_count(basis[i]), 12u);
    EXPECT_EQ(basis[i].max_rank(), 1u);
  }
}

TEST(OnesTT, Examples) {
  const TTVector ones = ones_tt(3, 4);
  const std::vector<std::size_t> idx{1, 3, 2};
  EXPECT_EQ(element(ones, idx), 1.0);
  EXPECT_NEAR(norm(ones), 8.0, 1e-15);
  const MultiIndexMap map({4, 4, 4});
  for (std::size_t i = 0; i < map.size(); ++i) EXPECT_EQ(inner_product(ones, canonical_tt(map, i)), 1.0);
}

TEST(LaplacianTT, OneDimensional) {
  const std::vector<double> a = densify(laplacian_tt(1, 4));
  const std::vector<double> expect{2, -1, 0, 0, -1, 2, -1, 0, 0, -1, 2, -1, 0, 0, -1, 2};
  EXPECT_EQ(a, expect);
}

TEST(LaplacianTT, KroneckerSumAndSymmetry) {
  for (std::size_t d = 1; d <= 3; ++d)
    for (std::size_t n = 2; n <= 6; ++n) {
      const std::vector<double> a = densify(laplacian_tt(d, n));
      const DenseMatrix expect = test::kronecker_laplacian(d, n);
      const std::size_t total = expect.rows();
      for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = 0; j < total; ++j) {
          EXPECT_EQ(a[i * total + j], expect(i, j)) << d << " " << n;
          EXPECT_EQ(a[i * total + j], a[j * total + i]);
        }
    }
}

TEST(LaplacianTT, Ranks) {
  EXPECT_EQ(laplacian_tt(6, 15).ranks(), (std::vector<std::size_t>{1, 2, 2, 2, 2, 2, 1}));
  EXPECT_EQ(laplacian_tt(1, 5).ranks(), (std::vector<std::size_t>{1, 1}));
}

TEST(KrylovSet, FirstVectorIsNormalizedOnes) {
  const std::vector<TTVector> a = krylov_set({3, 15, 2});
  const std::vector<std::size_t> idx{4, 7, 11};
  EXPECT_NEAR(element(a[0], idx), 1.0 / std::sqrt(3375.0), 1e-16);
  EXPECT_NEAR(element(a[0], idx), 0.0172132, 1e-7);
}

TEST(KrylovSet, RankOneUnitNormAtOrderSix) {
  const std::vector<TTVector> a = krylov_set({6, 15, 35});
  ASSERT_EQ(a.size(), 35u);
  for (const TTVector& x : a) {
    EXPECT_EQ(x.ranks(), (std::vector<std::size_t>(7, 1)));
    EXPECT_NEAR(norm(x), 1.0, 1e-13);
  }
}

TEST(KrylovSet, ConditionNumberNondecreasing) {
  const std::vector<TTVector> a = krylov_set({3, 15, 20});
  const std::vector<Conditioning> c = condition_series(a);
  for (std::size_t k = 1; k < c.size(); ++k) EXPECT_GE(c[k].kappa, c[k - 1].kappa) << k;
  EXPECT_GT(c.back().kappa, 1e10);
}

TEST(KrylovSet, FollowsTheOperatorDirection) {
  // a_{j+1} is the best rank-1 approximation of -Laplacian a_j, so it correlates with it.
  const std::vector<TTVector> a = krylov_set({3, 6, 5});
  const TTMatrix lap = laplacian_tt(3, 6);
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    const TTVector x = scale(apply_operator(lap, a[j]), -1.0);
    EXPECT_GT(inner_product(x, a[j + 1]), 0.0);
  }
}

TEST(KrylovSet, Deterministic) {
  EXPECT_EQ(krylov_set({3, 7, 6}), krylov_set({3, 7, 6}));
}

TEST(KrylovSet, InvalidParameters) {
  EXPECT_THROW(krylov_set({3, 15, 0}), std::invalid_argument);
  EXPECT_THROW(krylov_set({0, 15, 3}), std::invalid_argument);
}

TEST(KrylovSet, SignFlipDoesNotChangeLoo) {
  const std::vector<TTVector> a = krylov_set({3, 15, 12});
  std::vector<TTVector> flipped = a;
  for (std::size_t j = 1; j < flipped.size(); j += 2) flipped[j] = scale(flipped[j], -1.0);
  OrthoOptions opts;
  opts.delta = 1e-8;
  for (Kernel kernel : kAllKernels) {
    const OrthoResult r1 = orthogonalize(kernel, a, opts);
    const OrthoResult r2 = orthogonalize(kernel, flipped, opts);
    OrthogonalityTracker t1, t2;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double l1 = t1.push(r1.q[k]);
      const double l2 = t2.push(r2.q[k]);
      EXPECT_LE(std::max(l1, l2), 30.0 * std::min(l1, l2) + 1e-13)
          << kernel_name(kernel) << " k=" << k + 1;
    }
  }
}
