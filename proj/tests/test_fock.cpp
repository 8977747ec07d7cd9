#include <gtest/gtest.h>

#include <random>

#include "motzkin/fock.hpp"
#include "motzkin/jones_wenzl.hpp"

using namespace motzkin;

namespace {

MotzkinPair odd_pair() { return build_example_pair(PairFamily::I, 3, 0, Rational(1, 3)); }
MotzkinPair even_pair() { return build_example_pair(PairFamily::III, 4, 1, Rational(1, 4)); }

void expect_pass(const Report& r) {
  for (const auto& c : r.checks)
    EXPECT_TRUE(c.passed) << r.title << ": " << c.name << " residual " << c.residual << " " << c.detail;
}

}  // namespace

TEST(Subproduct, DimensionsAndGaps) {
  auto odd = build_subproduct(odd_pair(), 5);
  auto even = build_subproduct(even_pair(), 5);
  EXPECT_EQ(odd.dims, (std::vector<int>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(even.dims, (std::vector<int>{1, 3, 8, 21, 55, 144}));
  for (const auto* sd : {&odd, &even})
    for (int k = 1; k <= 5; ++k) {
      EXPECT_GE(sd->gap[k], 1e3) << k;
      EXPECT_LT(sd->idempotency[k], 1e-10) << k;
      const auto& B = sd->B[k];
      EXPECT_LT((B.adjoint() * B - DenseMatrix::Identity(B.cols(), B.cols())).norm(), 1e-12);
    }
}

TEST(Subproduct, DenseRecursionMatchesReducedBases) {
  for (const auto& p : {odd_pair(), even_pair()}) {
    auto sd = build_subproduct(p, 4);
    for (int k = 0; k <= 4; ++k) {
      auto dense = subproduct_projection(p, k);
      const auto& B = sd.B[k];
      EXPECT_LT((dense.G - B * B.adjoint()).norm(), 1e-10) << "n=" << p.n << " k=" << k;
      EXPECT_LT(dense.idempotency, 1e-10);
      EXPECT_LT((dense.G - dense.G.adjoint()).norm(), 1e-10);
      Eigen::SelfAdjointEigenSolver<DenseMatrix> es(dense.G);
      int rank = 0;
      for (double e : es.eigenvalues()) rank += e > 1e-8;
      EXPECT_EQ(rank, dim_subproduct(p.n, k));
    }
  }
}

TEST(Subproduct, FirstLevels) {
  auto p = even_pair();
  auto g1 = subproduct_projection(p, 1).G;
  DenseVector b = Eigen::Map<const DenseVector>(p.b.data(), p.n);
  EXPECT_LT((g1 * b).norm(), 1e-14);
  auto sd = build_subproduct(p, 2);
  EXPECT_LT((sd.B[1].adjoint() * b).norm(), 1e-12);
  EXPECT_EQ(sd.B[0].rows(), 1);
  // G_2 (I-P)^{(x)2} v_A = 0
  auto g2 = subproduct_projection(p, 2).G;
  DenseVector va = temperley_lieb_vector(p);
  EXPECT_LT((g2 * detail::kron(g1, g1) * va).norm(), 1e-12);
}

TEST(Subproduct, CoassociativityAndAbsorption) {
  for (const auto& p : {odd_pair(), even_pair()}) {
    auto sd = build_subproduct(p, 5);
    for (int k = 2; k <= 5; ++k) EXPECT_LT(coassociativity_residual(sd, k), 1e-10) << k;
  }
}

TEST(Subproduct, AbstractProjectionAgreesThroughEvaluation) {
  // the abstract g_k evaluated on diagrams is the dense G_k for the example pairs
  for (const auto& p : {odd_pair(), even_pair()}) {
    JWCache cache(p.lambda);
    for (int k = 1; k <= 3; ++k)
      EXPECT_LT((DenseMatrix(element_matrix(p, cache.g(k))) - subproduct_projection(p, k).G).norm(), 1e-10) << k;
  }
}

TEST(Subproduct, Errors) {
  EXPECT_THROW(build_subproduct(even_pair(), 0), DomainError);
  EXPECT_THROW(build_subproduct(even_pair(), 7), ResourceLimitError);
  EXPECT_THROW(subproduct_projection(even_pair(), 6), ResourceLimitError);
}

TEST(Creation, BlocksCompressLeftTensoring) {
  for (const auto& p : {odd_pair(), even_pair()}) {
    auto ops = creation_operators(p, 4);
    const int n = p.n;
    for (std::size_t g = 0; g < ops.gens.size(); ++g)
      for (int m = 0; m < 4; ++m) {
        const auto& Bm = ops.data.B[m];
        const auto& Bn = ops.data.B[m + 1];
        DenseMatrix ut(n * Bm.rows(), Bm.cols());
        for (int x = 0; x < n; ++x) ut.middleRows(x * Bm.rows(), Bm.rows()) = ops.gens[g].u(x) * Bm;
        EXPECT_LT((Bn * ops.S[g][m] - Bn * Bn.adjoint() * ut).norm(), 1e-10);
      }
  }
}

TEST(Creation, GeneratorLayout) {
  auto ops = creation_operators(even_pair(), 3);
  ASSERT_EQ(ops.gens.size(), 3u);
  EXPECT_EQ(ops.gens[0].label, "w1");
  EXPECT_EQ(ops.gens[1].label, "v2");
  EXPECT_EQ(ops.gens[2].label, "v3");
  // w_1 = (<1,1> v_1 + <2,1> v_4)/sqrt 2 = (v_4 - v_1)/sqrt 2
  EXPECT_NEAR(std::abs(ops.gens[0].u(0) + 1 / std::sqrt(2.0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(ops.gens[0].u(3) - 1 / std::sqrt(2.0)), 0, 1e-15);
  auto odd = creation_operators(odd_pair(), 3);
  EXPECT_EQ(odd.r, 0);
  EXPECT_EQ(odd.interior, (std::vector<int>{0, 2}));
  auto bad = even_pair();
  bad.b = {Complex(0.6), 0, 0, Complex(0.8)};
  EXPECT_THROW(creation_operators(bad, 2), ParameterError);
}

TEST(Creation, SumAndGrading) {
  auto ops = creation_operators(even_pair(), 4);
  DenseMatrix sum = DenseMatrix::Zero(ops.total_dim(), ops.total_dim());
  for (std::size_t g = 0; g < ops.gens.size(); ++g) sum += ops.full(g) * ops.full(g).adjoint();
  DenseMatrix target = DenseMatrix::Identity(ops.total_dim(), ops.total_dim()) - ops.level_projection(0);
  EXPECT_LT((sum - target).norm(), 1e-10);
  for (std::size_t g = 0; g < ops.gens.size(); ++g) {
    DenseMatrix Sg = ops.full(g);
    for (int m = 0; m < 4; ++m)
      EXPECT_LT((ops.level_projection(m + 1) * Sg - Sg * ops.level_projection(m)).norm(), 1e-12);
    EXPECT_LT((Sg.adjoint() * ops.level_projection(0)).norm(), 1e-15);
  }
}

TEST(Toeplitz, EvenPairAtFive) {
  auto ops = creation_operators(even_pair(), 5);
  auto rep = toeplitz_residuals(ops, 1e-9);
  expect_pass(rep);
  EXPECT_LT(rep.max_residual(), 1e-9);
}

TEST(Toeplitz, OddPairAtFive) {
  auto ops = creation_operators(odd_pair(), 5);
  auto rep = toeplitz_residuals(ops, 1e-9);
  expect_pass(rep);
  bool saw_vw = false;
  for (const auto& c : rep.checks) saw_vw = saw_vw || c.name.rfind("v-w", 0) == 0;
  EXPECT_FALSE(saw_vw);
}

TEST(Toeplitz, LargerSupport) {
  auto p = build_example_pair(PairFamily::III, 5, 2, Rational(1, 5));
  auto ops = creation_operators(p, 4);
  EXPECT_EQ(ops.r, 2);
  expect_pass(toeplitz_residuals(ops, 1e-9));
  auto q = build_example_pair(PairFamily::III, 6, 2, Rational(1, 7));
  expect_pass(toeplitz_residuals(creation_operators(q, 3), 1e-9));
}

TEST(Toeplitz, SingleWReduction) {
  // r = 1: S_1^* S_1 = 1 - phi lambda S_1 S_1^* on H_m
  auto p = even_pair();
  auto ops = creation_operators(p, 5);
  const int g = ops.w_generator(1);
  for (int m = 1; m < 5; ++m) {
    DenseMatrix lhs = ops.up_down(g, g, m);
    DenseMatrix rhs = DenseMatrix::Identity(ops.dim(m), ops.dim(m)) -
                      phi(m, p.lambda).get_d() * 0.25 * ops.down_up(g, g, m);
    EXPECT_LT((lhs - rhs).norm(), 1e-10) << m;
  }
}

TEST(Toeplitz, CrossTermOrderForWiderSupport) {
  // with two or more w-generators the cross terms pair S_{w_s'} with S_{w_s}^*
  auto p = build_example_pair(PairFamily::III, 5, 2, Rational(1, 5));
  auto ops = creation_operators(p, 3);
  const double f = phi(2, p.lambda).get_d() * 0.2;
  const int g1 = ops.w_generator(1), g2 = ops.w_generator(2);
  DenseMatrix lhs = ops.up_down(g2, g1, 2);
  Complex c = fourier_pairing(1 - 2, 1, 2);
  EXPECT_LT((lhs + f * c * ops.down_up(g2, g1, 2)).norm(), 1e-12);
  EXPECT_GT((lhs + f * c * ops.down_up(g1, g2, 2)).norm(), 0.1);
}

TEST(Toeplitz, WrongPhiFails) {
  auto ops = creation_operators(even_pair(), 4);
  double worst = 0;
  for (const auto& t : quadratic_relations(ops, 2, phi(3, Rational(1, 4)).get_d())) worst = std::max(worst, t.residual);
  EXPECT_GT(worst, 1e-3);
}

TEST(MatrixUnits, SquaresOfDimensions) {
  auto ops = creation_operators(even_pair(), 4);
  const int expected[] = {1, 9, 64, 441};
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(matrix_unit_dimension(ops, k), expected[k]) << k;
  auto odd = creation_operators(odd_pair(), 4);
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(matrix_unit_dimension(odd, k), (k + 1) * (k + 1));
}

TEST(Gauge, AverageProperties) {
  auto ops = creation_operators(even_pair(), 3);
  const int D = ops.total_dim();
  DenseMatrix S1 = ops.full(0);
  EXPECT_EQ(gauge_average(ops, S1).norm(), 0.0);
  DenseMatrix SS = S1 * S1.adjoint();
  EXPECT_LT((gauge_average(ops, SS) - SS).norm(), 1e-15);
  DenseMatrix I = DenseMatrix::Identity(D, D);
  EXPECT_EQ(gauge_average(ops, I), I);

  // against an exact discrete average over the circle: N+1 angles suffice
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  DenseMatrix x(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) x(i, j) = Complex(nd(rng), nd(rng));
  const int K = ops.N() + 1;
  DenseMatrix avg = DenseMatrix::Zero(D, D);
  for (int s = 0; s < K; ++s) {
    const double theta = 2 * std::numbers::pi * s / K;
    DenseVector phase(D);
    for (int m = 0; m <= ops.N(); ++m)
      phase.segment(ops.offset(m), ops.dim(m)).setConstant(std::polar(1.0, theta * m));
    avg += phase.asDiagonal() * x * phase.conjugate().asDiagonal();
  }
  avg /= static_cast<double>(K);
  DenseMatrix e = gauge_average(ops, x);
  EXPECT_LT((e - avg).norm(), 1e-10);
  EXPECT_LT((gauge_average(ops, e) - e).norm(), 1e-15);
  // positivity on a sample
  DenseMatrix pos = x * x.adjoint();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(gauge_average(ops, pos));
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);
  EXPECT_THROW(gauge_average(ops, DenseMatrix::Identity(2, 2)), DimensionError);
}

TEST(Reverse, CoefficientsAndResiduals) {
  EXPECT_EQ(reverse_identity(creation_operators(odd_pair(), 5), 2).coefficient, Rational(1, 2));
  EXPECT_EQ(reverse_identity(creation_operators(even_pair(), 5), 2).coefficient, Rational(2, 3));
  for (const auto& p : {odd_pair(), even_pair()}) {
    auto ops = creation_operators(p, 5);
    for (int k = 2; k <= 5; ++k) {
      auto r = reverse_identity(ops, k);
      EXPECT_LT(r.residual, 1e-10) << k;
      EXPECT_LT(r.closed_form_difference, 1e-10) << k;
    }
  }
  EXPECT_THROW(reverse_identity(creation_operators(odd_pair(), 3), 1), DomainError);
}

TEST(Ideal, EvenPair) {
  auto p = even_pair();
  auto ops = creation_operators(p, 3);
  auto ideal = ideal_generator(ops);
  EXPECT_LT(ideal.projection_residual, 1e-10);
  EXPECT_LT(ideal.complement_residual, 1e-10);
  EXPECT_LT(ideal.orthogonality, 1e-10);
  EXPECT_EQ(ideal.complement_dim, 8);
  // -a_1 w_1 (x) w_1 + a_2 v_2 (x) v_3 + a_3 v_3 (x) v_2
  const int n = 4;
  DenseVector w = ops.gens[0].u;
  DenseVector expected = DenseVector::Zero(n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) expected(x * n + y) = -p.a[0] * w(x) * w(y);
  expected(1 * n + 2) += p.a[1];
  expected(2 * n + 1) += p.a[2];
  EXPECT_LT((ideal.vector - expected).norm(), 1e-14);
}

TEST(Ideal, OddPairAndWiderSupport) {
  auto p = odd_pair();
  auto ideal = ideal_generator(creation_operators(p, 2));
  DenseVector expected = DenseVector::Zero(9);
  expected(0 * 3 + 2) = p.a[0];
  expected(2 * 3 + 0) = p.a[2];
  EXPECT_LT((ideal.vector - expected).norm(), 1e-14);
  EXPECT_LT(ideal.complement_residual, 1e-10);
  EXPECT_EQ(ideal.complement_dim, 3);

  auto q = build_example_pair(PairFamily::III, 6, 2, Rational(1, 7));
  auto wide = ideal_generator(creation_operators(q, 2));
  EXPECT_LT(wide.projection_residual, 1e-10);
  EXPECT_LT(wide.orthogonality, 1e-10);
  EXPECT_EQ(wide.complement_dim, 24);
}

TEST(CuntzPimsner, DecreasingAtQuarter) {
  auto ops = creation_operators(even_pair(), 6);
  auto rows = cuntz_pimsner_residuals(ops, 4);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].residual, rows[i - 1].residual) << rows[i].m;
  for (const auto& row : rows) EXPECT_NEAR(row.residual, row.defect * row.factor, 1e-10);
}

TEST(CuntzPimsner, DefectAtThird) {
  auto ops = creation_operators(odd_pair(), 6);
  for (const auto& row : cuntz_pimsner_residuals(ops, 5)) {
    EXPECT_NEAR(row.defect, 3.0 / (row.m + 1), 1e-12);
    EXPECT_NEAR(row.residual, 3.0 / (row.m + 1) * row.factor, 1e-10);
    EXPECT_GT(row.factor, 0);
  }
}
