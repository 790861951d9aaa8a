#include <cmath>

#include <gtest/gtest.h>

#include "signlasso/design.hpp"
#include "signlasso/errors.hpp"

using namespace signlasso;

namespace {

DesignGenerator generator(DesignKind kind, double rho = 0.0, double scale = 1.0, double m1 = 3.0) {
  DesignGenerator g;
  g.kind = kind;
  g.rho = rho;
  g.scale = scale;
  g.m1 = m1;
  return g;
}

}  // namespace

TEST(DesignKind, NamesRoundTrip) {
  for (DesignKind k : {DesignKind::kIidGaussian, DesignKind::kCorrelatedGaussian, DesignKind::kOrthogonalIsh}) {
    EXPECT_EQ(parse_design_kind(to_string(k)), k);
  }
  EXPECT_EQ(to_string(DesignKind::kOrthogonalIsh), "orthogonal_ish");
  EXPECT_THROW(parse_design_kind("banded"), BadGeneratorError);
}

TEST(DesignGenerator, Validation) {
  EXPECT_THROW(generator(DesignKind::kIidGaussian, 0.0, 0.0).validate(), BadGeneratorError);
  EXPECT_THROW(generator(DesignKind::kIidGaussian, 0.0, 1.0, -1.0).validate(), BadGeneratorError);
  EXPECT_THROW(generator(DesignKind::kCorrelatedGaussian, 1.0).validate(), BadGeneratorError);
  EXPECT_THROW(generator(DesignKind::kCorrelatedGaussian, -0.1).validate(), BadGeneratorError);
  EXPECT_THROW(make_design(generator(DesignKind::kIidGaussian), 0, 3, 1), BadGeneratorError);
}

TEST(MakeDesign, RowsWithinM1) {
  for (DesignKind k : {DesignKind::kIidGaussian, DesignKind::kCorrelatedGaussian, DesignKind::kOrthogonalIsh}) {
    const auto x = make_design(generator(k, 0.3, 1.5, 2.0), 2000, 6, 5);
    EXPECT_LE(x.max_row_norm(), 2.0 * (1.0 + 1e-12)) << to_string(k);
  }
  // With a generous M1 the rows are untouched.
  const auto loose = make_design(generator(DesignKind::kIidGaussian, 0.0, 0.1, 100.0), 100, 3, 6);
  const auto same = make_design(generator(DesignKind::kIidGaussian, 0.0, 0.1, 200.0), 100, 3, 6);
  EXPECT_EQ(loose.values(), same.values());
}

TEST(MakeDesign, DeterministicInSeed) {
  for (DesignKind k : {DesignKind::kIidGaussian, DesignKind::kCorrelatedGaussian, DesignKind::kOrthogonalIsh}) {
    const auto g = generator(k, 0.2, 0.5);
    EXPECT_EQ(make_design(g, 64, 5, 9).values(), make_design(g, 64, 5, 9).values());
    EXPECT_NE(make_design(g, 64, 5, 9).values(), make_design(g, 64, 5, 10).values());
  }
}

TEST(MakeDesign, OrthogonalIshGramIsNearlyDiagonal) {
  for (Index p : {3, 5, 6}) {
    const Index n = 10000;
    const auto x = make_design(generator(DesignKind::kOrthogonalIsh, 0.0, 1.0, 10.0), n, p, 11);
    const Eigen::MatrixXd c = x.values().transpose() * x.values() / static_cast<double>(n);
    for (Index a = 0; a < p; ++a) {
      EXPECT_NEAR(c(a, a), 1.0, 1e-12);
      for (Index b = 0; b < p; ++b)
        if (a != b) EXPECT_LE(std::abs(c(a, b)), 0.05);
    }
  }
  // n a multiple of the cycle: exactly orthogonal.
  const auto exact = make_design(generator(DesignKind::kOrthogonalIsh), 64 * 5, 6, 12);
  const Eigen::MatrixXd g = exact.values().transpose() * exact.values();
  EXPECT_TRUE((g - 320.0 * Eigen::MatrixXd::Identity(6, 6)).isZero(0.0));
  EXPECT_EQ(factorial_cycle(1), 2);
  EXPECT_EQ(factorial_cycle(6), 64);
  EXPECT_EQ(factorial_cycle(31), 0);
}

TEST(MakeDesign, OrthogonalIshStaysOrthogonalUnderActiveWeights) {
  // Weights exp(x_1 - x_2) leave the inactive columns uncorrelated with
  // everything else when the design is a complete factorial.
  const Index n = 64 * 4;
  const auto x = make_design(generator(DesignKind::kOrthogonalIsh, 0.0, 0.5), n, 6, 15);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(6, 6);
  for (Index i = 0; i < n; ++i) {
    const double w = std::exp(x.values()(i, 0) - x.values()(i, 1));
    c += w * x.values().row(i).transpose() * x.values().row(i);
  }
  for (Index a = 2; a < 6; ++a)
    for (Index b = 0; b < 6; ++b)
      if (a != b) EXPECT_NEAR(c(a, b), 0.0, 1e-12);
}

TEST(MakeDesign, CorrelatedGaussianHasTargetCorrelation) {
  const Index n = 20000;
  const auto x = make_design(generator(DesignKind::kCorrelatedGaussian, 0.4, 0.5, 100.0), n, 3, 13);
  const Eigen::MatrixXd centred = x.values().rowwise() - x.values().colwise().mean();
  const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(n - 1);
  for (Index a = 0; a < 3; ++a) {
    EXPECT_NEAR(cov(a, a), 0.25, 0.02);
    for (Index b = a + 1; b < 3; ++b) EXPECT_NEAR(cov(a, b) / std::sqrt(cov(a, a) * cov(b, b)), 0.4, 0.03);
  }
}

TEST(MakeDesign, IidGaussianScale) {
  const auto x = make_design(generator(DesignKind::kIidGaussian, 0.0, 2.0, 1000.0), 20000, 2, 14);
  const Eigen::MatrixXd c = x.values().transpose() * x.values() / 20000.0;
  EXPECT_NEAR(c(0, 0), 4.0, 0.2);
  EXPECT_NEAR(c(0, 1), 0.0, 0.2);
}
