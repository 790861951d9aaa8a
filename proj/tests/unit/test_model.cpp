#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "signlasso/errors.hpp"
#include "signlasso/model.hpp"

using namespace signlasso;
using signlasso::testing::central_difference_gradient;
using signlasso::testing::gaussian_matrix;
using signlasso::testing::gaussian_vector;
using signlasso::testing::scalar_log_likelihood;

namespace {

DesignMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return DesignMatrix(m);
}

CoefVector vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Index>(vals.size()));
  Index i = 0;
  for (double x : vals) v(i++) = x;
  return CoefVector(v);
}

}  // namespace

TEST(Intensities, ZeroRowGivesOne) {
  const auto lam = intensities(mat({{0.0}}), vec({5.0}));
  EXPECT_DOUBLE_EQ(lam(0), 1.0);
}

TEST(Intensities, IdentityDesignExponentiatesCoefficients) {
  const auto lam = intensities(mat({{1, 0}, {0, 1}}), vec({std::log(2.0), std::log(3.0)}));
  EXPECT_NEAR(lam(0), 2.0, 1e-15);
  EXPECT_NEAR(lam(1), 3.0, 1e-15);
}

TEST(Intensities, MatchesScalarEvaluation) {
  const auto lam = intensities(mat({{1, 1}, {1, -1}}), vec({0.5, 0.25}));
  EXPECT_DOUBLE_EQ(lam(0), std::exp(0.75));
  EXPECT_DOUBLE_EQ(lam(1), std::exp(0.25));
}

TEST(Intensities, OverflowGuardAtHalfExponentRange) {
  const double limit = std::log(std::numeric_limits<double>::max()) / 2.0;
  EXPECT_DOUBLE_EQ(linear_predictor_limit(), limit);
  EXPECT_NO_THROW(intensities(mat({{1.0}}), vec({limit - 1.0})));
  EXPECT_THROW(intensities(mat({{1.0}}), vec({limit + 1.0})), OverflowError);
}

TEST(Intensities, DimensionMismatch) {
  EXPECT_THROW(intensities(mat({{1.0, 2.0}}), vec({1.0})), DimensionError);
}

TEST(LogLikelihood, HandValues) {
  EXPECT_DOUBLE_EQ(log_likelihood(mat({{0.0}}), vec({0.0}), Counts{0}), -1.0);
  EXPECT_NEAR(log_likelihood(mat({{0.0}}), vec({0.0}), Counts{2}), -1.0 - std::log(2.0), 1e-15);
}

TEST(LogLikelihood, MatchesScalarLoopOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd x = gaussian_matrix(rng, 5, 2, 0.7);
    const Eigen::VectorXd b = gaussian_vector(rng, 2, 0.5);
    Counts y;
    for (int i = 0; i < 5; ++i) y.push_back(rng.poisson(2.0));
    const double got = log_likelihood(DesignMatrix(x), CoefVector(b), y);
    const double want = scalar_log_likelihood(x, b, y);
    EXPECT_NEAR(got, want, 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST(LogLikelihood, LargeCountsStayFinite) {
  const double ll = log_likelihood(mat({{1.0}}), vec({std::log(5000.0)}), Counts{5000});
  EXPECT_TRUE(std::isfinite(ll));
}

TEST(ScoreHessian, HandValue) {
  const auto sh = score_and_hessian(mat({{1.0}}), vec({0.0}), Counts{3});
  EXPECT_DOUBLE_EQ(sh.gradient(0), 2.0);
  EXPECT_DOUBLE_EQ(sh.hessian(0, 0), -1.0);
}

TEST(ScoreHessian, GradientMatchesFiniteDifferences) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 5 + static_cast<Index>(rng.uniform() * 45);
    const Index p = 1 + static_cast<Index>(rng.uniform() * 5);
    const Eigen::MatrixXd xm = gaussian_matrix(rng, n, p, 0.4);
    const Eigen::VectorXd b = gaussian_vector(rng, p, 0.5);
    Counts y;
    for (Index i = 0; i < n; ++i) y.push_back(rng.poisson(1.5));
    const DesignMatrix x(xm);
    const auto sh = score_and_hessian(x, CoefVector(b), y);
    const auto fd = central_difference_gradient(
        [&](const Eigen::VectorXd& v) { return scalar_log_likelihood(xm, v, y); }, b, 1e-6);
    for (Index j = 0; j < p; ++j) {
      EXPECT_NEAR(sh.gradient(j), fd(j), 1e-5 * std::max(1.0, std::abs(fd(j)))) << "trial " << trial;
    }
    // Hessian against finite differences of the analytic gradient.
    for (Index k = 0; k < p; ++k) {
      Eigen::VectorXd up = b, down = b;
      up(k) += 1e-6;
      down(k) -= 1e-6;
      const Eigen::VectorXd col = (score_and_hessian(x, CoefVector(up), y).gradient -
                                   score_and_hessian(x, CoefVector(down), y).gradient) /
                                  2e-6;
      for (Index j = 0; j < p; ++j) {
        EXPECT_NEAR(sh.hessian(j, k), col(j), 1e-5 * std::max(1.0, std::abs(col(j))));
      }
    }
  }
}

TEST(ScoreHessian, HessianSymmetricNegativeSemidefinite) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Index p = 1 + static_cast<Index>(rng.uniform() * 5);
    const Eigen::MatrixXd xm = gaussian_matrix(rng, 8, p, 0.5);
    Counts y(8, 1);
    const auto sh = score_and_hessian(DesignMatrix(xm), CoefVector(gaussian_vector(rng, p, 0.3)), y);
    EXPECT_TRUE(sh.hessian.isApprox(sh.hessian.transpose(), 0.0));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sh.hessian);
    EXPECT_LE(es.eigenvalues().maxCoeff(), 1e-10);
  }
}

TEST(Simulate, DeterministicInSeed) {
  Rng rng(1);
  const DesignMatrix x(gaussian_matrix(rng, 50, 3, 0.3));
  const CoefVector b = vec({0.5, -0.2, 0.0});
  const auto a = simulate(x, b, 123);
  const auto c = simulate(x, b, 123);
  EXPECT_EQ(a.counts, c.counts);
  EXPECT_EQ(a.seed, 123u);
  EXPECT_NE(simulate(x, b, 124).counts, a.counts);
  EXPECT_TRUE(a.intensities.isApprox(intensities(x, b), 0.0));
}

TEST(Simulate, UnitIntensityMean) {
  Eigen::MatrixXd xm = Eigen::MatrixXd::Ones(100000, 1);
  const auto s = simulate(DesignMatrix(xm), vec({0.0}), 9);
  double mean = 0.0;
  for (auto v : s.counts) mean += static_cast<double>(v);
  mean /= static_cast<double>(s.counts.size());
  EXPECT_NEAR(mean, 1.0, 0.02);
}

TEST(Simulate, IntensityFourVariance) {
  Eigen::MatrixXd xm = Eigen::MatrixXd::Ones(100000, 1);
  const auto s = simulate(DesignMatrix(xm), vec({std::log(4.0)}), 10);
  double mean = 0.0;
  for (auto v : s.counts) mean += static_cast<double>(v);
  mean /= static_cast<double>(s.counts.size());
  double var = 0.0;
  for (auto v : s.counts) var += (static_cast<double>(v) - mean) * (static_cast<double>(v) - mean);
  var /= static_cast<double>(s.counts.size() - 1);
  EXPECT_NEAR(mean, 4.0, 4.0 * std::sqrt(4.0 / 1e5));
  EXPECT_NEAR(var, 4.0, 0.15);
}
