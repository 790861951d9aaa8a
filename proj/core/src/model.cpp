#include "signlasso/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "signlasso/errors.hpp"
#include "signlasso/rng.hpp"

namespace signlasso {
namespace {

void check_dims(const DesignMatrix& x, const CoefVector& beta) {
  if (x.cols() != beta.size()) {
    throw DimensionError("design has " + std::to_string(x.cols()) +
                         " columns but coefficient vector has length " +
                         std::to_string(beta.size()));
  }
}

Eigen::VectorXd guarded_predictor(const DesignMatrix& x, const CoefVector& beta) {
  check_dims(x, beta);
  Eigen::VectorXd eta = x.values() * beta.values();
  const double limit = linear_predictor_limit();
  for (Index i = 0; i < eta.size(); ++i) {
    if (!std::isfinite(eta(i)) || eta(i) > limit) {
      throw OverflowError("linear predictor of row " + std::to_string(i) +
                          " exceeds the overflow guard");
    }
  }
  return eta;
}

}  // namespace

double linear_predictor_limit() noexcept {
  return std::log(std::numeric_limits<double>::max()) / 2.0;
}

Eigen::VectorXd intensities(const DesignMatrix& x, const CoefVector& beta) {
  return guarded_predictor(x, beta).array().exp().matrix();
}

double log_likelihood(const DesignMatrix& x, const CoefVector& beta,
                      std::span<const std::int64_t> y) {
  const Eigen::VectorXd eta = guarded_predictor(x, beta);
  validate_counts(y, x.rows());
  double ll = 0.0;
  for (Index i = 0; i < eta.size(); ++i) {
    const double yi = static_cast<double>(y[static_cast<std::size_t>(i)]);
    ll += yi * eta(i) - std::exp(eta(i)) - std::lgamma(yi + 1.0);
  }
  return ll;
}

ScoreHessian score_and_hessian(const DesignMatrix& x, const CoefVector& beta,
                               std::span<const std::int64_t> y) {
  const Eigen::VectorXd lambda = intensities(x, beta);
  validate_counts(y, x.rows());
  const auto& xv = x.values();

  Eigen::VectorXd resid(xv.rows());
  for (Index i = 0; i < resid.size(); ++i) {
    resid(i) = static_cast<double>(y[static_cast<std::size_t>(i)]) - lambda(i);
  }

  ScoreHessian out;
  out.gradient = xv.transpose() * resid;

  const Eigen::MatrixXd weighted = lambda.array().sqrt().matrix().asDiagonal() * xv;
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(xv.cols(), xv.cols());
  info.selfadjointView<Eigen::Lower>().rankUpdate(weighted.transpose());
  out.hessian = -Eigen::MatrixXd(info.selfadjointView<Eigen::Lower>());
  return out;
}

PoissonSample simulate(const DesignMatrix& x, const CoefVector& beta_star, std::uint64_t seed) {
  PoissonSample sample;
  sample.intensities = intensities(x, beta_star);
  sample.seed = seed;
  sample.counts.resize(static_cast<std::size_t>(x.rows()));
  Rng rng(seed);
  for (Index i = 0; i < x.rows(); ++i) {
    sample.counts[static_cast<std::size_t>(i)] = rng.poisson(sample.intensities(i));
  }
  return sample;
}

}  // namespace signlasso
