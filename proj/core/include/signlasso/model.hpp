#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "signlasso/types.hpp"

namespace signlasso {

/// Largest admissible linear predictor x_i*beta. Half of log(DBL_MAX), so that
/// intensities can be squared or inverted downstream without overflowing.
double linear_predictor_limit() noexcept;

/// Counts drawn from the Poisson model together with the generating
/// intensities and the seed that reproduces them.
struct PoissonSample {
  Counts counts;
  Eigen::VectorXd intensities;
  std::uint64_t seed = 0;
};

/// exp(x_i*beta) for every row. Throws OverflowError past the predictor limit.
Eigen::VectorXd intensities(const DesignMatrix& x, const CoefVector& beta);

/// Full Poisson log-likelihood sum_i (Y_i*eta_i - exp(eta_i) - log(Y_i!)).
double log_likelihood(const DesignMatrix& x, const CoefVector& beta,
                      std::span<const std::int64_t> y);

struct ScoreHessian {
  Eigen::VectorXd gradient;  ///< sum_i x_i^T (Y_i - lambda_i)
  Eigen::MatrixXd hessian;   ///< -sum_i lambda_i x_i^T x_i, exactly symmetric
};

ScoreHessian score_and_hessian(const DesignMatrix& x, const CoefVector& beta,
                               std::span<const std::int64_t> y);

/// Draws Y_i ~ Poisson(exp(x_i*beta_star)) independently. Pure in (x, beta_star, seed).
PoissonSample simulate(const DesignMatrix& x, const CoefVector& beta_star, std::uint64_t seed);

}  // namespace signlasso
