#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "signlasso/types.hpp"

namespace signlasso {

struct MleConfig {
  int max_iter = 100;
  double grad_tol = 1e-8;
  int step_halving_max = 30;

  void validate() const;
};

struct MleResult {
  CoefVector beta;
  int iterations = 0;
  bool converged = false;
  double log_likelihood = 0.0;
  double grad_inf_norm = 0.0;
  /// Log-likelihood at the start point, then advanced by the termwise gain of
  /// each accepted step (the gain is what the step acceptance tests).
  std::vector<double> loglik_trace;
};

/// Unpenalized Poisson MLE by damped Newton iterations from beta = 0.
///
/// Requires n >= p and a design whose smallest singular value exceeds 1e-8
/// times the largest (RankDeficientError otherwise). A run that stops before
/// ||gradient||_inf <= grad_tol is returned with converged = false.
MleResult fit_mle(const DesignMatrix& x, std::span<const std::int64_t> y,
                  const MleConfig& config = {});

/// beta_star + (scale/n) u with u uniform on [-1, 1]^p, drawn from `seed`.
/// Every coordinate lies within scale/n of beta_star.
CoefVector oracle_perturbation(const CoefVector& beta_star, std::int64_t n, double scale,
                               std::uint64_t seed);

}  // namespace signlasso
