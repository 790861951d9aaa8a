#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "signlasso/types.hpp"

namespace signlasso {

/// Weights exp(x_i*beta_tilde) below this floor are rejected.
inline constexpr double kWeightFloor = 1e-12;

/// Least-squares surrogate of the Poisson likelihood around an expansion point
/// beta_tilde:
///
///   X_work = diag(sqrt(lambda_tilde)) X
///   eps_tilde_k = (Y_k - lambda_tilde_k) / sqrt(lambda_tilde_k)
///   Y_work = X_work beta_tilde + eps_tilde
///
/// Minimizing ||Y_work - X_work b||^2 is the same as maximizing the second
/// order Taylor expansion of the log-likelihood at beta_tilde.
class WorkingProblem {
 public:
  /// Assembles a problem from explicit parts. Only shapes are validated; the
  /// defining identity Y_work = X_work beta_tilde + eps_tilde is the caller's
  /// responsibility (tests use this to inject controlled noise).
  WorkingProblem(Eigen::MatrixXd x_work, Eigen::VectorXd y_work, Eigen::VectorXd lambda_tilde,
                 Eigen::VectorXd eps_tilde, CoefVector beta_tilde);

  Index n() const noexcept { return x_work_.rows(); }
  Index p() const noexcept { return x_work_.cols(); }

  const Eigen::MatrixXd& x_work() const noexcept { return x_work_; }
  const Eigen::VectorXd& y_work() const noexcept { return y_work_; }
  const Eigen::VectorXd& lambda_tilde() const noexcept { return lambda_tilde_; }
  const Eigen::VectorXd& eps_tilde() const noexcept { return eps_tilde_; }
  const CoefVector& beta_tilde() const noexcept { return beta_tilde_; }

 private:
  Eigen::MatrixXd x_work_;
  Eigen::VectorXd y_work_;
  Eigen::VectorXd lambda_tilde_;
  Eigen::VectorXd eps_tilde_;
  CoefVector beta_tilde_;
};

/// Throws DegenerateWeightError if some lambda_tilde_i < kWeightFloor and
/// OverflowError if a linear predictor exceeds the guard.
WorkingProblem build_working_problem(const DesignMatrix& x, const CoefVector& beta_tilde,
                                     std::span<const std::int64_t> y);

}  // namespace signlasso
