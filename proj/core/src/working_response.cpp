#include "signlasso/working_response.hpp"

#include <cmath>
#include <string>

#include "signlasso/errors.hpp"
#include "signlasso/model.hpp"

namespace signlasso {

WorkingProblem::WorkingProblem(Eigen::MatrixXd x_work, Eigen::VectorXd y_work,
                               Eigen::VectorXd lambda_tilde, Eigen::VectorXd eps_tilde,
                               CoefVector beta_tilde)
    : x_work_(std::move(x_work)),
      y_work_(std::move(y_work)),
      lambda_tilde_(std::move(lambda_tilde)),
      eps_tilde_(std::move(eps_tilde)),
      beta_tilde_(std::move(beta_tilde)) {
  const Index n = x_work_.rows();
  if (n < 1 || x_work_.cols() < 1) throw DimensionError("working design must be non-empty");
  if (y_work_.size() != n || lambda_tilde_.size() != n || eps_tilde_.size() != n) {
    throw DimensionError("working response, weights and residuals must have length n");
  }
  if (beta_tilde_.size() != x_work_.cols()) {
    throw DimensionError("expansion point length does not match working design");
  }
}

WorkingProblem build_working_problem(const DesignMatrix& x, const CoefVector& beta_tilde,
                                     std::span<const std::int64_t> y) {
  Eigen::VectorXd lambda = intensities(x, beta_tilde);
  validate_counts(y, x.rows());
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < kWeightFloor) {
      throw DegenerateWeightError("working weight of row " + std::to_string(i) +
                                  " is below the floor 1e-12");
    }
  }

  const Eigen::VectorXd root = lambda.array().sqrt().matrix();
  Eigen::MatrixXd x_work = root.asDiagonal() * x.values();

  Eigen::VectorXd eps(lambda.size());
  for (Index i = 0; i < eps.size(); ++i) {
    eps(i) = (static_cast<double>(y[static_cast<std::size_t>(i)]) - lambda(i)) / root(i);
  }
  Eigen::VectorXd y_work = x_work * beta_tilde.values() + eps;

  return WorkingProblem(std::move(x_work), std::move(y_work), std::move(lambda), std::move(eps),
                        beta_tilde);
}

}  // namespace signlasso
