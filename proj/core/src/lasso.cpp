#include "signlasso/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "signlasso/errors.hpp"

namespace signlasso {
namespace {

double objective_from_residual(const Eigen::VectorXd& resid, const Eigen::VectorXd& beta,
                               double alpha) {
  return resid.squaredNorm() + alpha * beta.lpNorm<1>();
}

}  // namespace

void SolverConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DimensionError("alpha must be finite and >= 0");
  if (max_sweeps < 1) throw DimensionError("max_sweeps must be positive");
  if (!(tol > 0.0)) throw DimensionError("tol must be positive");
  if (!(kkt_tol > 0.0)) throw DimensionError("kkt_tol must be positive");
}

double soft_threshold(double z, double gamma) noexcept {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

double lasso_objective(const WorkingProblem& problem, const CoefVector& beta, double alpha) {
  if (beta.size() != problem.p()) throw DimensionError("coefficient length does not match problem");
  const Eigen::VectorXd resid = problem.y_work() - problem.x_work() * beta.values();
  return objective_from_residual(resid, beta.values(), alpha);
}

KktReport kkt_check(const WorkingProblem& problem, const CoefVector& beta, double alpha,
                    double kkt_tol) {
  if (beta.size() != problem.p()) throw DimensionError("coefficient length does not match problem");
  const Eigen::VectorXd resid = problem.y_work() - problem.x_work() * beta.values();
  const Eigen::VectorXd grad = problem.x_work().transpose() * resid;
  const double half = alpha / 2.0;

  KktReport report;
  report.entries.reserve(static_cast<std::size_t>(beta.size()));
  report.all_pass = true;
  for (Index i = 0; i < beta.size(); ++i) {
    KktEntry e;
    e.index = i;
    e.gradient = grad(i);
    e.active = beta[i] != 0.0;
    if (e.active) {
      const double s = beta[i] > 0.0 ? 1.0 : -1.0;
      e.violation = std::abs(grad(i) - half * s);
    } else {
      e.slack = half - std::abs(grad(i));
      e.violation = std::max(0.0, -e.slack);
    }
    e.pass = e.violation <= kkt_tol;
    report.all_pass = report.all_pass && e.pass;
    report.max_violation = std::max(report.max_violation, e.violation);
    report.entries.push_back(e);
  }
  return report;
}

FitResult fit(const WorkingProblem& problem, const SolverConfig& config,
              const std::optional<CoefVector>& start) {
  config.validate();
  const auto& x = problem.x_work();
  const Index p = problem.p();

  Eigen::VectorXd beta = start ? start->values() : problem.beta_tilde().values();
  if (beta.size() != p) throw DimensionError("start point length does not match problem");

  const Eigen::VectorXd col_sq = x.colwise().squaredNorm().transpose();
  const double half_alpha = config.alpha / 2.0;
  Eigen::VectorXd resid = problem.y_work() - x * beta;

  FitResult result;
  double objective = objective_from_residual(resid, beta, config.alpha);
  if (!std::isfinite(objective)) throw NumericalError("non-finite objective at start point");
  if (config.record_objective) result.objective_trace.push_back(objective);

  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) {
      const double old = beta(j);
      double updated = 0.0;
      if (col_sq(j) > 0.0) {
        const double z = x.col(j).dot(resid) + col_sq(j) * old;
        updated = soft_threshold(z, half_alpha) / col_sq(j);
      }
      const double delta = updated - old;
      if (delta != 0.0) {
        resid.noalias() -= delta * x.col(j);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }

    objective = objective_from_residual(resid, beta, config.alpha);
    if (!std::isfinite(objective)) throw NumericalError("non-finite objective during coordinate descent");
    if (config.record_objective) result.objective_trace.push_back(objective);
    result.sweeps_used = sweep;

    if (max_change <= config.tol) {
      // Refresh the running residual to shed accumulated rounding before certifying.
      resid = problem.y_work() - x * beta;
      result.kkt_report = kkt_check(problem, CoefVector(beta), config.alpha, config.kkt_tol);
      if (result.kkt_report.all_pass) {
        result.converged = true;
        break;
      }
    }
  }

  result.beta_hat = CoefVector(beta);
  if (!result.converged) {
    result.kkt_report = kkt_check(problem, result.beta_hat, config.alpha, config.kkt_tol);
  }
  result.objective = lasso_objective(problem, result.beta_hat, config.alpha);
  return result;
}

double null_alpha(const WorkingProblem& problem) {
  return 2.0 * (problem.x_work().transpose() * problem.y_work()).cwiseAbs().maxCoeff();
}

}  // namespace signlasso
