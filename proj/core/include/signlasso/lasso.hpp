#pragma once

#include <optional>
#include <vector>

#include "signlasso/types.hpp"
#include "signlasso/working_response.hpp"

namespace signlasso {

/// Settings for minimizing ||Y_work - X_work b||^2 + alpha ||b||_1.
///
/// The penalty is unnormalized: no 1/(2n) factor. The KKT threshold on
/// X_work^T (Y_work - X_work b) is therefore alpha/2.
struct SolverConfig {
  double alpha = 0.0;
  int max_sweeps = 100000;
  double tol = 1e-9;       ///< max absolute coordinate change in a sweep
  double kkt_tol = 1e-6;   ///< absolute tolerance on the KKT residuals
  bool record_objective = false;

  void validate() const;
};

struct KktEntry {
  Index index = 0;
  bool active = false;    ///< b_i != 0
  double gradient = 0.0;  ///< (X_work^T (Y_work - X_work b))_i
  /// Active: |gradient - (alpha/2) sign(b_i)|. Inactive: max(0, |gradient| - alpha/2).
  double violation = 0.0;
  /// Inactive only: alpha/2 - |gradient|; zero for active coordinates.
  double slack = 0.0;
  bool pass = false;
};

struct KktReport {
  std::vector<KktEntry> entries;
  double max_violation = 0.0;
  bool all_pass = false;
};

struct FitResult {
  CoefVector beta_hat;
  int sweeps_used = 0;
  KktReport kkt_report;
  bool converged = false;
  double objective = 0.0;
  /// Objective after each sweep, index 0 being the starting point. Filled
  /// only when SolverConfig::record_objective is set.
  std::vector<double> objective_trace;
};

/// sign(z) * max(|z| - gamma, 0); returns exactly 0 when |z| <= gamma.
double soft_threshold(double z, double gamma) noexcept;

/// ||Y_work - X_work b||^2 + alpha ||b||_1
double lasso_objective(const WorkingProblem& problem, const CoefVector& beta, double alpha);

/// Cyclic coordinate descent, warm-started at the problem's beta_tilde unless
/// `start` is given. Converged means a sweep moved no coordinate by more than
/// tol and the fresh-residual KKT check passes at kkt_tol. Hitting max_sweeps
/// returns the last iterate with converged = false. Throws NumericalError on a
/// non-finite objective.
FitResult fit(const WorkingProblem& problem, const SolverConfig& config,
              const std::optional<CoefVector>& start = std::nullopt);

KktReport kkt_check(const WorkingProblem& problem, const CoefVector& beta, double alpha,
                    double kkt_tol);

/// Smallest alpha for which b = 0 is optimal: 2 max_j |(X_work^T Y_work)_j|.
double null_alpha(const WorkingProblem& problem);

}  // namespace signlasso
