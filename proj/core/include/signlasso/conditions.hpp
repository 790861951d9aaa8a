#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "signlasso/lasso.hpp"
#include "signlasso/types.hpp"
#include "signlasso/working_response.hpp"

namespace signlasso {

/// C11 with smallest eigenvalue at or below this is treated as singular.
inline constexpr double kSingularBlockThreshold = 1e-12;

/// A symmetric p x p Gram matrix split by an active/inactive partition. Blocks
/// are taken in ascending index order of each side, so block "1" stacks the
/// active coordinates first as if the predictors had been permuted.
struct GramBlocks {
  Eigen::MatrixXd c;    ///< full matrix, original coordinate order
  Eigen::MatrixXd c11;  ///< active x active
  Eigen::MatrixXd c12;  ///< active x inactive
  Eigen::MatrixXd c21;  ///< inactive x active
  Eigen::MatrixXd c22;  ///< inactive x inactive
  std::vector<Index> active;
  std::vector<Index> inactive;

  Index q() const noexcept { return static_cast<Index>(active.size()); }
  Index p() const noexcept { return c.rows(); }

  /// Places the four blocks back into a p x p matrix in original order.
  Eigen::MatrixXd reassemble() const;
};

/// C = X_work^T X_work / n and W = X_work^T eps_tilde / n, partitioned.
struct BlockedGram : GramBlocks {
  Eigen::VectorXd w;
  Eigen::VectorXd w1;
  Eigen::VectorXd w2;
  Index n = 0;
};

/// Throws EmptySupportError for an empty support and DimensionError for
/// out-of-range or repeated indices.
BlockedGram blocked_gram(const WorkingProblem& problem, std::span<const Index> support);

/// User-supplied constants. Unset constants leave the corresponding check
/// unevaluated.
struct AssumptionConstants {
  std::optional<double> m1, m2, m3, m4, m5, m6, m7;
  double c1 = 1.0;
  double tau = 0.67;
};

struct AssumptionPasses {
  std::optional<bool> t1;  ///< row and column norms
  std::optional<bool> t2;  ///< lambda_min(C11) >= M2
  std::optional<bool> t3;  ///< block norms of C12, C21, C22
  std::optional<bool> t4;  ///< scaled beta-min
  bool irrepresentable = false;
  bool tau_admissible = false;  ///< tau > 2/3

  /// True when every evaluated check passes.
  bool all() const noexcept;
};

/// Observed values are the largest (or smallest, for lower bounds) constants
/// that would still pass, so they double as an audit of the inputs.
struct ConditionReport {
  Index n = 0;
  Index p = 0;
  Index q = 0;
  double lambda_min_c11 = 0.0;
  double lambda_max_c12 = 0.0;  ///< largest singular value of the rectangular block
  double lambda_max_c21 = 0.0;  ///< largest singular value of the rectangular block
  double lambda_max_c22 = 0.0;
  double row_norm_max = 0.0;
  double col_norm_max = 0.0;
  double beta_min_scaled = 0.0;
  /// 1 - max_j |d_j| with d = C21 C11^{-1} sign(beta*_1); 1 when q = p.
  double irrep_margin = 1.0;
  Eigen::VectorXd irrepresentable_vector;  ///< d
  AssumptionConstants constants;
  AssumptionPasses passes;
};

/// Evaluates the design, eigenvalue, beta-min and irrepresentable conditions
/// on the working design. Throws SingularBlockError when lambda_min(C11) is
/// at or below kSingularBlockThreshold.
ConditionReport check_assumptions(const DesignMatrix& x, const WorkingProblem& problem,
                                  const CoefVector& beta_star,
                                  const AssumptionConstants& constants = {});

/// Quantities of the sufficient events for sign recovery. Vectors named with a
/// 1 or 2 suffix live in the active or inactive block respectively.
struct PropositionDiagnostics {
  Eigen::VectorXd r1;    ///< (C (beta* - beta_tilde))_1
  Eigen::VectorXd r2;    ///< (C (beta* - beta_tilde))_2
  Eigen::VectorXd xi;    ///< C11^{-1} W1
  Eigen::VectorXd b;     ///< C11^{-1} sign(beta*_1)
  Eigen::VectorXd zeta;  ///< C21 C11^{-1} W1 - W2
  Eigen::VectorXd d;     ///< C21 C11^{-1} sign(beta*_1)
  /// Right-hand side minus left-hand side of each componentwise inequality.
  Eigen::VectorXd an_margin;
  Eigen::VectorXd bn_margin;
  bool an_holds = false;  ///< strict inequality in every component
  bool bn_holds = false;  ///< non-strict inequality in every component
  CoefVector beta_check;  ///< candidate solution (beta_check_1, 0), original order
};

PropositionDiagnostics proposition_diagnostics(const BlockedGram& bg, const CoefVector& beta_star,
                                               const CoefVector& beta_tilde, double alpha);

/// KKT vector in Gram/noise form:
///   C (beta_hat - beta*) - W + C (beta* - beta_tilde)
/// which equals -(1/n) X_work^T (Y_work - X_work beta_hat) for the same problem.
Eigen::VectorXd kkt_gram_form(const BlockedGram& bg, const CoefVector& beta_hat,
                              const CoefVector& beta_star, const CoefVector& beta_tilde);

/// KKT check in Gram/noise form: active coordinates need the vector to equal
/// -(alpha/2n) sign(beta_hat_i), inactive ones need |.| <= alpha/2n.
KktReport kkt_check_gram_form(const BlockedGram& bg, const CoefVector& beta_hat,
                              const CoefVector& beta_star, const CoefVector& beta_tilde,
                              double alpha, double kkt_tol);

}  // namespace signlasso
