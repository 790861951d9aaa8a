#include "signlasso/prelim.hpp"

#include <cmath>

#include "signlasso/errors.hpp"
#include "signlasso/model.hpp"
#include "signlasso/rng.hpp"

namespace signlasso {
namespace {

constexpr double kRankRatio = 1e-8;
constexpr double kNewtonRidge = 1e-10;

void check_full_rank(const DesignMatrix& x) {
  if (x.rows() < x.cols()) {
    throw RankDeficientError("MLE needs n >= p");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x.values());
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > kRankRatio * sv(0))) {
    throw RankDeficientError("design is rank deficient (smallest singular value <= 1e-8 * largest)");
  }
}

// Solves (-H) step = gradient; falls back to a ridge when -H is not numerically SPD.
Eigen::VectorXd newton_direction(const ScoreHessian& sh) {
  const Eigen::MatrixXd info = -sh.hessian;
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd step = llt.solve(sh.gradient);
    if (step.allFinite()) return step;
  }
  const Eigen::MatrixXd ridged =
      info + kNewtonRidge * Eigen::MatrixXd::Identity(info.rows(), info.cols());
  Eigen::LLT<Eigen::MatrixXd> fallback(ridged);
  if (fallback.info() != Eigen::Success) {
    throw NumericalError("Newton system is not positive definite even after ridge");
  }
  return fallback.solve(sh.gradient);
}

// l(candidate) - l(current) summed termwise. The log-factorial terms cancel
// and the difference keeps its own relative precision, so accept/reject
// decisions stay meaningful near the optimum where l itself no longer changes
// in floating point.
double loglik_gain(const DesignMatrix& x, const CoefVector& current, const CoefVector& candidate,
                   std::span<const std::int64_t> y) {
  intensities(x, candidate);  // overflow guard
  const Eigen::VectorXd eta = x.values() * current.values();
  const Eigen::VectorXd delta = x.values() * (candidate.values() - current.values());
  double gain = 0.0;
  for (Index i = 0; i < eta.size(); ++i) {
    gain += static_cast<double>(y[static_cast<std::size_t>(i)]) * delta(i) - std::exp(eta(i)) * std::expm1(delta(i));
  }
  return gain;
}

}  // namespace

void MleConfig::validate() const {
  if (max_iter < 1 || step_halving_max < 1 || !(grad_tol > 0.0)) {
    throw DimensionError("MLE configuration values must be positive");
  }
}

MleResult fit_mle(const DesignMatrix& x, std::span<const std::int64_t> y, const MleConfig& config) {
  config.validate();
  validate_counts(y, x.rows());
  check_full_rank(x);

  MleResult out;
  CoefVector beta = CoefVector::zeros(x.cols());
  double ll = log_likelihood(x, beta, y);
  out.loglik_trace.push_back(ll);

  for (int iter = 0; iter < config.max_iter; ++iter) {
    const ScoreHessian sh = score_and_hessian(x, beta, y);
    out.grad_inf_norm = sh.gradient.lpNorm<Eigen::Infinity>();
    if (out.grad_inf_norm <= config.grad_tol) {
      out.converged = true;
      break;
    }

    const Eigen::VectorXd direction = newton_direction(sh);
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= config.step_halving_max; ++halving, t *= 0.5) {
      CoefVector candidate(beta.values() + t * direction);
      double gain = 0.0;
      try {
        gain = loglik_gain(x, beta, candidate, y);
      } catch (const OverflowError&) {
        continue;
      }
      if (std::isfinite(gain) && gain >= 0.0) {
        beta = std::move(candidate);
        ll += gain;
        accepted = true;
        break;
      }
    }
    out.iterations = iter + 1;
    if (!accepted) break;
    out.loglik_trace.push_back(ll);
  }

  if (!out.converged) {
    const ScoreHessian sh = score_and_hessian(x, beta, y);
    out.grad_inf_norm = sh.gradient.lpNorm<Eigen::Infinity>();
    out.converged = out.grad_inf_norm <= config.grad_tol;
  }
  out.log_likelihood = log_likelihood(x, beta, y);
  out.beta = std::move(beta);
  return out;
}

CoefVector oracle_perturbation(const CoefVector& beta_star, std::int64_t n, double scale,
                               std::uint64_t seed) {
  if (n < 1) throw DimensionError("oracle perturbation needs n >= 1");
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw DimensionError("scale must be finite and >= 0");
  Rng rng(seed);
  const double radius = scale / static_cast<double>(n);
  Eigen::VectorXd out = beta_star.values();
  for (Index j = 0; j < out.size(); ++j) {
    out(j) += radius * rng.uniform(-1.0, 1.0);
  }
  return CoefVector(std::move(out));
}

}  // namespace signlasso
