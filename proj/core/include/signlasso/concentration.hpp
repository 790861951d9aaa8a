#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "signlasso/conditions.hpp"
#include "signlasso/types.hpp"

namespace signlasso {

/// Largest ell for which the combinatorial helpers stay exact in 64-bit
/// unsigned arithmetic (20! < 2^64).
inline constexpr int kMaxMomentOrder = 20;

/// Stirling number of the second kind {ell, i}, 1 <= i <= ell <= 20.
std::uint64_t stirling2(int ell, int i);

/// sum_{i=1}^{ell} {ell, i}, the Bell number B_ell.
std::uint64_t stirling2_row_sum(int ell);

/// ell! for 0 <= ell <= 20.
std::uint64_t factorial(int ell);

/// E[Y^ell] for Y ~ Poisson(lambda): sum_{i=1}^{ell} lambda^i {ell, i}.
double poisson_raw_moment(double lambda, int ell);

/// Parameters of Bernstein's inequality for independent X_1..X_n with
///   sum E[X_k^2] <= nu  and  sum E|X_k|^l <= (l!/2) nu c^(l-2), l >= 3.
struct BernsteinParams {
  double nu = 1.0;
  double c = 1.0;
  double t = 1.0;

  BernsteinParams(double nu_, double c_, double t_);
};

/// 2 exp(-t^2 / (2 (nu + c t))), the two-sided tail bound on |sum (X_k - E X_k)| >= t.
double bernstein_tail(const BernsteinParams& params);

/// Valid (nu, c) for X_k = g_k Y_k / sqrt(lambda_k) with Y_k ~ Poisson(lambda_k)
/// independent. With a_k = |g_k| / sqrt(lambda_k) and lbar_k = max(1, lambda_k):
///   nu = 2 sum a_k^2 lbar_k^2,  c = max_k a_k lbar_k,
/// which dominate the second and higher absolute moments through
/// E[Y^l] <= lbar^l B_l <= lbar^l l!.
BernsteinParams bernstein_params_for_scaled_counts(std::span<const double> g,
                                                   std::span<const double> lambda, double t);

/// C* = X*^T X* / n with X* = diag(sqrt(lambda*)) X, partitioned like
/// BlockedGram.
struct PopulationGram : GramBlocks {
  Eigen::VectorXd lambda_star;
  Index n = 0;
};

PopulationGram population_gram(const DesignMatrix& x, const CoefVector& beta_star,
                               std::span<const Index> support);

/// Spectral norm ||C11 - C11*||_2.
double c11_discrepancy(const BlockedGram& bg, const PopulationGram& pop);

/// Noise-to-coefficient map G = n^{-1} (C11*)^{-1} X_1^T diag(sqrt(lambda*)),
/// q x n. Row j gives xi-type noise as sum_k G_jk (Y_k - lambda*_k)/sqrt(lambda*_k).
Eigen::MatrixXd xi_noise_map(const DesignMatrix& x, const PopulationGram& pop);

enum class IntensitySource { kTruth, kWorkingWeights };
std::string_view to_string(IntensitySource source) noexcept;

struct LambdaBar {
  double value = 1.0;  ///< max(1, max_k lambda_k)
  IntensitySource source = IntensitySource::kTruth;
};

LambdaBar lambda_bar(std::span<const double> lambda, IntensitySource source);

/// Descriptive tail bound for the xi noise term using population constants:
///   nu = 2 lbar / M2',  c = sqrt(lbar / (n M2')),  t = n^((c1 - 1)/2)
/// where M2' = lambda_min(C11*). Reported for inspection, never used to gate
/// the solver.
struct XiTailReport {
  LambdaBar lbar;
  double m2_prime = 0.0;
  double nu = 0.0;
  double c = 0.0;
  double t = 0.0;
  double tail_bound = 0.0;
};

XiTailReport xi_tail_report(const PopulationGram& pop, const LambdaBar& lbar, double c1);

}  // namespace signlasso
