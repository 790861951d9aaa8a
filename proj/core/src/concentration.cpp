#include "signlasso/concentration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "signlasso/errors.hpp"
#include "signlasso/model.hpp"

namespace signlasso {
namespace {

using StirlingTable = std::array<std::array<std::uint64_t, kMaxMomentOrder + 1>, kMaxMomentOrder + 1>;

// {l, i} = i {l-1, i} + {l-1, i-1}, {0, 0} = 1.
StirlingTable build_stirling_table() {
  StirlingTable s{};
  s[0][0] = 1;
  for (int l = 1; l <= kMaxMomentOrder; ++l) {
    for (int i = 1; i <= l; ++i) {
      s[l][i] = static_cast<std::uint64_t>(i) * s[l - 1][i] + s[l - 1][i - 1];
    }
  }
  return s;
}

const StirlingTable& stirling_table() {
  static const StirlingTable table = build_stirling_table();
  return table;
}

void check_order(int ell) {
  if (ell < 1 || ell > kMaxMomentOrder) {
    throw RangeError("moment order " + std::to_string(ell) + " outside 1..20");
  }
}

}  // namespace

std::uint64_t stirling2(int ell, int i) {
  check_order(ell);
  if (i < 1 || i > ell) throw RangeError("stirling2 index i must satisfy 1 <= i <= ell");
  return stirling_table()[ell][i];
}

std::uint64_t stirling2_row_sum(int ell) {
  check_order(ell);
  std::uint64_t sum = 0;
  for (int i = 1; i <= ell; ++i) sum += stirling_table()[ell][i];
  return sum;
}

std::uint64_t factorial(int ell) {
  if (ell < 0 || ell > kMaxMomentOrder) throw RangeError("factorial argument outside 0..20");
  std::uint64_t f = 1;
  for (int k = 2; k <= ell; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

double poisson_raw_moment(double lambda, int ell) {
  check_order(ell);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw RangeError("lambda must be finite and > 0");
  double sum = 0.0;
  double power = 1.0;
  for (int i = 1; i <= ell; ++i) {
    power *= lambda;
    sum += power * static_cast<double>(stirling_table()[ell][i]);
  }
  return sum;
}

BernsteinParams::BernsteinParams(double nu_, double c_, double t_) : nu(nu_), c(c_), t(t_) {
  if (!(nu > 0.0) || !(c > 0.0) || !(t > 0.0) || !std::isfinite(nu) || !std::isfinite(c) ||
      !std::isfinite(t)) {
    throw DimensionError("Bernstein parameters nu, c, t must be finite and positive");
  }
}

double bernstein_tail(const BernsteinParams& params) {
  return 2.0 * std::exp(-params.t * params.t / (2.0 * (params.nu + params.c * params.t)));
}

BernsteinParams bernstein_params_for_scaled_counts(std::span<const double> g,
                                                   std::span<const double> lambda, double t) {
  if (g.size() != lambda.size() || g.empty()) throw DimensionError("weights and intensities must match");
  double nu = 0.0;
  double c = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!(lambda[k] > 0.0)) throw DimensionError("intensities must be positive");
    const double a = std::abs(g[k]) / std::sqrt(lambda[k]);
    const double lbar = std::max(1.0, lambda[k]);
    nu += 2.0 * a * a * lbar * lbar;
    c = std::max(c, a * lbar);
  }
  return BernsteinParams(nu, c, t);
}

PopulationGram population_gram(const DesignMatrix& x, const CoefVector& beta_star,
                               std::span<const Index> support) {
  const Eigen::VectorXd lambda = intensities(x, beta_star);
  const Eigen::VectorXd root = lambda.array().sqrt().matrix();
  // The y/eps parts are irrelevant for C*; reuse blocked_gram for the partition.
  const WorkingProblem star(root.asDiagonal() * x.values(), Eigen::VectorXd::Zero(x.rows()), lambda,
                            Eigen::VectorXd::Zero(x.rows()), beta_star);
  BlockedGram bg = blocked_gram(star, support);

  PopulationGram pop;
  static_cast<GramBlocks&>(pop) = std::move(static_cast<GramBlocks&>(bg));
  pop.lambda_star = lambda;
  pop.n = x.rows();
  return pop;
}

double c11_discrepancy(const BlockedGram& bg, const PopulationGram& pop) {
  if (bg.active != pop.active) throw DimensionError("Gram partitions differ");
  const Eigen::MatrixXd diff = bg.c11 - pop.c11;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd xi_noise_map(const DesignMatrix& x, const PopulationGram& pop) {
  if (x.rows() != pop.n || x.cols() != pop.p()) throw DimensionError("design does not match population Gram");
  Eigen::MatrixXd x1(x.rows(), pop.q());
  for (Index j = 0; j < pop.q(); ++j) x1.col(j) = x.values().col(pop.active[static_cast<std::size_t>(j)]);
  Eigen::LLT<Eigen::MatrixXd> llt(pop.c11);
  if (llt.info() != Eigen::Success) throw SingularBlockError("C11* is not positive definite");
  const Eigen::MatrixXd scaled = x1.transpose() * pop.lambda_star.array().sqrt().matrix().asDiagonal();
  return llt.solve(scaled) / static_cast<double>(pop.n);
}

std::string_view to_string(IntensitySource source) noexcept {
  return source == IntensitySource::kTruth ? "truth" : "working_weights";
}

LambdaBar lambda_bar(std::span<const double> lambda, IntensitySource source) {
  LambdaBar out;
  out.source = source;
  for (double l : lambda) out.value = std::max(out.value, l);
  return out;
}

XiTailReport xi_tail_report(const PopulationGram& pop, const LambdaBar& lbar, double c1) {
  XiTailReport r;
  r.lbar = lbar;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pop.c11, Eigen::EigenvaluesOnly);
  r.m2_prime = es.eigenvalues().minCoeff();
  if (!(r.m2_prime > kSingularBlockThreshold)) throw SingularBlockError("C11* is singular");
  const double n = static_cast<double>(pop.n);
  r.nu = 2.0 * lbar.value / r.m2_prime;
  r.c = std::sqrt(lbar.value / (n * r.m2_prime));
  r.t = std::pow(n, (c1 - 1.0) / 2.0);
  r.tail_bound = bernstein_tail(BernsteinParams(r.nu, r.c, r.t));
  return r;
}

}  // namespace signlasso
