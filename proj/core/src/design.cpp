#include "signlasso/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "signlasso/errors.hpp"
#include "signlasso/rng.hpp"

namespace signlasso {
namespace {

// Largest p for which a full factorial cycle is enumerated explicitly.
constexpr Index kMaxFactorialFactors = 30;

void clip_rows(Eigen::MatrixXd& x, double m1) {
  for (Index i = 0; i < x.rows(); ++i) {
    const double norm = x.row(i).norm();
    if (norm > m1) x.row(i) *= m1 / norm;
  }
}

}  // namespace

std::string_view to_string(DesignKind kind) noexcept {
  switch (kind) {
    case DesignKind::kIidGaussian: return "iid_gaussian";
    case DesignKind::kCorrelatedGaussian: return "correlated_gaussian";
    case DesignKind::kOrthogonalIsh: return "orthogonal_ish";
  }
  return "unknown";
}

DesignKind parse_design_kind(std::string_view name) {
  if (name == "iid_gaussian") return DesignKind::kIidGaussian;
  if (name == "correlated_gaussian") return DesignKind::kCorrelatedGaussian;
  if (name == "orthogonal_ish") return DesignKind::kOrthogonalIsh;
  throw BadGeneratorError("unknown design generator '" + std::string(name) + "'");
}

void DesignGenerator::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw BadGeneratorError("scale must be finite and > 0");
  if (!(m1 > 0.0) || !std::isfinite(m1)) throw BadGeneratorError("m1 must be finite and > 0");
  if (kind == DesignKind::kCorrelatedGaussian && !(rho >= 0.0 && rho < 1.0)) {
    throw BadGeneratorError("rho must lie in [0, 1)");
  }
}

Index factorial_cycle(Index p) noexcept {
  if (p < 1 || p > kMaxFactorialFactors) return 0;
  return Index{1} << p;
}

DesignMatrix make_design(const DesignGenerator& generator, Index n, Index p, std::uint64_t seed) {
  generator.validate();
  if (n < 1 || p < 1) throw BadGeneratorError("design needs n >= 1 and p >= 1");
  Rng rng(seed);
  Eigen::MatrixXd x(n, p);

  switch (generator.kind) {
    case DesignKind::kIidGaussian:
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) x(i, j) = generator.scale * rng.normal();
      break;
    case DesignKind::kCorrelatedGaussian: {
      const double own = std::sqrt(1.0 - generator.rho);
      const double shared = std::sqrt(generator.rho);
      for (Index i = 0; i < n; ++i) {
        const double common = rng.normal();
        for (Index j = 0; j < p; ++j) {
          x(i, j) = generator.scale * (own * rng.normal() + shared * common);
        }
      }
      break;
    }
    case DesignKind::kOrthogonalIsh: {
      const Index cycle = factorial_cycle(p);
      const Index complete = cycle > 0 ? (n / cycle) * cycle : 0;
      for (Index i = 0; i < complete; ++i) {
        const auto pattern = static_cast<std::uint64_t>(i % cycle);
        for (Index j = 0; j < p; ++j) x(i, j) = ((pattern >> j) & 1U) ? -generator.scale : generator.scale;
      }
      for (Index i = complete; i < n; ++i) {
        for (Index j = 0; j < p; ++j) x(i, j) = rng.uniform() < 0.5 ? -generator.scale : generator.scale;
      }
      // Fisher-Yates with our own uniform draws for portability.
      for (Index k = n; k > 1; --k) {
        const auto pick = std::min(static_cast<Index>(rng.uniform() * static_cast<double>(k)), k - 1);
        if (pick != k - 1) x.row(k - 1).swap(x.row(pick));
      }
      break;
    }
  }

  clip_rows(x, generator.m1);
  return DesignMatrix(std::move(x));
}

}  // namespace signlasso
