#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "signlasso/types.hpp"

namespace signlasso {

enum class DesignKind { kIidGaussian, kCorrelatedGaussian, kOrthogonalIsh };

std::string_view to_string(DesignKind kind) noexcept;
/// Throws BadGeneratorError for unknown names.
DesignKind parse_design_kind(std::string_view name);

/// Synthetic design recipe.
///
///   iid_gaussian         x_ij = scale * z_ij
///   correlated_gaussian  x_ij = scale * (sqrt(1 - rho) z_ij + sqrt(rho) z_i)
///                        (equicorrelation rho between columns)
///   orthogonal_ish       x_ij = +-scale; rows cycle through all 2^p sign
///                        patterns (a two-level full factorial), rows past the
///                        last complete cycle get independent random signs,
///                        and the row order is shuffled. X^T X = n scale^2 I
///                        exactly when n is a multiple of 2^p, and the columns
///                        stay orthogonal under any row weighting that depends
///                        only on other columns
///
/// Any row whose Euclidean norm exceeds m1 is rescaled onto the m1 sphere.
struct DesignGenerator {
  DesignKind kind = DesignKind::kCorrelatedGaussian;
  double rho = 0.0;
  double scale = 1.0;
  double m1 = 3.0;

  void validate() const;
};

DesignMatrix make_design(const DesignGenerator& generator, Index n, Index p, std::uint64_t seed);

/// Rows in one full factorial cycle of orthogonal_ish: 2^p, or 0 when p > 30
/// (then every row gets independent random signs).
Index factorial_cycle(Index p) noexcept;

}  // namespace signlasso
