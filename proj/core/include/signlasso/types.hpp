#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace signlasso {

using Index = Eigen::Index;
using Counts = std::vector<std::int64_t>;

/// Coefficients with |b| <= kZeroTolerance are treated as zero when deriving
/// supports and signs.
inline constexpr double kZeroTolerance = 1e-10;

/// sign(x) in {-1, 0, +1} with the library-wide zero tolerance.
int sign_of(double x, double tolerance = kZeroTolerance) noexcept;

/// An n x p design with finite entries. Rows are the observations x_i, columns
/// the predictors x^(l).
class DesignMatrix {
 public:
  explicit DesignMatrix(Eigen::MatrixXd values);

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

  double row_norm(Index i) const;
  double col_norm(Index l) const;
  double max_row_norm() const;
  double max_col_norm() const;

 private:
  Eigen::MatrixXd values_;
};

/// A length-p coefficient vector together with support and sign views.
class CoefVector {
 public:
  CoefVector() = default;
  explicit CoefVector(Eigen::VectorXd values);
  static CoefVector zeros(Index p);

  Index size() const noexcept { return values_.size(); }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  double operator[](Index j) const { return values_(j); }

  /// Ascending indices j with |values_j| > tolerance.
  std::vector<Index> support(double tolerance = kZeroTolerance) const;
  Index support_size(double tolerance = kZeroTolerance) const;
  std::vector<int> signs(double tolerance = kZeroTolerance) const;

  /// Ascending complement of `support` in {0, ..., p-1}.
  static std::vector<Index> complement(std::span<const Index> support, Index p);

 private:
  Eigen::VectorXd values_;
};

bool same_signs(const CoefVector& a, const CoefVector& b,
                double tolerance = kZeroTolerance);

void validate_counts(std::span<const std::int64_t> y, Index n);

}  // namespace signlasso
