#include "signlasso/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "signlasso/errors.hpp"

namespace signlasso {

int sign_of(double x, double tolerance) noexcept {
  if (x > tolerance) return 1;
  if (x < -tolerance) return -1;
  return 0;
}

DesignMatrix::DesignMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw DimensionError("design matrix must have at least one row and one column");
  }
  if (!values_.allFinite()) {
    throw DimensionError("design matrix contains non-finite entries");
  }
}

double DesignMatrix::row_norm(Index i) const { return values_.row(i).norm(); }

double DesignMatrix::col_norm(Index l) const { return values_.col(l).norm(); }

double DesignMatrix::max_row_norm() const {
  return values_.rowwise().norm().maxCoeff();
}

double DesignMatrix::max_col_norm() const {
  return values_.colwise().norm().maxCoeff();
}

CoefVector::CoefVector(Eigen::VectorXd values) : values_(std::move(values)) {
  if (!values_.allFinite()) {
    throw DimensionError("coefficient vector contains non-finite entries");
  }
}

CoefVector CoefVector::zeros(Index p) { return CoefVector(Eigen::VectorXd::Zero(p)); }

std::vector<Index> CoefVector::support(double tolerance) const {
  std::vector<Index> out;
  for (Index j = 0; j < values_.size(); ++j) {
    if (std::abs(values_(j)) > tolerance) out.push_back(j);
  }
  return out;
}

Index CoefVector::support_size(double tolerance) const {
  return static_cast<Index>(support(tolerance).size());
}

std::vector<int> CoefVector::signs(double tolerance) const {
  std::vector<int> out(static_cast<std::size_t>(values_.size()));
  for (Index j = 0; j < values_.size(); ++j) {
    out[static_cast<std::size_t>(j)] = sign_of(values_(j), tolerance);
  }
  return out;
}

std::vector<Index> CoefVector::complement(std::span<const Index> support, Index p) {
  std::vector<bool> in(static_cast<std::size_t>(p), false);
  for (Index j : support) {
    if (j < 0 || j >= p) throw DimensionError("support index out of range");
    in[static_cast<std::size_t>(j)] = true;
  }
  std::vector<Index> out;
  for (Index j = 0; j < p; ++j) {
    if (!in[static_cast<std::size_t>(j)]) out.push_back(j);
  }
  return out;
}

bool same_signs(const CoefVector& a, const CoefVector& b, double tolerance) {
  if (a.size() != b.size()) throw DimensionError("sign comparison of vectors of different length");
  return a.signs(tolerance) == b.signs(tolerance);
}

void validate_counts(std::span<const std::int64_t> y, Index n) {
  if (static_cast<Index>(y.size()) != n) {
    throw DimensionError("count vector has length " + std::to_string(y.size()) +
                         ", expected " + std::to_string(n));
  }
  if (std::any_of(y.begin(), y.end(), [](std::int64_t v) { return v < 0; })) {
    throw DimensionError("counts must be nonnegative");
  }
}

}  // namespace signlasso
