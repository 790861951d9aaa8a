#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "signlasso/errors.hpp"
#include "signlasso/types.hpp"

using namespace signlasso;

TEST(SignOf, UsesZeroTolerance) {
  EXPECT_EQ(sign_of(2.0), 1);
  EXPECT_EQ(sign_of(-0.5), -1);
  EXPECT_EQ(sign_of(0.0), 0);
  EXPECT_EQ(sign_of(1e-11), 0);
  EXPECT_EQ(sign_of(-1e-11), 0);
  EXPECT_EQ(sign_of(2e-10), 1);
}

TEST(DesignMatrix, NormsMatchDirectComputation) {
  Eigen::MatrixXd m(2, 3);
  m << 3, 4, 0,
       0, 0, -2;
  const DesignMatrix x(m);
  EXPECT_EQ(x.rows(), 2);
  EXPECT_EQ(x.cols(), 3);
  EXPECT_DOUBLE_EQ(x.row_norm(0), 5.0);
  EXPECT_DOUBLE_EQ(x.row_norm(1), 2.0);
  EXPECT_DOUBLE_EQ(x.col_norm(0), 3.0);
  EXPECT_DOUBLE_EQ(x.col_norm(2), 2.0);
  EXPECT_DOUBLE_EQ(x.max_row_norm(), 5.0);
  EXPECT_DOUBLE_EQ(x.max_col_norm(), 4.0);
}

TEST(DesignMatrix, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(DesignMatrix(Eigen::MatrixXd(0, 2)), DimensionError);
  EXPECT_THROW(DesignMatrix(Eigen::MatrixXd(2, 0)), DimensionError);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(DesignMatrix{m}, DimensionError);
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(DesignMatrix{m}, DimensionError);
}

TEST(CoefVector, SupportAndSigns) {
  Eigen::VectorXd v(5);
  v << 1.0, 0.0, -2.0, 1e-12, -1e-3;
  const CoefVector b(v);
  EXPECT_EQ(b.support(), (std::vector<Index>{0, 2, 4}));
  EXPECT_EQ(b.support_size(), 3);
  EXPECT_EQ(b.signs(), (std::vector<int>{1, 0, -1, 0, -1}));
  EXPECT_EQ(CoefVector::complement(b.support(), 5), (std::vector<Index>{1, 3}));
}

TEST(CoefVector, ZerosAndComplementOfEverything) {
  const CoefVector z = CoefVector::zeros(4);
  EXPECT_EQ(z.size(), 4);
  EXPECT_TRUE(z.support().empty());
  const std::vector<Index> all{0, 1, 2};
  EXPECT_TRUE(CoefVector::complement(all, 3).empty());
  const std::vector<Index> bad{5};
  EXPECT_THROW(CoefVector::complement(bad, 3), DimensionError);
}

TEST(CoefVector, RejectsNonFinite) {
  Eigen::VectorXd v(2);
  v << 1.0, std::nan("");
  EXPECT_THROW(CoefVector{v}, DimensionError);
}

TEST(SameSigns, ComparesSignPatterns) {
  Eigen::VectorXd a(3), b(3), c(3);
  a << 1.0, 0.0, -3.0;
  b << 0.2, 1e-13, -0.1;
  c << 0.2, 1e-3, -0.1;
  EXPECT_TRUE(same_signs(CoefVector(a), CoefVector(b)));
  EXPECT_FALSE(same_signs(CoefVector(a), CoefVector(c)));
  EXPECT_THROW(same_signs(CoefVector(a), CoefVector::zeros(2)), DimensionError);
}

TEST(ValidateCounts, ChecksLengthAndSign) {
  const Counts ok{0, 3, 1};
  EXPECT_NO_THROW(validate_counts(ok, 3));
  EXPECT_THROW(validate_counts(ok, 2), DimensionError);
  const Counts negative{0, -1, 1};
  EXPECT_THROW(validate_counts(negative, 3), DimensionError);
}
