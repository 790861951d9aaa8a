#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

namespace signlasso::testing {

WorkingProblem plain_problem(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Index n = x.rows();
  return WorkingProblem(x, y, Eigen::VectorXd::Ones(n), y, CoefVector::zeros(x.cols()));
}

Eigen::MatrixXd gaussian_matrix(Rng& rng, Index n, Index p, double scale) {
  Eigen::MatrixXd m(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) m(i, j) = scale * rng.normal();
  return m;
}

Eigen::VectorXd gaussian_vector(Rng& rng, Index n, double scale) {
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = scale * rng.normal();
  return v;
}

namespace {

struct Quadratic {
  Eigen::MatrixXd g;
  Eigen::VectorXd xty;
  double yty = 0.0;

  Quadratic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
      : g(x.transpose() * x), xty(x.transpose() * y), yty(y.squaredNorm()) {}

  double operator()(const Eigen::VectorXd& b, double alpha) const {
    return yty - 2.0 * b.dot(xty) + b.dot(g * b) + alpha * b.lpNorm<1>();
  }
};

}  // namespace

double lasso_objective_direct(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& b, double alpha) {
  double rss = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    double fitted = 0.0;
    for (Index j = 0; j < x.cols(); ++j) fitted += x(i, j) * b(j);
    rss += (y(i) - fitted) * (y(i) - fitted);
  }
  double l1 = 0.0;
  for (Index j = 0; j < b.size(); ++j) l1 += std::abs(b(j));
  return rss + alpha * l1;
}

GridMinimum dense_grid_minimize_2d(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                                   double bound, double step) {
  const Quadratic f(x, y);
  const long count = std::lround(2.0 * bound / step);
  GridMinimum best{Eigen::VectorXd::Zero(2), std::numeric_limits<double>::infinity()};
  Eigen::VectorXd b(2);
  for (long i = 0; i <= count; ++i) {
    b(0) = -bound + step * static_cast<double>(i);
    for (long k = 0; k <= count; ++k) {
      b(1) = -bound + step * static_cast<double>(k);
      const double v = f(b, alpha);
      if (v < best.objective) {
        best.objective = v;
        best.point = b;
      }
    }
  }
  return best;
}

GridMinimum zoom_grid_minimize(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                               double bound, int points, double resolution) {
  const Quadratic f(x, y);
  const Index p = x.cols();
  Eigen::VectorXd centre = Eigen::VectorXd::Zero(p);
  double half = bound;
  GridMinimum best{centre, f(centre, alpha)};
  std::vector<int> idx(static_cast<std::size_t>(p));
  Eigen::VectorXd b(p);
  while (half > resolution) {
    const double step = 2.0 * half / (points - 1);
    std::fill(idx.begin(), idx.end(), 0);
    for (;;) {
      for (Index j = 0; j < p; ++j) b(j) = centre(j) - half + step * idx[static_cast<std::size_t>(j)];
      const double v = f(b, alpha);
      if (v < best.objective) {
        best.objective = v;
        best.point = b;
      }
      Index j = 0;
      while (j < p && ++idx[static_cast<std::size_t>(j)] == points) idx[static_cast<std::size_t>(j++)] = 0;
      if (j == p) break;
    }
    centre = best.point;
    half = 8.0 * step;
  }
  best.objective = lasso_objective_direct(x, y, best.point, alpha);
  return best;
}

double scalar_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, const Counts& y) {
  double total = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    double eta = 0.0;
    for (Index j = 0; j < x.cols(); ++j) eta += x(i, j) * beta(j);
    const double yi = static_cast<double>(y[static_cast<std::size_t>(i)]);
    total += yi * eta - std::exp(eta) - std::lgamma(yi + 1.0);
  }
  return total;
}

Eigen::VectorXd central_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                            const Eigen::VectorXd& at, double h) {
  Eigen::VectorXd g(at.size());
  for (Index j = 0; j < at.size(); ++j) {
    Eigen::VectorXd up = at;
    Eigen::VectorXd down = at;
    up(j) += h;
    down(j) -= h;
    g(j) = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

std::uint64_t count_set_partitions(int n, int k) {
  if (n == 0) return k == 0 ? 1 : 0;
  // a[i] is the block of element i; a[0] = 0 and a[i] <= 1 + max(a[0..i-1]).
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
  std::uint64_t count = 0;
  for (;;) {
    if (prefix_max[static_cast<std::size_t>(n - 1)] + 1 == k) ++count;
    int i = n - 1;
    while (i > 0 && a[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) break;
    ++a[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      a[static_cast<std::size_t>(j)] = 0;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(j - 1)];
    }
  }
  return count;
}

std::vector<double> isotonic_fit(const std::vector<double>& y) {
  std::vector<double> value;
  std::vector<int> weight;
  for (double v : y) {
    value.push_back(v);
    weight.push_back(1);
    while (value.size() > 1 && value[value.size() - 2] > value.back()) {
      const double w1 = weight[weight.size() - 2];
      const double w2 = weight.back();
      const double merged = (w1 * value[value.size() - 2] + w2 * value.back()) / (w1 + w2);
      value.pop_back();
      weight.pop_back();
      value.back() = merged;
      weight.back() += static_cast<int>(w2);
    }
  }
  std::vector<double> out;
  for (std::size_t b = 0; b < value.size(); ++b) out.insert(out.end(), static_cast<std::size_t>(weight[b]), value[b]);
  return out;
}

std::string scratch_dir(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("signlasso_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace signlasso::testing
