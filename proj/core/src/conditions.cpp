#include "signlasso/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "signlasso/errors.hpp"

namespace signlasso {
namespace {

Eigen::MatrixXd symmetric_gram(const Eigen::MatrixXd& x, double n) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(x.cols(), x.cols());
  c.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  c = Eigen::MatrixXd(c.selfadjointView<Eigen::Lower>());
  return c / n;
}

Eigen::MatrixXd take(const Eigen::MatrixXd& m, const std::vector<Index>& rows,
                     const std::vector<Index>& cols) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
    }
  }
  return out;
}

Eigen::VectorXd take(const Eigen::VectorXd& v, const std::vector<Index>& idx) {
  Eigen::VectorXd out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = v(idx[i]);
  return out;
}

double max_singular_value(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double max_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

// Factorization of C11 shared by the condition report and the event
// diagnostics, so that both produce bit-identical d vectors.
class C11Solver {
 public:
  explicit C11Solver(const Eigen::MatrixXd& c11) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c11, Eigen::EigenvaluesOnly);
    lambda_min_ = es.eigenvalues().minCoeff();
    if (!(lambda_min_ > kSingularBlockThreshold)) {
      throw SingularBlockError("C11 is singular: smallest eigenvalue " +
                               std::to_string(lambda_min_) + " <= 1e-12");
    }
    llt_.compute(c11);
    if (llt_.info() != Eigen::Success) throw SingularBlockError("Cholesky factorization of C11 failed");
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }
  double lambda_min() const noexcept { return lambda_min_; }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double lambda_min_ = 0.0;
};

Eigen::VectorXd active_signs(const CoefVector& beta_star, const std::vector<Index>& active) {
  Eigen::VectorXd s(static_cast<Index>(active.size()));
  for (std::size_t i = 0; i < active.size(); ++i) {
    s(static_cast<Index>(i)) = static_cast<double>(sign_of(beta_star[active[i]]));
  }
  return s;
}

Eigen::VectorXd irrepresentable_vector(const GramBlocks& g, const C11Solver& solver,
                                       const Eigen::VectorXd& sign1) {
  if (g.inactive.empty()) return Eigen::VectorXd(0);
  return g.c21 * solver.solve(sign1);
}

double margin_from(const Eigen::VectorXd& d) {
  return d.size() == 0 ? 1.0 : 1.0 - d.cwiseAbs().maxCoeff();
}

void require_matching_support(const GramBlocks& g, const CoefVector& beta_star) {
  if (beta_star.size() != g.p()) throw DimensionError("beta_star length does not match the Gram matrix");
  if (beta_star.support() != g.active) {
    throw DimensionError("Gram partition does not match the support of beta_star");
  }
}

}  // namespace

Eigen::MatrixXd GramBlocks::reassemble() const {
  const Index dim = static_cast<Index>(active.size() + inactive.size());
  Eigen::MatrixXd out(dim, dim);
  const auto place = [&](const Eigen::MatrixXd& block, const std::vector<Index>& rows,
                         const std::vector<Index>& cols) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        out(rows[i], cols[j]) = block(static_cast<Index>(i), static_cast<Index>(j));
      }
    }
  };
  place(c11, active, active);
  place(c12, active, inactive);
  place(c21, inactive, active);
  place(c22, inactive, inactive);
  return out;
}

BlockedGram blocked_gram(const WorkingProblem& problem, std::span<const Index> support) {
  if (support.empty()) throw EmptySupportError("support must contain at least one index");
  std::vector<Index> active(support.begin(), support.end());
  std::sort(active.begin(), active.end());
  if (std::adjacent_find(active.begin(), active.end()) != active.end()) {
    throw DimensionError("support contains repeated indices");
  }

  BlockedGram bg;
  bg.n = problem.n();
  bg.inactive = CoefVector::complement(active, problem.p());
  bg.active = std::move(active);
  const double n = static_cast<double>(bg.n);
  bg.c = symmetric_gram(problem.x_work(), n);
  bg.c11 = take(bg.c, bg.active, bg.active);
  bg.c12 = take(bg.c, bg.active, bg.inactive);
  bg.c21 = take(bg.c, bg.inactive, bg.active);
  bg.c22 = take(bg.c, bg.inactive, bg.inactive);
  bg.w = problem.x_work().transpose() * problem.eps_tilde() / n;
  bg.w1 = take(bg.w, bg.active);
  bg.w2 = take(bg.w, bg.inactive);
  return bg;
}

bool AssumptionPasses::all() const noexcept {
  const auto ok = [](const std::optional<bool>& b) { return !b.has_value() || *b; };
  return ok(t1) && ok(t2) && ok(t3) && ok(t4) && irrepresentable;
}

ConditionReport check_assumptions(const DesignMatrix& x, const WorkingProblem& problem,
                                  const CoefVector& beta_star,
                                  const AssumptionConstants& constants) {
  if (x.rows() != problem.n() || x.cols() != problem.p() || beta_star.size() != problem.p()) {
    throw DimensionError("design, working problem and beta_star disagree in shape");
  }
  if (!(constants.c1 > 0.0 && constants.c1 <= 1.0)) throw DimensionError("c1 must lie in (0, 1]");
  const auto support = beta_star.support();
  const BlockedGram bg = blocked_gram(problem, support);
  const C11Solver solver(bg.c11);

  ConditionReport r;
  r.n = problem.n();
  r.p = problem.p();
  r.q = bg.q();
  r.constants = constants;
  r.lambda_min_c11 = solver.lambda_min();
  r.lambda_max_c12 = max_singular_value(bg.c12);
  r.lambda_max_c21 = max_singular_value(bg.c21);
  r.lambda_max_c22 = max_eigenvalue(bg.c22);
  r.row_norm_max = x.max_row_norm();
  r.col_norm_max = x.max_col_norm();

  double beta_min = std::abs(beta_star[bg.active.front()]);
  for (Index j : bg.active) beta_min = std::min(beta_min, std::abs(beta_star[j]));
  r.beta_min_scaled = std::pow(static_cast<double>(r.n), (1.0 - constants.c1) / 2.0) * beta_min;

  r.irrepresentable_vector = irrepresentable_vector(bg, solver, active_signs(beta_star, bg.active));
  r.irrep_margin = margin_from(r.irrepresentable_vector);

  auto& ps = r.passes;
  const auto& k = constants;
  if (k.m1 || k.m7) {
    ps.t1 = (!k.m1 || r.row_norm_max <= *k.m1) && (!k.m7 || r.col_norm_max <= *k.m7);
  }
  if (k.m2) ps.t2 = r.lambda_min_c11 >= *k.m2;
  if (k.m3 || k.m4 || k.m5) {
    // Empty blocks (q = p) satisfy any bound vacuously.
    ps.t3 = (!k.m3 || r.lambda_max_c12 <= *k.m3) && (!k.m4 || r.lambda_max_c21 <= *k.m4) &&
            (!k.m5 || r.lambda_max_c22 <= *k.m5);
  }
  if (k.m6) ps.t4 = r.beta_min_scaled >= *k.m6;
  ps.irrepresentable = r.irrepresentable_vector.size() == 0 ||
                       r.irrepresentable_vector.cwiseAbs().maxCoeff() <= 1.0 - k.tau;
  ps.tau_admissible = k.tau > 2.0 / 3.0;
  return r;
}

PropositionDiagnostics proposition_diagnostics(const BlockedGram& bg, const CoefVector& beta_star,
                                               const CoefVector& beta_tilde, double alpha) {
  require_matching_support(bg, beta_star);
  if (beta_tilde.size() != bg.p()) throw DimensionError("beta_tilde length does not match the Gram matrix");
  const C11Solver solver(bg.c11);
  const double scale = alpha / (2.0 * static_cast<double>(bg.n));

  PropositionDiagnostics out;
  const Eigen::VectorXd remainder = bg.c * (beta_star.values() - beta_tilde.values());
  out.r1 = take(remainder, bg.active);
  out.r2 = take(remainder, bg.inactive);

  const Eigen::VectorXd sign1 = active_signs(beta_star, bg.active);
  const Eigen::VectorXd beta1 = take(beta_star.values(), bg.active);
  out.xi = solver.solve(bg.w1);
  out.b = solver.solve(sign1);
  const Eigen::VectorXd c11_inv_r1 = solver.solve(out.r1);

  out.an_margin = beta1.cwiseAbs() - scale * out.b.cwiseAbs() - c11_inv_r1.cwiseAbs() -
                  out.xi.cwiseAbs();
  out.an_holds = (out.an_margin.array() > 0.0).all();

  out.d = irrepresentable_vector(bg, solver, sign1);
  if (bg.inactive.empty()) {
    out.zeta = Eigen::VectorXd(0);
    out.bn_margin = Eigen::VectorXd(0);
    out.bn_holds = true;
  } else {
    out.zeta = bg.c21 * out.xi - bg.w2;
    const Eigen::VectorXd rem = bg.c21 * c11_inv_r1 - out.r2;
    out.bn_margin = scale * (1.0 - out.d.cwiseAbs().array()).matrix() - rem.cwiseAbs() -
                    out.zeta.cwiseAbs();
    out.bn_holds = (out.bn_margin.array() >= 0.0).all();
  }

  const Eigen::VectorXd check1 = beta1 + out.xi - scale * out.b - c11_inv_r1;
  Eigen::VectorXd check = Eigen::VectorXd::Zero(bg.p());
  for (std::size_t i = 0; i < bg.active.size(); ++i) check(bg.active[i]) = check1(static_cast<Index>(i));
  out.beta_check = CoefVector(std::move(check));
  return out;
}

Eigen::VectorXd kkt_gram_form(const BlockedGram& bg, const CoefVector& beta_hat,
                              const CoefVector& beta_star, const CoefVector& beta_tilde) {
  if (beta_hat.size() != bg.p() || beta_star.size() != bg.p() || beta_tilde.size() != bg.p()) {
    throw DimensionError("coefficient vectors must match the Gram matrix");
  }
  return bg.c * (beta_hat.values() - beta_star.values()) - bg.w +
         bg.c * (beta_star.values() - beta_tilde.values());
}

KktReport kkt_check_gram_form(const BlockedGram& bg, const CoefVector& beta_hat,
                              const CoefVector& beta_star, const CoefVector& beta_tilde,
                              double alpha, double kkt_tol) {
  const Eigen::VectorXd v = kkt_gram_form(bg, beta_hat, beta_star, beta_tilde);
  const double half = alpha / (2.0 * static_cast<double>(bg.n));
  KktReport report;
  report.all_pass = true;
  for (Index i = 0; i < v.size(); ++i) {
    KktEntry e;
    e.index = i;
    e.gradient = v(i);
    e.active = beta_hat[i] != 0.0;
    if (e.active) {
      const double s = beta_hat[i] > 0.0 ? 1.0 : -1.0;
      e.violation = std::abs(v(i) + half * s);
    } else {
      e.slack = half - std::abs(v(i));
      e.violation = std::max(0.0, -e.slack);
    }
    e.pass = e.violation <= kkt_tol;
    report.all_pass = report.all_pass && e.pass;
    report.max_violation = std::max(report.max_violation, e.violation);
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace signlasso
