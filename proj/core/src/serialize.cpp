#include "signlasso/serialize.hpp"

#include <cmath>

namespace signlasso {
namespace {

using nlohmann::json;

json vec(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string version() { return "0.1.0"; }

json to_json(const CoefVector& beta) { return vec(beta.values()); }

json to_json(const KktReport& report) {
  json entries = json::array();
  for (const KktEntry& e : report.entries) {
    entries.push_back({{"index", e.index},
                       {"active", e.active},
                       {"gradient", e.gradient},
                       {"violation", e.violation},
                       {"slack", e.slack},
                       {"pass", e.pass}});
  }
  return {{"entries", entries}, {"max_violation", report.max_violation}, {"all_pass", report.all_pass}};
}

json to_json(const FitResult& fit) {
  return {{"beta_hat", to_json(fit.beta_hat)},
          {"support", fit.beta_hat.support()},
          {"signs", fit.beta_hat.signs()},
          {"sweeps_used", fit.sweeps_used},
          {"converged", fit.converged},
          {"objective", fit.objective},
          {"kkt", to_json(fit.kkt_report)}};
}

json to_json(const ConditionReport& r) {
  const auto& k = r.constants;
  const auto& ps = r.passes;
  return {
      {"n", r.n},
      {"p", r.p},
      {"q", r.q},
      {"observed",
       {{"lambda_min_C11", r.lambda_min_c11},
        {"lambda_max_C12", r.lambda_max_c12},
        {"lambda_max_C21", r.lambda_max_c21},
        {"lambda_max_C22", r.lambda_max_c22},
        {"row_norm_max", r.row_norm_max},
        {"col_norm_max", r.col_norm_max},
        {"beta_min_scaled", r.beta_min_scaled},
        {"irrep_margin", r.irrep_margin},
        {"irrepresentable_vector", vec(r.irrepresentable_vector)}}},
      {"constants",
       {{"M1", optional_json(k.m1)},
        {"M2", optional_json(k.m2)},
        {"M3", optional_json(k.m3)},
        {"M4", optional_json(k.m4)},
        {"M5", optional_json(k.m5)},
        {"M6", optional_json(k.m6)},
        {"M7", optional_json(k.m7)},
        {"c1", k.c1},
        {"tau", k.tau}}},
      {"passes",
       {{"T1", optional_json(ps.t1)},
        {"T2", optional_json(ps.t2)},
        {"T3", optional_json(ps.t3)},
        {"T4", optional_json(ps.t4)},
        {"irrepresentable", ps.irrepresentable},
        {"tau_admissible", ps.tau_admissible},
        {"all", ps.all()}}},
  };
}

json to_json(const PropositionDiagnostics& d) {
  return {{"R1", vec(d.r1)},
          {"R2", vec(d.r2)},
          {"xi", vec(d.xi)},
          {"b", vec(d.b)},
          {"zeta", vec(d.zeta)},
          {"d", vec(d.d)},
          {"An_margin", vec(d.an_margin)},
          {"Bn_margin", vec(d.bn_margin)},
          {"An_holds", d.an_holds},
          {"Bn_holds", d.bn_holds},
          {"beta_check", to_json(d.beta_check)}};
}

json to_json(const XiTailReport& r) {
  return {{"lambda_bar", r.lbar.value},
          {"lambda_bar_source", std::string(to_string(r.lbar.source))},
          {"M2_prime", r.m2_prime},
          {"nu", r.nu},
          {"c", r.c},
          {"t", r.t},
          {"tail_bound", r.tail_bound}};
}

json experiment_report(const ExperimentConfig& config, const ExperimentResult& result) {
  json sizes = json::array();
  for (const SizeBlock& b : result.sizes) {
    int failures = 0;
    json messages = json::array();
    for (const ReplicateRecord& r : b.replicates) {
      if (!r.failed) continue;
      ++failures;
      messages.push_back({{"replicate", r.replicate}, {"reason", r.failure}});
    }
    sizes.push_back({{"n", b.n},
                     {"alpha_n", b.alpha_n},
                     {"condition_report", b.population_report ? to_json(*b.population_report) : json(nullptr)},
                     {"xi_tail", b.xi_tail ? to_json(*b.xi_tail) : json(nullptr)},
                     {"c11_discrepancy_mean", finite_or_null(b.c11_discrepancy_mean)},
                     {"failures", failures},
                     {"failure_log", messages}});
  }
  return {{"version", version()}, {"config", to_json(config)}, {"sizes", sizes}};
}

}  // namespace signlasso
