#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "signlasso/concentration.hpp"
#include "signlasso/conditions.hpp"
#include "signlasso/design.hpp"
#include "signlasso/lasso.hpp"
#include "signlasso/prelim.hpp"
#include "signlasso/types.hpp"

namespace signlasso {

/// How the expansion point beta_tilde is obtained in each replicate.
struct BetaTildeMode {
  enum class Kind { kMle, kOracle };
  Kind kind = Kind::kOracle;
  double scale = 1.0;  ///< oracle only: beta_tilde within scale/n of beta_star

  /// "mle" or "oracle:SCALE". Throws ConfigError on malformed input.
  static BetaTildeMode parse(const std::string& text);
  std::string to_string() const;
};

struct ExperimentConfig {
  /// Either a generator recipe or a CSV design file. With a file, the first n
  /// rows are used at sample size n.
  std::optional<DesignGenerator> generator;
  std::optional<std::string> design_file;

  CoefVector beta_star;
  std::vector<std::int64_t> n_grid;
  double c1 = 1.0;
  double c2 = 0.5;
  /// alpha_n = alpha_coef * n^((c2 + 1)/2)
  double alpha_coef = 1.0;
  int replicates = 100;
  std::uint64_t seed = 0;
  BetaTildeMode beta_tilde;
  double tau = 0.67;
  bool redraw_design = false;
  /// Abort when the population design violates the irrepresentable condition.
  bool enforce_irrepresentable = true;
  SolverConfig solver;
  MleConfig mle;
  AssumptionConstants constants;  ///< c1 and tau are mirrored from the fields above

  /// Throws ConfigError naming the offending field.
  void validate() const;

  double alpha_for(std::int64_t n) const;
};

/// Parses and validates the JSON experiment schema (see README). Errors carry
/// a JSON-pointer path to the offending field.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

struct ReplicateRecord {
  std::int64_t n = 0;
  int replicate = 0;
  std::uint64_t seed_used = 0;
  double alpha_n = 0.0;
  bool failed = false;
  std::string failure;
  bool sign_match = false;
  bool an_holds = false;
  bool bn_holds = false;
  double irrep_margin = 0.0;
  bool kkt_pass = false;
};

/// Per sample size: the condition report of the population design (beta_tilde
/// = beta_star), the descriptive tail bound and every replicate.
struct SizeBlock {
  std::int64_t n = 0;
  double alpha_n = 0.0;
  std::optional<ConditionReport> population_report;
  std::optional<XiTailReport> xi_tail;
  double c11_discrepancy_mean = 0.0;  ///< mean ||C11 - C11*||_2 over completed replicates
  std::vector<ReplicateRecord> replicates;
};

struct ExperimentResult {
  std::vector<SizeBlock> sizes;
};

/// Seed used by replicate r at sample size n.
std::uint64_t replicate_seed(std::uint64_t master, std::int64_t n, int replicate) noexcept;

/// Runs the whole sweep. Replicates are independent and are distributed over
/// `threads` workers; results are identical for any thread count. Replicate
/// errors are recorded as failures; configuration errors and a violated
/// irrepresentable condition (when enforced) throw.
ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 1);

struct SummaryRow {
  std::int64_t n = 0;
  double alpha_n = 0.0;
  int replicates = 0;
  int failures = 0;
  double recovery_rate = 0.0;
  double event_rate = 0.0;  ///< frequency of A_n and B_n jointly
  double mean_irrep_margin = 0.0;
  /// recovery_rate >= event_rate - 2/sqrt(completed replicates)
  bool dominance_ok = false;
};

std::vector<SummaryRow> summarize(const ExperimentResult& result);

}  // namespace signlasso
