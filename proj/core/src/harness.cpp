#include "signlasso/harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <thread>

#include "signlasso/csv_io.hpp"
#include "signlasso/errors.hpp"
#include "signlasso/model.hpp"
#include "signlasso/rng.hpp"
#include "signlasso/working_response.hpp"

namespace signlasso {
namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kCountsStream = 1;
constexpr std::uint64_t kPerturbStream = 2;
constexpr std::uint64_t kRedrawStream = 3;
constexpr std::uint64_t kDesignStream = 0x64657369676eULL;

using nlohmann::json;

template <class T>
T field(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "/" + key, "has the wrong type");
  }
}

template <class T>
T required(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + "/" + key, "is required");
  return field<T>(j, key, path, T{});
}

DesignMatrix load_design_rows(const std::string& file, std::int64_t n, Index p) {
  const Eigen::MatrixXd all = read_matrix_csv(file);
  if (all.cols() != p) throw ConfigError("/design/file", "column count does not match beta_star");
  if (all.rows() < n) throw ConfigError("/design/file", "has fewer rows than n = " + std::to_string(n));
  return DesignMatrix(all.topRows(n));
}

DesignMatrix design_for(const ExperimentConfig& cfg, std::int64_t n, std::uint64_t seed) {
  if (cfg.design_file) return load_design_rows(*cfg.design_file, n, cfg.beta_star.size());
  return make_design(*cfg.generator, n, cfg.beta_star.size(), seed);
}

struct SizeContext {
  std::int64_t n = 0;
  double alpha = 0.0;
  std::optional<DesignMatrix> design;
  std::optional<PopulationGram> population;
};

ReplicateRecord run_replicate(const ExperimentConfig& cfg, const SizeContext& ctx, int r,
                              double& c11_gap) {
  ReplicateRecord rec;
  rec.n = ctx.n;
  rec.replicate = r;
  rec.alpha_n = ctx.alpha;
  rec.seed_used = replicate_seed(cfg.seed, ctx.n, r);
  c11_gap = std::nan("");

  try {
    std::optional<DesignMatrix> own_design;
    std::optional<PopulationGram> own_population;
    if (cfg.redraw_design && !cfg.design_file) {
      own_design = make_design(*cfg.generator, ctx.n, cfg.beta_star.size(),
                               derive_seed(rec.seed_used, {kRedrawStream}));
      own_population = population_gram(*own_design, cfg.beta_star, cfg.beta_star.support());
    }
    const DesignMatrix& x = own_design ? *own_design : *ctx.design;
    const PopulationGram& pop = own_population ? *own_population : *ctx.population;

    const PoissonSample sample = simulate(x, cfg.beta_star, derive_seed(rec.seed_used, {kCountsStream}));

    CoefVector beta_tilde;
    if (cfg.beta_tilde.kind == BetaTildeMode::Kind::kOracle) {
      beta_tilde = oracle_perturbation(cfg.beta_star, ctx.n, cfg.beta_tilde.scale,
                                       derive_seed(rec.seed_used, {kPerturbStream}));
    } else {
      MleResult mle = fit_mle(x, sample.counts, cfg.mle);
      if (!mle.converged) {
        rec.failed = true;
        rec.failure = "preliminary MLE did not converge";
        return rec;
      }
      beta_tilde = std::move(mle.beta);
    }

    const WorkingProblem problem = build_working_problem(x, beta_tilde, sample.counts);
    SolverConfig solver = cfg.solver;
    solver.alpha = ctx.alpha;
    const FitResult fitted = fit(problem, solver);

    const BlockedGram bg = blocked_gram(problem, cfg.beta_star.support());
    const PropositionDiagnostics diag = proposition_diagnostics(bg, cfg.beta_star, beta_tilde, ctx.alpha);

    rec.sign_match = same_signs(fitted.beta_hat, cfg.beta_star);
    rec.kkt_pass = fitted.kkt_report.all_pass;
    rec.an_holds = diag.an_holds;
    rec.bn_holds = diag.bn_holds;
    rec.irrep_margin = diag.d.size() == 0 ? 1.0 : 1.0 - diag.d.cwiseAbs().maxCoeff();
    c11_gap = c11_discrepancy(bg, pop);
    if (!fitted.converged) {
      rec.failed = true;
      rec.failure = "coordinate descent hit max_sweeps";
    }
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.failure = e.what();
  }
  return rec;
}

}  // namespace

BetaTildeMode BetaTildeMode::parse(const std::string& text) {
  BetaTildeMode mode;
  if (text == "mle") {
    mode.kind = Kind::kMle;
    return mode;
  }
  const std::string prefix = "oracle";
  if (text.rfind(prefix, 0) != 0) throw ConfigError("/beta_tilde", "expected 'mle' or 'oracle:SCALE'");
  mode.kind = Kind::kOracle;
  mode.scale = 1.0;
  if (text.size() > prefix.size()) {
    if (text[prefix.size()] != ':') throw ConfigError("/beta_tilde", "expected 'mle' or 'oracle:SCALE'");
    const char* first = text.data() + prefix.size() + 1;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, mode.scale);
    if (ec != std::errc() || ptr != last || !(mode.scale >= 0.0) || !std::isfinite(mode.scale)) {
      throw ConfigError("/beta_tilde", "oracle scale must be a finite number >= 0");
    }
  }
  return mode;
}

std::string BetaTildeMode::to_string() const {
  if (kind == Kind::kMle) return "mle";
  return "oracle:" + format_double(scale);
}

void ExperimentConfig::validate() const {
  if (generator.has_value() == design_file.has_value()) {
    throw ConfigError("/design", "specify exactly one of a generator or a file");
  }
  if (generator) {
    try {
      generator->validate();
    } catch (const BadGeneratorError& e) {
      throw ConfigError("/design", e.what());
    }
  }
  if (beta_star.size() < 1) throw ConfigError("/beta_star", "must be a non-empty array");
  if (beta_star.support_size() < 1) throw ConfigError("/beta_star", "must have at least one nonzero entry");
  if (n_grid.empty()) throw ConfigError("/n_grid", "must be a non-empty array");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ConfigError("/n_grid/" + std::to_string(i), "must be a positive integer");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw ConfigError("/n_grid/" + std::to_string(i), "n_grid must be strictly increasing");
    }
  }
  if (!(c1 > 0.0 && c1 <= 1.0)) throw ConfigError("/c1", "must satisfy 0 < c1 <= 1");
  if (!(c2 > 0.0 && c2 < c1)) throw ConfigError("/c2", "must satisfy 0 < c2 < c1 <= 1");
  if (!(alpha_coef >= 0.0) || !std::isfinite(alpha_coef)) {
    throw ConfigError("/alpha_coef", "must be finite and >= 0");
  }
  if (replicates < 1) throw ConfigError("/replicates", "must be >= 1");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("/tau", "must lie in (0, 1]");
  try {
    solver.validate();
  } catch (const Error& e) {
    throw ConfigError("/solver", e.what());
  }
  try {
    mle.validate();
  } catch (const Error& e) {
    throw ConfigError("/mle", e.what());
  }
}

double ExperimentConfig::alpha_for(std::int64_t n) const {
  return alpha_coef * std::pow(static_cast<double>(n), (c2 + 1.0) / 2.0);
}

ExperimentConfig parse_experiment_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "experiment config must be a JSON object");
  ExperimentConfig cfg;

  if (!j.contains("design") || !j.at("design").is_object()) {
    throw ConfigError("/design", "is required and must be an object");
  }
  const json& d = j.at("design");
  if (d.contains("file") && d.contains("generator")) {
    throw ConfigError("/design", "specify exactly one of a generator or a file");
  }
  if (d.contains("file")) {
    cfg.design_file = field<std::string>(d, "file", "/design", "");
  } else {
    DesignGenerator gen;
    try {
      gen.kind = parse_design_kind(required<std::string>(d, "generator", "/design"));
    } catch (const BadGeneratorError& e) {
      throw ConfigError("/design/generator", e.what());
    }
    gen.rho = field<double>(d, "rho", "/design", 0.0);
    gen.scale = field<double>(d, "scale", "/design", 1.0);
    gen.m1 = field<double>(d, "m1", "/design", 3.0);
    cfg.generator = gen;
  }

  const auto beta = required<std::vector<double>>(j, "beta_star", "");
  try {
    cfg.beta_star = CoefVector(Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Index>(beta.size())));
  } catch (const Error& e) {
    throw ConfigError("/beta_star", e.what());
  }
  cfg.n_grid = required<std::vector<std::int64_t>>(j, "n_grid", "");
  cfg.c1 = field<double>(j, "c1", "", cfg.c1);
  cfg.c2 = field<double>(j, "c2", "", cfg.c2);
  cfg.alpha_coef = field<double>(j, "alpha_coef", "", cfg.alpha_coef);
  cfg.replicates = field<int>(j, "replicates", "", cfg.replicates);
  cfg.seed = field<std::uint64_t>(j, "seed", "", cfg.seed);
  cfg.beta_tilde = BetaTildeMode::parse(field<std::string>(j, "beta_tilde", "", "oracle:1"));
  cfg.tau = field<double>(j, "tau", "", cfg.tau);
  cfg.redraw_design = field<bool>(j, "redraw_design", "", cfg.redraw_design);
  cfg.enforce_irrepresentable = field<bool>(j, "enforce_irrepresentable", "", cfg.enforce_irrepresentable);

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    cfg.solver.max_sweeps = field<int>(s, "max_sweeps", "/solver", cfg.solver.max_sweeps);
    cfg.solver.tol = field<double>(s, "tol", "/solver", cfg.solver.tol);
    cfg.solver.kkt_tol = field<double>(s, "kkt_tol", "/solver", cfg.solver.kkt_tol);
  }
  if (j.contains("mle")) {
    const json& m = j.at("mle");
    cfg.mle.max_iter = field<int>(m, "max_iter", "/mle", cfg.mle.max_iter);
    cfg.mle.grad_tol = field<double>(m, "grad_tol", "/mle", cfg.mle.grad_tol);
    cfg.mle.step_halving_max = field<int>(m, "step_halving_max", "/mle", cfg.mle.step_halving_max);
  }
  if (j.contains("constants")) {
    const json& k = j.at("constants");
    const auto opt = [&](const char* key) -> std::optional<double> {
      if (!k.contains(key)) return std::nullopt;
      return field<double>(k, key, "/constants", 0.0);
    };
    cfg.constants.m1 = opt("M1");
    cfg.constants.m2 = opt("M2");
    cfg.constants.m3 = opt("M3");
    cfg.constants.m4 = opt("M4");
    cfg.constants.m5 = opt("M5");
    cfg.constants.m6 = opt("M6");
    cfg.constants.m7 = opt("M7");
  }
  cfg.constants.c1 = cfg.c1;
  cfg.constants.tau = cfg.tau;
  cfg.validate();
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.generator) {
    j["design"] = {{"generator", std::string(to_string(cfg.generator->kind))},
                   {"rho", cfg.generator->rho},
                   {"scale", cfg.generator->scale},
                   {"m1", cfg.generator->m1}};
  } else {
    j["design"] = {{"file", *cfg.design_file}};
  }
  j["beta_star"] = std::vector<double>(cfg.beta_star.values().begin(), cfg.beta_star.values().end());
  j["n_grid"] = cfg.n_grid;
  j["c1"] = cfg.c1;
  j["c2"] = cfg.c2;
  j["alpha_coef"] = cfg.alpha_coef;
  j["replicates"] = cfg.replicates;
  j["seed"] = cfg.seed;
  j["beta_tilde"] = cfg.beta_tilde.to_string();
  j["tau"] = cfg.tau;
  j["redraw_design"] = cfg.redraw_design;
  j["enforce_irrepresentable"] = cfg.enforce_irrepresentable;
  j["solver"] = {{"max_sweeps", cfg.solver.max_sweeps},
                 {"tol", cfg.solver.tol},
                 {"kkt_tol", cfg.solver.kkt_tol}};
  j["mle"] = {{"max_iter", cfg.mle.max_iter},
              {"grad_tol", cfg.mle.grad_tol},
              {"step_halving_max", cfg.mle.step_halving_max}};
  json k = json::object();
  const auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) k[key] = *v;
  };
  put("M1", cfg.constants.m1);
  put("M2", cfg.constants.m2);
  put("M3", cfg.constants.m3);
  put("M4", cfg.constants.m4);
  put("M5", cfg.constants.m5);
  put("M6", cfg.constants.m6);
  put("M7", cfg.constants.m7);
  j["constants"] = k;
  return j;
}

std::uint64_t replicate_seed(std::uint64_t master, std::int64_t n, int replicate) noexcept {
  return derive_seed(master, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(replicate)});
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  const auto support = config.beta_star.support();

  std::vector<SizeContext> contexts;
  ExperimentResult result;
  for (std::int64_t n : config.n_grid) {
    SizeContext ctx;
    ctx.n = n;
    ctx.alpha = config.alpha_for(n);
    ctx.design = design_for(config, n, derive_seed(config.seed, {static_cast<std::uint64_t>(n), kDesignStream}));
    ctx.population = population_gram(*ctx.design, config.beta_star, support);

    SizeBlock block;
    block.n = n;
    block.alpha_n = ctx.alpha;
    try {
      // Conditions of the population design: beta_tilde = beta_star, counts unused.
      const Counts zeros(static_cast<std::size_t>(n), 0);
      const WorkingProblem star = build_working_problem(*ctx.design, config.beta_star, zeros);
      AssumptionConstants constants = config.constants;
      constants.c1 = config.c1;
      constants.tau = config.tau;
      block.population_report = check_assumptions(*ctx.design, star, config.beta_star, constants);
      block.xi_tail = xi_tail_report(
          *ctx.population,
          lambda_bar(std::span<const double>(ctx.population->lambda_star.data(),
                                             static_cast<std::size_t>(n)),
                     IntensitySource::kTruth),
          config.c1);
    } catch (const SingularBlockError& e) {
      throw ConfigError("/design", std::string("population C11 is singular at n = ") +
                                       std::to_string(n) + ": " + e.what());
    }
    if (config.enforce_irrepresentable && block.population_report->irrep_margin < config.tau) {
      throw ConfigError("/design", "irrepresentable condition violated at n = " + std::to_string(n) +
                                       ": margin " + format_double(block.population_report->irrep_margin) +
                                       " < tau " + format_double(config.tau));
    }
    block.replicates.resize(static_cast<std::size_t>(config.replicates));
    result.sizes.push_back(std::move(block));
    contexts.push_back(std::move(ctx));
  }

  const std::size_t per_size = static_cast<std::size_t>(config.replicates);
  const std::size_t total = per_size * contexts.size();
  std::vector<double> gaps(total, 0.0);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t task = next.fetch_add(1); task < total; task = next.fetch_add(1)) {
      const std::size_t s = task / per_size;
      const int r = static_cast<int>(task % per_size);
      result.sizes[s].replicates[static_cast<std::size_t>(r)] =
          run_replicate(config, contexts[s], r, gaps[task]);
    }
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(total)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t s = 0; s < result.sizes.size(); ++s) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t r = 0; r < per_size; ++r) {
      const double g = gaps[s * per_size + r];
      if (!result.sizes[s].replicates[r].failed && std::isfinite(g)) {
        sum += g;
        ++count;
      }
    }
    result.sizes[s].c11_discrepancy_mean = count > 0 ? sum / count : std::nan("");
  }
  return result;
}

std::vector<SummaryRow> summarize(const ExperimentResult& result) {
  std::vector<SummaryRow> rows;
  for (const SizeBlock& block : result.sizes) {
    SummaryRow row;
    row.n = block.n;
    row.alpha_n = block.alpha_n;
    row.replicates = static_cast<int>(block.replicates.size());
    int matches = 0;
    int events = 0;
    double margin_sum = 0.0;
    for (const ReplicateRecord& rec : block.replicates) {
      if (rec.failed) {
        ++row.failures;
        continue;
      }
      matches += rec.sign_match ? 1 : 0;
      events += (rec.an_holds && rec.bn_holds) ? 1 : 0;
      margin_sum += rec.irrep_margin;
    }
    const int completed = row.replicates - row.failures;
    if (completed > 0) {
      row.recovery_rate = static_cast<double>(matches) / completed;
      row.event_rate = static_cast<double>(events) / completed;
      row.mean_irrep_margin = margin_sum / completed;
      row.dominance_ok = row.recovery_rate >= row.event_rate - 2.0 / std::sqrt(static_cast<double>(completed));
    } else {
      row.recovery_rate = row.event_rate = row.mean_irrep_margin = std::nan("");
      row.dominance_ok = false;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace signlasso
