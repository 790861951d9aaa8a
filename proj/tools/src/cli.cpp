#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "signlasso/conditions.hpp"
#include "signlasso/csv_io.hpp"
#include "signlasso/errors.hpp"
#include "signlasso/harness.hpp"
#include "signlasso/lasso.hpp"
#include "signlasso/model.hpp"
#include "signlasso/prelim.hpp"
#include "signlasso/serialize.hpp"
#include "signlasso/working_response.hpp"

namespace signlasso::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config;
  std::string out;
  int threads = 1;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> beta_tilde;
  std::string x;
  std::string y;
  std::string beta_star;
  std::string beta_tilde_file;
  std::string constants;
};

// Settings read from --config for fit and check. Flags take precedence.
struct FileSettings {
  json j = json::object();
  fs::path base;

  std::string path(const char* key, const std::string& flag) const {
    if (!flag.empty()) return flag;
    if (!j.contains(key)) return {};
    if (!j.at(key).is_string()) throw ConfigError(std::string("/") + key, "must be a path string");
    fs::path p = j.at(key).get<std::string>();
    if (p.is_relative()) p = base / p;
    return p.string();
  }

  template <class T>
  std::optional<T> value(const char* key, const std::optional<T>& flag) const {
    if (flag) return flag;
    if (!j.contains(key)) return std::nullopt;
    try {
      return j.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(std::string("/") + key, "has the wrong type");
    }
  }
};

std::shared_ptr<spdlog::logger> logger() {
  static auto instance = spdlog::stderr_logger_mt("signlasso");
  return instance;
}

void configure_logging() {
  auto log = logger();
  log->set_pattern("[%l] %v");
  const char* env = std::getenv("SIGNLASSO_LOG");
  const std::string level = env ? env : "warn";
  if (level == "debug") {
    log->set_level(spdlog::level::debug);
  } else if (level == "info") {
    log->set_level(spdlog::level::info);
  } else if (level == "error") {
    log->set_level(spdlog::level::err);
  } else {
    log->set_level(spdlog::level::warn);
  }
}

json load_json(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

FileSettings load_settings(const std::string& config) {
  FileSettings s;
  if (config.empty()) return s;
  s.j = load_json(config);
  if (!s.j.is_object()) throw ConfigError("", "config must be a JSON object");
  s.base = fs::path(config).parent_path();
  return s;
}

std::string require(const std::string& value, const char* what) {
  if (value.empty()) throw ConfigError(std::string("/") + what, std::string("is required (--") + what + ")");
  return value;
}

fs::path prepare_out_dir(const std::string& out) {
  const fs::path dir = require(out, "out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

void write_json(const fs::path& path, const json& j, std::ostream& out) {
  write_text_file(path.string(), j.dump(2) + "\n");
  out << path.string() << '\n';
}

double optional_number(const json& j, const char* key, const char* where) {
  if (!j.at(key).is_number()) throw ConfigError(std::string(where) + "/" + key, "must be a number");
  return j.at(key).get<double>();
}

AssumptionConstants parse_constants(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "constants must be a JSON object");
  AssumptionConstants k;
  const auto get = [&](const char* key, std::optional<double>& slot) {
    if (j.contains(key)) slot = optional_number(j, key, where.c_str());
  };
  get("M1", k.m1);
  get("M2", k.m2);
  get("M3", k.m3);
  get("M4", k.m4);
  get("M5", k.m5);
  get("M6", k.m6);
  get("M7", k.m7);
  if (j.contains("c1")) k.c1 = optional_number(j, "c1", where.c_str());
  if (j.contains("tau")) k.tau = optional_number(j, "tau", where.c_str());
  return k;
}

SolverConfig solver_settings(const FileSettings& s, double alpha) {
  SolverConfig cfg;
  cfg.alpha = alpha;
  if (s.j.contains("solver")) {
    const json& j = s.j.at("solver");
    if (j.contains("max_sweeps")) cfg.max_sweeps = j.at("max_sweeps").get<int>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("kkt_tol")) cfg.kkt_tol = j.at("kkt_tol").get<double>();
  }
  cfg.validate();
  return cfg;
}

// Expansion point from an explicit file or a mode.
CoefVector resolve_beta_tilde(const std::string& file, const BetaTildeMode& mode, const DesignMatrix& x,
                              const std::optional<Counts>& y, const std::string& beta_star_path,
                              std::uint64_t seed) {
  if (!file.empty()) {
    CoefVector b = read_coef_csv(file);
    if (b.size() != x.cols()) throw DimensionError("beta_tilde has length " + std::to_string(b.size()) +
                                                   ", design has " + std::to_string(x.cols()) + " columns");
    return b;
  }
  if (mode.kind == BetaTildeMode::Kind::kMle) {
    if (!y) throw ConfigError("/beta_tilde", "mle mode needs counts (--y)");
    const MleResult mle = fit_mle(x, *y);
    if (!mle.converged) {
      throw NumericalError("MLE did not converge (gradient norm " + format_double(mle.grad_inf_norm) + ")");
    }
    logger()->info("MLE converged in {} iterations", mle.iterations);
    return mle.beta;
  }
  if (beta_star_path.empty()) throw ConfigError("/beta_star", "oracle mode needs --beta-star");
  const CoefVector beta_star = read_coef_csv(beta_star_path);
  if (beta_star.size() != x.cols()) throw DimensionError("beta_star length does not match the design");
  return oracle_perturbation(beta_star, x.rows(), mode.scale, seed);
}

int cmd_fit(const Options& o, std::ostream& out) {
  const FileSettings s = load_settings(o.config);
  const std::string x_path = require(s.path("x", o.x), "x");
  const std::string y_path = require(s.path("y", o.y), "y");
  const auto alpha = s.value<double>("alpha", o.alpha);
  if (!alpha) throw ConfigError("/alpha", "is required (--alpha)");
  const auto mode_text = s.value<std::string>("beta_tilde", o.beta_tilde);
  const BetaTildeMode mode = BetaTildeMode::parse(mode_text.value_or("mle"));
  const std::uint64_t seed = s.value<std::uint64_t>("seed", o.seed).value_or(0);
  const SolverConfig solver = solver_settings(s, *alpha);

  const DesignMatrix x(read_matrix_csv(x_path));
  const Counts y = read_counts_csv(y_path);
  validate_counts(y, x.rows());
  const fs::path dir = prepare_out_dir(o.out);

  const CoefVector beta_tilde = resolve_beta_tilde(s.path("beta_tilde_file", o.beta_tilde_file), mode, x, y,
                                                   s.path("beta_star", o.beta_star), seed);
  const WorkingProblem problem = build_working_problem(x, beta_tilde, y);
  const FitResult result = fit(problem, solver);
  logger()->info("fit finished after {} sweeps, converged = {}", result.sweeps_used, result.converged);

  json j = to_json(result);
  j["alpha"] = *alpha;
  j["beta_tilde"] = to_json(beta_tilde);
  j["beta_tilde_mode"] = s.path("beta_tilde_file", o.beta_tilde_file).empty() ? mode.to_string() : "file";
  j["version"] = version();
  write_json(dir / "fit.json", j, out);
  if (!result.converged) {
    logger()->warn("solver stopped at max_sweeps = {}", solver.max_sweeps);
    return kMaxSweeps;
  }
  return kOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const FileSettings s = load_settings(o.config);
  const std::string x_path = require(s.path("x", o.x), "x");
  const std::string star_path = require(s.path("beta_star", o.beta_star), "beta-star");
  const std::string y_path = s.path("y", o.y);
  const std::string tilde_file = s.path("beta_tilde_file", o.beta_tilde_file);
  const auto alpha = s.value<double>("alpha", o.alpha);
  const auto mode_text = s.value<std::string>("beta_tilde", o.beta_tilde);
  const std::uint64_t seed = s.value<std::uint64_t>("seed", o.seed).value_or(0);

  AssumptionConstants constants;
  const std::string constants_path = s.path("constants", o.constants);
  if (!constants_path.empty()) {
    constants = parse_constants(load_json(constants_path), "/constants");
  }

  const DesignMatrix x(read_matrix_csv(x_path));
  const CoefVector beta_star = read_coef_csv(star_path);
  if (beta_star.size() != x.cols()) throw DimensionError("beta_star length does not match the design");
  if (beta_star.support_size() == 0) throw EmptySupportError("beta_star has an empty support");
  std::optional<Counts> y;
  if (!y_path.empty()) {
    y = read_counts_csv(y_path);
    validate_counts(*y, x.rows());
  }
  const fs::path dir = prepare_out_dir(o.out);

  // Without a mode or file the conditions are evaluated at beta_tilde = beta_star.
  CoefVector beta_tilde = beta_star;
  if (!tilde_file.empty() || mode_text) {
    beta_tilde = resolve_beta_tilde(tilde_file, BetaTildeMode::parse(mode_text.value_or("oracle:0")), x, y,
                                    star_path, seed);
  }
  const Counts counts = y ? *y : Counts(static_cast<std::size_t>(x.rows()), 0);
  const WorkingProblem problem = build_working_problem(x, beta_tilde, counts);
  const ConditionReport report = check_assumptions(x, problem, beta_star, constants);

  json j;
  j["version"] = version();
  j["beta_star"] = to_json(beta_star);
  j["beta_tilde"] = to_json(beta_tilde);
  j["condition_report"] = to_json(report);
  j["proposition_diagnostics"] = nullptr;
  if (y && alpha) {
    const BlockedGram bg = blocked_gram(problem, beta_star.support());
    j["alpha"] = *alpha;
    j["proposition_diagnostics"] = to_json(proposition_diagnostics(bg, beta_star, beta_tilde, *alpha));
  } else {
    logger()->info("proposition diagnostics skipped: they need both --y and --alpha");
  }
  write_json(dir / "report.json", j, out);
  return report.passes.all() ? kOk : kChecksFailed;
}

int cmd_simulate(const Options& o, const std::string& positional, std::ostream& out) {
  const std::string config_path = !o.config.empty() ? o.config : positional;
  if (config_path.empty()) throw ConfigError("/config", "an experiment config is required");
  ExperimentConfig cfg = parse_experiment_config(load_json(config_path));
  if (cfg.design_file && fs::path(*cfg.design_file).is_relative()) {
    cfg.design_file = (fs::path(config_path).parent_path() / *cfg.design_file).string();
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.alpha) cfg.alpha_coef = *o.alpha;
  if (o.beta_tilde) cfg.beta_tilde = BetaTildeMode::parse(*o.beta_tilde);
  cfg.validate();
  if (o.threads < 1) throw ConfigError("/threads", "must be >= 1");
  const fs::path dir = prepare_out_dir(o.out);

  const ExperimentResult result = run_experiment(cfg, o.threads);
  const auto summary = summarize(result);
  for (const SummaryRow& row : summary) {
    logger()->info("n = {}: recovery {:.3f}, events {:.3f}, failures {}", row.n, row.recovery_rate,
                   row.event_rate, row.failures);
    if (row.failures > 0) logger()->warn("n = {}: {} replicate(s) failed", row.n, row.failures);
  }
  write_text_file((dir / "results.csv").string(), results_csv(result));
  out << (dir / "results.csv").string() << '\n';
  write_text_file((dir / "summary.csv").string(), summary_csv(summary));
  out << (dir / "summary.csv").string() << '\n';
  write_json(dir / "report.json", experiment_report(cfg, result), out);
  return kOk;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_option("--alpha", o.alpha, "penalty (simulate: alpha_coef)");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--beta-tilde", o.beta_tilde, "mle | oracle:SCALE");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"Sign-consistent L1-penalized Poisson regression"};
  app.require_subcommand(1);
  Options o;
  std::string positional;

  CLI::App* fit_cmd = app.add_subcommand("fit", "fit the penalized working-response estimator");
  add_common(fit_cmd, o);
  fit_cmd->add_option("--x", o.x, "design CSV");
  fit_cmd->add_option("--y", o.y, "counts CSV");
  fit_cmd->add_option("--beta-star", o.beta_star, "true coefficients CSV (oracle mode)");
  fit_cmd->add_option("--beta-tilde-file", o.beta_tilde_file, "expansion point CSV");

  CLI::App* check_cmd = app.add_subcommand("check", "evaluate the sign-consistency conditions");
  add_common(check_cmd, o);
  check_cmd->add_option("--x", o.x, "design CSV");
  check_cmd->add_option("--y", o.y, "counts CSV");
  check_cmd->add_option("--beta-star", o.beta_star, "true coefficients CSV");
  check_cmd->add_option("--beta-tilde-file", o.beta_tilde_file, "expansion point CSV");
  check_cmd->add_option("--constants", o.constants, "constants JSON");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "run a Monte-Carlo experiment");
  add_common(sim_cmd, o);
  sim_cmd->add_option("experiment", positional, "experiment JSON");

  std::vector<const char*> argv;
  argv.push_back("signlasso");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(o, out);
    if (check_cmd->parsed()) return cmd_check(o, out);
    return cmd_simulate(o, positional, out);
  } catch (const SingularBlockError& e) {
    err << "error: singular active block: " << e.what() << '\n';
    return kSingularBlock;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace signlasso::cli
