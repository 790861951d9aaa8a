#include <cmath>

#include <benchmark/benchmark.h>

#include "signlasso/conditions.hpp"
#include "signlasso/design.hpp"
#include "signlasso/lasso.hpp"
#include "signlasso/model.hpp"
#include "signlasso/working_response.hpp"

namespace {

using namespace signlasso;

struct Instance {
  DesignMatrix x;
  CoefVector beta_star;
  Counts y;
};

Instance make_instance(Index n, Index p) {
  DesignGenerator gen;
  gen.kind = DesignKind::kCorrelatedGaussian;
  gen.rho = 0.2;
  gen.scale = 0.5;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  b(0) = 1.0;
  b(1) = -1.0;
  DesignMatrix x = make_design(gen, n, p, 7);
  CoefVector beta_star(b);
  Counts y = simulate(x, beta_star, 11).counts;
  return {std::move(x), std::move(beta_star), std::move(y)};
}

void BM_BuildWorkingProblem(benchmark::State& state) {
  const Instance inst = make_instance(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_working_problem(inst.x, inst.beta_star, inst.y));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildWorkingProblem)->Args({1000, 6})->Args({10000, 6})->Args({10000, 50});

void BM_Fit(benchmark::State& state) {
  const Instance inst = make_instance(state.range(0), state.range(1));
  const WorkingProblem problem = build_working_problem(inst.x, inst.beta_star, inst.y);
  SolverConfig cfg;
  cfg.alpha = 0.5 * std::pow(static_cast<double>(state.range(0)), 0.75);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(problem, cfg));
  }
}
BENCHMARK(BM_Fit)->Args({1000, 6})->Args({10000, 6})->Args({10000, 50});

void BM_BlockedGram(benchmark::State& state) {
  const Instance inst = make_instance(state.range(0), state.range(1));
  const WorkingProblem problem = build_working_problem(inst.x, inst.beta_star, inst.y);
  const auto support = inst.beta_star.support();
  for (auto _ : state) {
    benchmark::DoNotOptimize(blocked_gram(problem, support));
  }
}
BENCHMARK(BM_BlockedGram)->Args({1000, 6})->Args({10000, 6})->Args({10000, 50});

}  // namespace
BENCHMARK_MAIN();
