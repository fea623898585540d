#include "arp/corpus.hpp"
#include "arp/driver.hpp"
#include "arp/subsolver.hpp"

#include <benchmark/benchmark.h>

namespace {

// One subproblem at the Rosenbrock start, for p = 2 and p = 3.
void BM_Subproblem(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const auto e = arp::make_rosenbrock(static_cast<int>(state.range(1)));
  arp::CountedProblem counted(*e.problem);
  const arp::Vector& x = e.default_start;
  const auto taylor = arp::TaylorModel::capture(counted, x, e.problem->value(x), e.problem->gradient(x), p);
  const arp::RegularizedModel model(taylor, 1.0, p + 1.0);
  for (auto _ : state) {
    auto res = arp::solve_subproblem(model, e.default_set, x, 100.0, {});
    benchmark::DoNotOptimize(res.step.data());
  }
}
BENCHMARK(BM_Subproblem)->Args({2, 2})->Args({3, 2})->Args({2, 16})->Args({3, 16});

void BM_Solve(benchmark::State& state) {
  const auto e = arp::make_entry(state.range(0) == 0 ? "rosenbrock-2" : "shifted-holder(2.5)");
  const auto config = arp::SolveConfig::for_order(2, 3.0, 1e-6);
  std::int64_t iterations = 0;
  for (auto _ : state) {
    const auto report = arp::run(*e.problem, e.meta, e.default_set, e.default_start, config);
    iterations = static_cast<std::int64_t>(report.iterations.size());
    benchmark::DoNotOptimize(report.final_point.data());
  }
  state.counters["outer_iterations"] = static_cast<double>(iterations);
}
BENCHMARK(BM_Solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ProjectBall(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const auto ball = arp::FeasibleSet::ball(arp::Vector::Zero(n), 1.0);
  const arp::Vector y = arp::Vector::LinSpaced(n, -2.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(ball.project(y).data());
}
BENCHMARK(BM_ProjectBall)->Range(8, 4096);

}  // namespace

BENCHMARK_MAIN();
