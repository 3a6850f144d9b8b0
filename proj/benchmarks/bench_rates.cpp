#include <benchmark/benchmark.h>

#include "forkrate/ldp_ar.hpp"
#include "forkrate/ldp_iid.hpp"
#include "forkrate/ldp_many.hpp"
#include "forkrate/numerics.hpp"
#include "forkrate/sim.hpp"

namespace {

const forkrate::IidParams kIid{1.0, 2.0};

forkrate::ArParams ar_params() {
  forkrate::ArParams p;
  p.lambda_t = 10.0;
  p.mu_t = 12.0;
  p.xi = 0.5;
  return p;
}

forkrate::ManyParams many_params() {
  forkrate::ManyParams p;
  p.lambda_bar = 10.0;
  p.mu_bar = 12.0;
  return p;
}

void BM_ConjugateQueueIncrementClosed(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forkrate::conjugate_queue_increment(x, kIid));
    x = x < 8.0 ? x + 0.1 : 0.1;
  }
}
BENCHMARK(BM_ConjugateQueueIncrementClosed);

void BM_ConjugateQueueIncrementNumeric(benchmark::State& state) {
  const auto cumulant = [](double theta) {
    return forkrate::cumulant_poisson_arrivals(theta, kIid.lambda) +
           forkrate::cumulant_poisson_arrivals(-theta, kIid.mu);
  };
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forkrate::numerics::sup_conjugate(cumulant, x));
    x = x < 8.0 ? x + 0.1 : 0.1;
  }
}
BENCHMARK(BM_ConjugateQueueIncrementNumeric);

void BM_ConjugateArQueueExact(benchmark::State& state) {
  const auto p = ar_params();
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forkrate::conjugate_ar_queue(x, p));
    x = x < 8.0 ? x + 0.5 : 0.5;
  }
}
BENCHMARK(BM_ConjugateArQueueExact);

void BM_RateIid(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(forkrate::rate_iid(5.0, kIid));
  }
}
BENCHMARK(BM_RateIid);

void BM_RateArExact(benchmark::State& state) {
  const auto p = ar_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(forkrate::rate_ar(5.0, p));
  }
}
BENCHMARK(BM_RateArExact);

void BM_RateArTaylor(benchmark::State& state) {
  const auto p = ar_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        forkrate::rate_ar(5.0, p, forkrate::RateMode::taylor));
  }
}
BENCHMARK(BM_RateArTaylor);

void BM_RateManyExact(benchmark::State& state) {
  const auto p = many_params();
  for (auto _ : state) {
    benchmark::DoNotOptimize(forkrate::rate_many(5.0, p));
  }
}
BENCHMARK(BM_RateManyExact);

void BM_SimulateIidPaths(benchmark::State& state) {
  forkrate::SimConfig cfg;
  cfg.scheme = forkrate::Scheme::iid;
  cfg.params = kIid;
  cfg.horizon = 500;
  cfg.n_paths = state.range(0);
  cfg.omega_grid = {2.0, 4.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(forkrate::simulate_paths(cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_paths * cfg.horizon);
}
BENCHMARK(BM_SimulateIidPaths)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
