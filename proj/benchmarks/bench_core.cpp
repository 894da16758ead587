#include <benchmark/benchmark.h>

#include "strq/cognitive.hpp"
#include "strq/design.hpp"
#include "strq/quantizer.hpp"
#include "strq/source_model.hpp"

namespace {

strq::SourceModel make_model() {
  return strq::SourceModel(0.0, 0.0, 1.0, 1.0, 0.5, strq::GridSpec{});
}

strq::BoundaryMatrix interior_rows(const strq::SourceModel& m,
                                   std::vector<double> interior) {
  std::vector<double> edges;
  edges.push_back(m.a_x());
  edges.insert(edges.end(), interior.begin(), interior.end());
  edges.push_back(m.b_x());
  return strq::constant_rows(m, edges);
}

void BM_SourceModelBuild(benchmark::State& state) {
  for (auto _ : state) {
    strq::SourceModel model = make_model();
    benchmark::DoNotOptimize(model.total_mass());
  }
}
BENCHMARK(BM_SourceModelBuild);

void BM_IntervalMoments(benchmark::State& state) {
  const strq::SourceModel model = make_model();
  double lo = -1.3, hi = 0.7;
  for (auto _ : state) {
    const strq::IntervalMoments m = model.interval_moments(10, lo, hi);
    benchmark::DoNotOptimize(m.m2);
  }
}
BENCHMARK(BM_IntervalMoments);

void BM_MixtureEstimates(benchmark::State& state) {
  const strq::SourceModel model = make_model();
  const strq::BoundaryMatrix q =
      interior_rows(model, {-0.9816, 0.0, 0.9816});
  const std::vector<strq::MixtureComponent> comps{{&q, 1.0}};
  for (auto _ : state) {
    const strq::MixtureEstimates mix =
        strq::perceived_estimates_mixture(model, comps);
    benchmark::DoNotOptimize(mix.estimates.values[0]);
  }
}
BENCHMARK(BM_MixtureEstimates);

void BM_Level2Gradient(benchmark::State& state) {
  const strq::SourceModel model = make_model();
  const strq::BoundaryMatrix q0 =
      interior_rows(model, {-0.9816, 0.0, 0.9816});
  const std::vector<strq::MixtureComponent> comps{{&q0, 1.0}};
  const strq::MixtureEstimates mix =
      strq::perceived_estimates_mixture(model, comps);
  for (auto _ : state) {
    const std::vector<std::vector<double>> g =
        strq::level2_gradient(model, q0, mix.estimates);
    benchmark::DoNotOptimize(g[0][0]);
  }
}
BENCHMARK(BM_Level2Gradient);

void BM_LloydMax(benchmark::State& state) {
  const strq::SourceModel model = make_model();
  for (auto _ : state) {
    const strq::DesignResult d = strq::lloyd_max(model, 4, 1);
    benchmark::DoNotOptimize(d.sender_distortion);
  }
}
BENCHMARK(BM_LloydMax)->Unit(benchmark::kMillisecond);

void BM_DesignLevel2(benchmark::State& state) {
  const strq::SourceModel model = make_model();
  const strq::DesignResult d0 = strq::lloyd_max(model, 4, 1);
  const strq::DesignResult d1 = strq::design_level1(d0, model);
  const strq::TypePmf p_prime = strq::normalized_poisson(10.0, 1);
  strq::DescentConfig cfg;
  cfg.num_inits = 2;
  for (auto _ : state) {
    const strq::DesignResult d2 = strq::design_level2(
        model, 4, d0.boundaries, d1.boundaries, p_prime, cfg);
    benchmark::DoNotOptimize(d2.sender_distortion);
  }
}
BENCHMARK(BM_DesignLevel2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
