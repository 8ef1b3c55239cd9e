#include <benchmark/benchmark.h>

#include "pdpinn/batch.hpp"
#include "pdpinn/experiment.hpp"
#include "pdpinn/training.hpp"

namespace {

using namespace pdpinn;

Model preset_model(const std::string& name) {
  return ExperimentConfig::preset(name).initial_model();
}

void BM_BatchLossWithGradient(benchmark::State& state, const std::string& preset) {
  const Model model = preset_model(preset);
  Rng rng(1);
  const SampleBatch batch = sample_interior(model.problem(), static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    LossAndGrad lg = batch_loss(model, batch, true);
    benchmark::DoNotOptimize(lg.loss);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_BatchLossWithGradient, poisson1d, std::string("poisson1d"))->Arg(100)->Arg(1000);
BENCHMARK_CAPTURE(BM_BatchLossWithGradient, sphere, std::string("sphere"))->Arg(200);
BENCHMARK_CAPTURE(BM_BatchLossWithGradient, poisson2d, std::string("poisson2d"))->Arg(1000);

void BM_ScalarEvaluate(benchmark::State& state) {
  const Model model = preset_model("poisson2d");
  const std::vector<double> x{1.25, -3.5};
  for (auto _ : state) {
    Jet2 f = model.evaluate(x);
    benchmark::DoNotOptimize(f.value);
  }
}
BENCHMARK(BM_ScalarEvaluate);

void BM_SphericalHarmonics(benchmark::State& state) {
  const int l_max = static_cast<int>(state.range(0));
  const Jet2 theta = Jet2::variable(0.8, 2, 0);
  const Jet2 phi = Jet2::variable(2.1, 2, 1);
  for (auto _ : state) {
    auto words = eval_spherical_harmonics(l_max, theta, phi);
    benchmark::DoNotOptimize(words.data());
  }
}
BENCHMARK(BM_SphericalHarmonics)->Arg(3)->Arg(8);

void BM_Fourier2d(benchmark::State& state) {
  const DictionarySpec spec = DictionarySpec::fourier2d(5, 5);
  const std::vector<Jet2> coords{Jet2::variable(1.0, 2, 0), Jet2::variable(-2.0, 2, 1)};
  for (auto _ : state) {
    auto words = eval_dictionary(spec, coords);
    benchmark::DoNotOptimize(words.data());
  }
}
BENCHMARK(BM_Fourier2d);

void BM_TrainingIterations(benchmark::State& state) {
  ExperimentConfig cfg = ExperimentConfig::preset("poisson1d");
  cfg.iterations = 10;
  cfg.record_every = 10;
  cfg.n_pred = 100;
  const Model model = cfg.initial_model();
  const TrainConfig tc = cfg.train_config();
  for (auto _ : state) {
    TrainResult r = train(model, tc);
    benchmark::DoNotOptimize(r.records.back().loss_pde);
  }
}
BENCHMARK(BM_TrainingIterations)->Unit(benchmark::kMillisecond);

void BM_Regularity(benchmark::State& state) {
  const DomainDescriptor disk = DomainDescriptor::parse("disk");
  for (auto _ : state) {
    double r = estimate_regularity(disk, 1000, 11);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Regularity)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
