#include <benchmark/benchmark.h>

#include "lieprop/propagation.hpp"
#include "lieprop/sde.hpp"
#include "lieprop/so3.hpp"

namespace {

const lieprop::SO3 kSo3;

lieprop::SdeModel noisy_model() {
  return {[](const lieprop::GroupElement&, double) -> lieprop::Vector {
            return Eigen::Vector3d(0.3, -0.1, 0.2);
          },
          [](const lieprop::GroupElement&, double) -> lieprop::Matrix {
            return 0.1 * lieprop::Matrix::Identity(3, 3);
          }};
}

void BM_NonparametricPath(benchmark::State& state) {
  const auto model = noisy_model();
  lieprop::PathConfig cfg;
  cfg.horizon = 1.0;
  cfg.steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lieprop::sample_nonparametric_path(kSo3, model, kSo3.identity(), cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NonparametricPath)->Arg(1000);

void BM_PropagateRk4(benchmark::State& state) {
  const auto model = noisy_model();
  const lieprop::PropagationState s0{kSo3.identity(), 0.05 * lieprop::Matrix::Identity(3, 3), 0.0};
  lieprop::PropagationConfig cfg;
  cfg.dt = 1e-2;
  for (auto _ : state) benchmark::DoNotOptimize(lieprop::propagate(kSo3, s0, model, 1.0, cfg));
}
BENCHMARK(BM_PropagateRk4);

}  // namespace
