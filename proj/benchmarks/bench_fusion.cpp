#include <benchmark/benchmark.h>

#include "lieprop/experiments.hpp"
#include "lieprop/fusion.hpp"

namespace {

const lieprop::SO3 kSo3;

void BM_FuseEuclidean(benchmark::State& state) {
  const auto prior = lieprop::build_prior();
  const auto obs = lieprop::accel_mag_model(0.1);
  const lieprop::Vector z = lieprop::observe_euclidean(prior.mean, 0.1, 7);
  for (auto _ : state) benchmark::DoNotOptimize(lieprop::fuse_euclidean(kSo3, prior, obs, z));
}
BENCHMARK(BM_FuseEuclidean);

void BM_FuseGroup(benchmark::State& state) {
  const auto prior = lieprop::build_prior();
  const lieprop::Matrix R = lieprop::rotation_noise_covariance(0.1);
  const lieprop::GroupElement gz = lieprop::observe_group(prior.mean, 0.1, 7);
  for (auto _ : state) benchmark::DoNotOptimize(lieprop::fuse_group(kSo3, prior, R, gz));
}
BENCHMARK(BM_FuseGroup);

void BM_GeneralUpdateEuclidean(benchmark::State& state) {
  const auto prior = lieprop::build_prior();
  const auto obs = lieprop::accel_mag_model(0.1);
  const lieprop::Vector z = lieprop::observe_euclidean(prior.mean, 0.1, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lieprop::gaussian_update_general(kSo3, prior, obs, z));
  }
}
BENCHMARK(BM_GeneralUpdateEuclidean);

}  // namespace
