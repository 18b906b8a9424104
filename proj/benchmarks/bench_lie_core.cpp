#include <benchmark/benchmark.h>

#include "lieprop/so3.hpp"

namespace {

const lieprop::SO3 kSo3;
const lieprop::TangentVector kX = Eigen::Vector3d(0.7, -1.1, 0.4);

void BM_So3Exp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kSo3.exp(kX));
}
BENCHMARK(BM_So3Exp);

void BM_So3Log(benchmark::State& state) {
  const lieprop::GroupElement g = kSo3.exp(kX);
  for (auto _ : state) benchmark::DoNotOptimize(kSo3.log(g));
}
BENCHMARK(BM_So3Log);

void BM_So3LeftJacobianInv(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kSo3.left_jacobian_inv(kX));
}
BENCHMARK(BM_So3LeftJacobianInv);

void BM_So3RightJacobianInvPartial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kSo3.right_jacobian_inv_partial(kX, 1));
}
BENCHMARK(BM_So3RightJacobianInvPartial);

// Generic series path of the base class, for comparison with the closed forms.
void BM_GenericLeftJacobianInv(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kSo3.lieprop::LieGroup::left_jacobian_inv(kX));
}
BENCHMARK(BM_GenericLeftJacobianInv);

}  // namespace

BENCHMARK_MAIN();
