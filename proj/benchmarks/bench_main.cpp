// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "rsmimo/channel_model.hpp"
#include "rsmimo/common_opt.hpp"
#include "rsmimo/iwmmse.hpp"
#include "rsmimo/power_split.hpp"
#include "rsmimo/private_opt.hpp"
#include "rsmimo/training.hpp"

namespace rsmimo {
namespace {

struct Instance {
  ScenarioConfig sc;
  CovarianceSet cov;
  SinrOperators ops;
};

Instance make_instance(int M, int K, int T, double p_db) {
  ScenarioConfig sc;
  sc.M = M;
  sc.K = K;
  Rng rng = make_stream(sc.seed, 0, Stream::kGeometry);
  auto cov = build_covariance(drop_users(sc, rng), sc);
  const double p = std::pow(10.0, p_db / 10.0);
  const auto phi = build_pilot_matrix(M, T).phi;
  SinrOperators ops(cov, observation_covariances(cov, phi, training_noise_variance(p, T)));
  return {sc, std::move(cov), std::move(ops)};
}

const Instance& paper_instance() {
  static const Instance inst = make_instance(64, 5, 8, 40.0);
  return inst;
}

void BM_BuildCovariance(benchmark::State& state) {
  ScenarioConfig sc;
  sc.M = static_cast<int>(state.range(0));
  Rng rng = make_stream(1, 0, Stream::kGeometry);
  const auto geom = drop_users(sc, rng);
  for (auto _ : state) benchmark::DoNotOptimize(build_covariance(geom, sc));
}
BENCHMARK(BM_BuildCovariance)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SinrOperators(benchmark::State& state) {
  const auto& inst = paper_instance();
  for (auto _ : state) benchmark::DoNotOptimize(SinrOperators(inst.cov, inst.ops.observation()));
}
BENCHMARK(BM_SinrOperators)->Unit(benchmark::kMillisecond);

// Structured application against the materialized M K T square matrix.
void BM_ZApply(benchmark::State& state) {
  const auto& ops = paper_instance().ops;
  const auto z = ops.Z(0);
  Rng rng = make_stream(1, 0, Stream::kTest);
  const CVec x = complex_normal_vector(rng, ops.M() * ops.K() * ops.T());
  for (auto _ : state) benchmark::DoNotOptimize(z.apply(x));
}
BENCHMARK(BM_ZApply);

void BM_ZDense(benchmark::State& state) {
  const auto& ops = paper_instance().ops;
  const CMat z = ops.Z(0).materialize();
  Rng rng = make_stream(1, 0, Stream::kTest);
  const CVec x = complex_normal_vector(rng, z.cols());
  for (auto _ : state) benchmark::DoNotOptimize(CVec(z * x));
}
BENCHMARK(BM_ZDense);

void BM_OptimizePrivate(benchmark::State& state) {
  const auto& ops = paper_instance().ops;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_private(ops, 0.5, 1e4));
}
BENCHMARK(BM_OptimizePrivate)->Unit(benchmark::kMillisecond);

void BM_OptimizeCommon(benchmark::State& state) {
  const auto& ops = paper_instance().ops;
  const auto priv = optimize_private(ops, 0.9, 1e4);
  CommonOptions opt;
  opt.method = state.range(0) ? CommonMethod::kMaxMin : CommonMethod::kSinrIncrease;
  state.SetLabel(common_method_name(opt.method));
  for (auto _ : state) benchmark::DoNotOptimize(optimize_common(priv.a_p, ops, 0.9, 1e4, std::nullopt, opt));
}
BENCHMARK(BM_OptimizeCommon)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_GoldenSection(benchmark::State& state) {
  const auto& ops = paper_instance().ops;
  for (auto _ : state) benchmark::DoNotOptimize(golden_section(ops, 1e4));
}
BENCHMARK(BM_GoldenSection)->Unit(benchmark::kMillisecond);

void BM_Iwmmse(benchmark::State& state) {
  const auto& ops = paper_instance().ops;
  Rng rng = make_stream(1, 1, Stream::kTest);
  const auto h = sample_channels(ops.covariances(), rng);
  std::vector<CVec> hh;
  for (int k = 0; k < ops.K(); ++k) hh.push_back(mmse_estimator(ops, k) * observe(h[k], ops.phi(), ops.sigma_n2(), rng));
  IwmmseOptions opt;
  opt.rate_splitting = state.range(0) != 0;
  state.SetLabel(opt.rate_splitting ? "rs" : "nors");
  for (auto _ : state) benchmark::DoNotOptimize(run_iwmmse(hh, 1e4, opt));
}
BENCHMARK(BM_Iwmmse)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace rsmimo

BENCHMARK_MAIN();
