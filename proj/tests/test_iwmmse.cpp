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

#include <gtest/gtest.h>

#include <cmath>

#include "rsmimo/iwmmse.hpp"
#include "test_util.hpp"

namespace rsmimo {
namespace {

std::vector<CVec> random_channels(Rng& rng, int K, int M, double scale = 1.0) {
  std::vector<CVec> h;
  for (int k = 0; k < K; ++k) h.push_back(scale * complex_normal_vector(rng, M));
  return h;
}

TEST(MmseEstimate, ZeroCovariance) {
  Rng rng(1);
  const CMat phi = build_pilot_matrix(4, 2).phi;
  const CVec y = complex_normal_vector(rng, 2);
  EXPECT_EQ(mmse_channel_estimate(y, CMat::Zero(4, 4), phi, 0.1).norm(), 0.0);
  EXPECT_THROW(mmse_channel_estimate(y, CMat::Zero(4, 4), phi, 0.0), ConfigError);
}

TEST(MmseEstimate, NoiselessFullPilots) {
  Rng rng = make_stream(2, 0, Stream::kTest);
  const CMat c = testing::random_psd(rng, 4, 4);
  const CMat phi = build_pilot_matrix(4, 4).phi;
  const CVec h = ChannelSampler(CovarianceSet({c})).sample(rng)[0];
  const CVec hh = mmse_channel_estimate(phi.adjoint() * h, c, phi, 1e-12);
  EXPECT_LT((hh - h).norm(), 1e-6 * h.norm());
}

TEST(MmseEstimate, OrthogonalityPrinciple) {
  Rng rng = make_stream(3, 0, Stream::kTest);
  const CMat c = testing::random_psd(rng, 8, 3);
  const CMat phi = build_pilot_matrix(8, 4).phi;
  const ChannelSampler sampler(CovarianceSet({c}));
  const int n = 100000;
  CMat acc = CMat::Zero(8, 8);
  for (int i = 0; i < n; ++i) {
    const CVec h = sampler.sample(rng)[0];
    const CVec hh = mmse_channel_estimate(observe(h, phi, 0.2, rng), c, phi, 0.2);
    acc.noalias() += (h - hh) * hh.adjoint();
  }
  acc /= static_cast<double>(n);
  EXPECT_LT(acc.norm(), 0.02 * c.trace().real());
}

TEST(Weights, ZeroCommonColumn) {
  Rng rng = make_stream(4, 0, Stream::kTest);
  const auto h = random_channels(rng, 2, 4);
  IwmmseState s;
  s.P = testing::random_matrix(rng, 4, 3);
  s.P.col(0).setZero();
  update_equalizers_weights(s, h);
  update_auxiliaries(s, h);
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(s.g_c[k], cplx(0.0));
    EXPECT_EQ(s.eps_c[k], 1.0);
    EXPECT_EQ(s.u_c[k], 1.0);
    EXPECT_EQ(s.w_c[k], cplx(0.0));
  }
}

TEST(Weights, MmseIdentities) {
  Rng rng = make_stream(5, 0, Stream::kTest);
  for (int rep = 0; rep < 20; ++rep) {
    const auto h = random_channels(rng, 3, 6);
    IwmmseState s;
    s.P = testing::random_matrix(rng, 6, 4) * 2.0;
    update_equalizers_weights(s, h);
    update_auxiliaries(s, h);
    const auto r = instantaneous_rates(h, s.P);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(s.eps_p[k] * (1.0 + r.gamma_p[k]), 1.0, 1e-10);
      EXPECT_NEAR(s.eps_c[k] * (1.0 + r.gamma_c[k]), 1.0, 1e-10);
      EXPECT_NEAR(xi_mmse(s.eps_p[k]), 1.0 - r.private_rates[k], 1e-10);
      EXPECT_NEAR(xi_mmse(s.eps_c[k]), 1.0 - std::log2(1.0 + r.gamma_c[k]), 1e-10);
      EXPECT_GE(s.t_p[k], 1.0);
      EXPECT_GE(s.t_c[k], 1.0);
      EXPECT_GE(s.u_p[k], 1.0);
      // Quadratic transform is tight at the optimal auxiliaries.
      EXPECT_NEAR(weighted_mse_private(s.P, h, s.w_p[k], k), s.eps_p[k], 1e-10);
      EXPECT_NEAR(weighted_mse_common(s.P, h, s.w_c[k], k), s.eps_c[k], 1e-10);
      EXPECT_LE(std::abs(s.w_p[k]), h[k].norm() * s.P.col(k + 1).norm() / s.t_p[k] * (1.0 + 1e-12));
      EXPECT_LE(std::abs(s.w_c[k]), h[k].norm() * s.P.col(0).norm() / s.t_c[k] * (1.0 + 1e-12));
    }
  }
}

TEST(Precoders, SingleUserIsMatchedFilter) {
  Rng rng = make_stream(6, 0, Stream::kTest);
  const auto h = random_channels(rng, 1, 6);
  IwmmseOptions opt;
  opt.rate_splitting = false;
  IwmmseState s;
  s.P = iwmmse_initialization(h, 10.0, opt);
  s.P.col(1) += 0.3 * testing::random_matrix(rng, 6, 1);
  update_equalizers_weights(s, h);
  update_auxiliaries(s, h);
  const CMat P = solve_precoders(s, h, 10.0, opt);
  const CVec p = P.col(1);
  const cplx c = h[0].dot(p) / h[0].squaredNorm();
  EXPECT_LT((p - c * h[0]).norm(), 1e-10 * p.norm());
  EXPECT_EQ(P.col(0).norm(), 0.0);
}

TEST(Precoders, PowerActiveAndObjectiveDecreases) {
  Rng rng = make_stream(7, 0, Stream::kTest);
  for (int rep = 0; rep < 10; ++rep) {
    const auto h = random_channels(rng, 3, 8, 0.3);
    for (bool rs : {true, false}) {
      IwmmseOptions opt;
      opt.rate_splitting = rs;
      IwmmseState s;
      s.P = iwmmse_initialization(h, 100.0, opt);
      update_equalizers_weights(s, h);
      update_auxiliaries(s, h);
      const CMat P = solve_precoders(s, h, 100.0, opt);
      EXPECT_LE(P.squaredNorm(), 100.0 * (1.0 + 1e-6));
      EXPECT_LE(augmented_objective(s, P, h, rs), augmented_objective(s, s.P, h, rs) * (1.0 + 1e-12) + 1e-12);
      if (!rs) EXPECT_NEAR(P.squaredNorm(), 100.0, 1e-6 * 100.0);
    }
  }
}

TEST(Run, MonotoneAndFeasible) {
  Rng rng = make_stream(8, 0, Stream::kTest);
  for (int rep = 0; rep < 10; ++rep) {
    const auto h = random_channels(rng, 4, 8, 0.5);
    for (bool rs : {true, false}) {
      IwmmseOptions opt;
      opt.rate_splitting = rs;
      const auto r = run_iwmmse(h, 1000.0, opt);
      for (std::size_t i = 1; i < r.trace.size(); ++i) {
        const double prev = r.trace[i - 1].objective;
        EXPECT_LE(r.trace[i].objective, prev + 1e-8 * std::abs(prev)) << rep << " " << i;
        EXPECT_LE(r.trace[i].power, 1000.0 * (1.0 + 1e-6));
      }
      EXPECT_LE(r.P.squaredNorm(), 1000.0 * (1.0 + 1e-6));
    }
  }
}

TEST(Run, SingleUserHighPower) {
  Rng rng = make_stream(9, 0, Stream::kTest);
  const auto h = random_channels(rng, 1, 8);
  const double p = 1e4;
  const auto r = run_iwmmse(h, p);
  const double rate = instantaneous_rates(h, r.P).sum_rs;
  const double want = std::log2(1.0 + p * h[0].squaredNorm());
  EXPECT_NEAR(rate, want, 0.05 * want);
}

TEST(Run, VanishingPower) {
  Rng rng = make_stream(10, 0, Stream::kTest);
  const auto h = random_channels(rng, 3, 8);
  const auto r = run_iwmmse(h, 1e-12);
  EXPECT_LT(instantaneous_rates(h, r.P).sum_rs, 1e-9);
  EXPECT_THROW(run_iwmmse(h, 0.0), ConfigError);
  EXPECT_THROW(run_iwmmse({}, 1.0), ConfigError);
}

}  // namespace
}  // namespace rsmimo
