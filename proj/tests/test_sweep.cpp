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

#include "rsmimo/report.hpp"
#include "rsmimo/sweep.hpp"

namespace rsmimo {
namespace {

SweepConfig tiny() {
  SweepConfig cfg = default_config();
  cfg.scenario.M = 8;
  cfg.scenario.K = 2;
  cfg.T_dl = 4;
  cfg.n_iter = 4;
  cfg.p_dl_db = {0, 20};
  return cfg;
}

TEST(MeanStderr, KnownValues) {
  const auto [m, se] = mean_stderr({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(m, 2.5);
  EXPECT_NEAR(se, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  const auto [m2, se2] = mean_stderr({1.0, std::nan(""), 3.0});
  EXPECT_DOUBLE_EQ(m2, 2.0);
  EXPECT_NEAR(se2, 1.0, 1e-15);
}

TEST(MeanStderr, CompensatedSum) {
  std::vector<double> v(1000001, 0.1);
  v[0] = 1e8;
  const double naive = [&] {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
  }();
  const double exact = (1e8 + 1e6 * 0.1) / 1000001.0;
  EXPECT_LE(std::abs(mean_stderr(v).first - exact), std::abs(naive - exact));
  EXPECT_NEAR(mean_stderr(v).first, exact, 1e-12 * exact);
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  auto cfg = tiny();
  cfg.threads = 1;
  const auto a = run_sweep(cfg);
  cfg.threads = 3;
  const auto b = run_sweep(cfg);
  EXPECT_EQ(report_csv(a), report_csv(b));
  EXPECT_EQ(report_json(a), report_json(b));
  EXPECT_EQ(a.points.size(), cfg.methods.size() * cfg.p_dl_db.size());
  EXPECT_EQ(a.failed_trials(), 0);
}

TEST(Sweep, SeedChangesOutput) {
  auto cfg = tiny();
  cfg.n_iter = 1;
  cfg.methods = {Method::kBilinearNoRs};
  const auto a = run_sweep(cfg);
  cfg.scenario.seed = 2;
  const auto b = run_sweep(cfg);
  EXPECT_NE(report_csv(a), report_csv(b));
}

TEST(Sweep, RatesAndBoundsAreSane) {
  auto cfg = tiny();
  cfg.n_iter = 6;
  cfg.realizations = 4;
  cfg.p_dl_db = {30};
  const auto r = run_sweep(cfg);
  for (const auto& p : r.points) {
    EXPECT_EQ(p.trials, 6);
    EXPECT_GE(p.mean_sum_rate, 0.0);
    EXPECT_GE(p.alpha_c, 0.0);
    EXPECT_LE(p.alpha_c, 1.0 + 1e-9);
    for (double u : p.user_rates) EXPECT_GE(u, 0.0);
    if (is_bilinear(p.method)) {
      EXPECT_GE(p.mean_lb, 0.0);
      EXPECT_LE(p.mean_lb, p.mean_sum_rate + 2.0 * p.stderr_sum_rate);
    } else {
      EXPECT_TRUE(std::isnan(p.mean_lb));
    }
  }
  const auto& rs = r.at(Method::kBilinearRs, 30);
  const auto& nors = r.at(Method::kBilinearNoRs, 30);
  EXPECT_GE(rs.mean_lb, nors.mean_lb * (1.0 - 1e-9));
  EXPECT_GE(rs.mean_sum_rate, nors.mean_sum_rate - 2.0 * rs.stderr_sum_rate);
}

TEST(Sweep, FixedGeometrySharesBound) {
  auto cfg = tiny();
  cfg.fixed_geometry = true;
  cfg.methods = {Method::kBilinearNoRs};
  cfg.p_dl_db = {10};
  const auto r = run_sweep(cfg);
  const auto& lb = r.points[0].trial_lb;
  ASSERT_EQ(lb.size(), 4u);
  for (double v : lb) EXPECT_EQ(v, lb[0]);
  const auto& sr = r.points[0].trial_sum_rates;
  EXPECT_NE(sr[0], sr[1]);  // channel draws still differ
}

TEST(Sweep, PairedTrialsShareDraws) {
  auto cfg = tiny();
  cfg.methods = {Method::kBilinearNoRs, Method::kBilinearRs, Method::kBilinearNoRs};
  const auto a = run_trial(cfg, 2, 1);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].sum_rate, a[2].sum_rate);
  cfg.methods = {Method::kBilinearNoRs};
  EXPECT_EQ(run_trial(cfg, 2, 1)[0].sum_rate, a[0].sum_rate);
}

TEST(Sweep, RejectsInvalidConfig) {
  auto cfg = tiny();
  cfg.T_dl = 8;
  EXPECT_THROW(run_sweep(cfg), ConfigError);
}

}  // namespace
}  // namespace rsmimo
