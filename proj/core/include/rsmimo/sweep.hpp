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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rsmimo/sweep_config.hpp"

namespace rsmimo {

/// Outcome of one method on one (trial, power) work item.
struct TrialOutcome {
  bool ok = false;
  std::string error;
  double sum_rate = 0.0;      ///< mean instantaneous sum rate over realizations
  double lb = 0.0;            ///< hardening bound sum rate, NaN for IWMMSE
  double alpha_c = 0.0;       ///< chosen (bilinear) or realized (IWMMSE) common power fraction
  double common_rate = 0.0;   ///< mean log2(1 + min_k gamma_ck^inst)
  std::vector<double> user_rates;
};

struct PointSummary {
  Method method = Method::kBilinearRs;
  double p_dl_db = 0.0;
  double mean_sum_rate = 0.0;
  double stderr_sum_rate = 0.0;
  double mean_lb = 0.0;
  double stderr_lb = 0.0;
  double alpha_c = 0.0;
  double common_rate = 0.0;
  std::vector<double> user_rates;
  int trials = 0;
  int failed = 0;
  /// Per-trial sum rates and bounds in trial order; failed trials hold NaN.
  std::vector<double> trial_sum_rates;
  std::vector<double> trial_lb;
};

struct RateReport {
  SweepConfig config;
  std::vector<PointSummary> points;  ///< method-major, then power
  std::vector<std::string> failures; ///< "method P_dl_dB trial: message"
  int failed_trials() const;
  const PointSummary& at(Method m, double p_dl_db) const;
};

/// Solves one work item for every configured method. Deterministic in
/// (config, trial, power index).
std::vector<TrialOutcome> run_trial(const SweepConfig& cfg, int trial, int power_index);

using ProgressFn = std::function<void(int done, int total)>;

RateReport run_sweep(const SweepConfig& cfg, const ProgressFn& progress = {});

/// Mean and standard error of the finite entries, summed in order with
/// Kahan compensation.
std::pair<double, double> mean_stderr(const std::vector<double>& v);

}  // namespace rsmimo
