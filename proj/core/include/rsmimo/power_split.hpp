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

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "rsmimo/common_opt.hpp"
#include "rsmimo/private_opt.hpp"

namespace rsmimo {

inline const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

struct GoldenOptions {
  double tol = 0.02;
  int max_eval = 12;
};

struct GoldenTraceEntry {
  int iteration = 0;
  double a = 0.0, b = 1.0;
  double alpha_c1 = 0.0, alpha_c2 = 0.0;
  double r1 = 0.0, r2 = 0.0;
};

struct GoldenResult {
  double best_x = 0.0;
  double best_value = 0.0;
  int evaluations = 0;
  std::vector<GoldenTraceEntry> trace;
  std::vector<std::pair<double, double>> probes;  ///< (x, f(x)) in evaluation order
};

/// Golden-section maximization of f over [a, b]. Stops when b - a < tol or
/// max_eval evaluations were spent; returns the best probe seen.
GoldenResult golden_section_max(const std::function<double(double)>& f, double a, double b,
                                const GoldenOptions& opt = {});

struct SplitOptions {
  PrivateOptions priv;
  CommonOptions common;
  GoldenOptions golden;
};

struct SplitResult {
  double alpha_c = 0.0;
  PrecoderTransforms transforms;
  LbRates lb;
  double sum_lb = 0.0;
  int private_iterations = 0;
  int common_steps = 0;
};

/// Private solve with budget (1 - alpha_c) P_dl against the warm start, then
/// the common solve with budget alpha_c P_dl.
SplitResult evaluate_split(double alpha_c, const SinrOperators& ops, double p_dl,
                           const PrecoderTransforms* warm = nullptr, const SplitOptions& opt = {});

struct PowerSplitResult {
  SplitResult best;
  GoldenResult search;
};

PowerSplitResult golden_section(const SinrOperators& ops, double p_dl, const SplitOptions& opt = {});

}  // namespace rsmimo
