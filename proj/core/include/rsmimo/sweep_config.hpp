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

#include <cstdint>
#include <string>
#include <vector>

#include "rsmimo/channel_model.hpp"
#include "rsmimo/iwmmse.hpp"
#include "rsmimo/power_split.hpp"

namespace rsmimo {

enum class Method { kBilinearRs, kBilinearNoRs, kIwmmseRs, kIwmmseNoRs };

std::string method_name(Method m);
Method parse_method(const std::string& name);
bool is_bilinear(Method m);

struct SweepConfig {
  ScenarioConfig scenario;
  int T_dl = 8;
  int T_ch = 200;
  std::vector<double> p_dl_db{0, 5, 10, 15, 20, 25, 30, 35, 40};
  int n_iter = 300;
  int realizations = 1;           ///< channel draws per trial for the bilinear methods
  std::vector<Method> methods{Method::kBilinearRs, Method::kBilinearNoRs, Method::kIwmmseRs, Method::kIwmmseNoRs};
  bool fixed_geometry = false;
  double sigma_n2 = -1.0;         ///< negative: 1 / (P_dl T_dl)
  bool common_own_mean = true;    ///< see SinrOperators::common_own_mean
  int threads = 1;
  std::string out_dir = "out";

  SplitOptions split;
  IwmmseOptions iwmmse;

  void validate() const;
};

/// Paper-scale defaults, optionally adjusted by a named profile.
SweepConfig default_config();
void apply_profile(SweepConfig& cfg, const std::string& profile);

/// Applies one key=value pair. Throws ConfigError naming the key.
void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& value);

/// Reads key=value lines ('#' starts a comment) on top of cfg.
void parse_config_text(SweepConfig& cfg, const std::string& text, const std::string& origin = "<string>");
SweepConfig parse_config(const std::string& path);
void parse_config_into(SweepConfig& cfg, const std::string& path);

}  // namespace rsmimo
