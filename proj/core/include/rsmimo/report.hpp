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

#include <string>
#include <vector>

#include "rsmimo/sweep.hpp"

namespace rsmimo {

/// CSV header: method,P_dl_dB,mean_sum_rate,stderr,mean_lb,alpha_c,common_rate,user_1..user_K
std::string report_csv(const RateReport& report);
std::string report_json(const RateReport& report);
RateReport report_from_json(const std::string& text);

/// Two-column "P_dl_dB value" data for one curve.
std::string curve_data(const RateReport& report, Method m, bool lower_bound);

/// Writes results.csv, results.json and curve_<method>[_lb].dat into dir
/// (created if missing). Returns the written paths.
std::vector<std::string> emit_report(const RateReport& report, const std::string& dir);

std::string version_string();

}  // namespace rsmimo
