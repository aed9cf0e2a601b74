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

#include "rsmimo/power_split.hpp"

#include <algorithm>
#include <map>

namespace rsmimo {

GoldenResult golden_section_max(const std::function<double(double)>& f, double a, double b,
                                const GoldenOptions& opt) {
  if (!(opt.tol > 0.0 && opt.tol < 1.0)) throw ConfigError("golden_section: tol must lie in (0, 1)");
  if (!(b > a)) throw ConfigError("golden_section: empty interval");
  GoldenResult res;
  std::vector<std::pair<double, double>>& seen = res.probes;
  auto eval = [&](double x) {
    for (const auto& [px, pv] : seen) {
      if (std::abs(px - x) <= 1e-9) return pv;
    }
    const double v = f(x);
    seen.emplace_back(x, v);
    return v;
  };

  double x1 = a + (1.0 - kGolden) * (b - a);
  double x2 = a + kGolden * (b - a);
  double r1 = eval(x1);
  double r2 = eval(x2);
  int it = 0;
  res.trace.push_back({it, a, b, x1, x2, r1, r2});
  while (b - a >= opt.tol && static_cast<int>(seen.size()) < opt.max_eval) {
    if (r1 > r2) {
      b = x2;
    } else {
      a = x1;
    }
    x1 = a + (1.0 - kGolden) * (b - a);
    x2 = a + kGolden * (b - a);
    r1 = eval(x1);
    r2 = eval(x2);
    res.trace.push_back({++it, a, b, x1, x2, r1, r2});
  }
  res.evaluations = static_cast<int>(seen.size());
  auto best = std::max_element(seen.begin(), seen.end(),
                               [](const auto& l, const auto& r) { return l.second < r.second; });
  res.best_x = best->first;
  res.best_value = best->second;
  return res;
}

SplitResult evaluate_split(double alpha_c, const SinrOperators& ops, double p_dl, const PrecoderTransforms* warm,
                           const SplitOptions& opt) {
  if (alpha_c < 0.0 || alpha_c > 1.0) throw ConfigError("evaluate_split: alpha_c must lie in [0, 1]");
  std::optional<std::vector<CMat>> ap0;
  std::optional<CMat> ac0;
  if (warm) {
    ap0 = warm->a_p;
    ac0 = warm->a_c;
  }
  SplitResult res;
  res.alpha_c = alpha_c;
  auto priv = optimize_private(ops, alpha_c, p_dl, ap0, opt.priv);
  auto common = optimize_common(priv.a_p, ops, alpha_c, p_dl, ac0, opt.common);
  res.private_iterations = priv.iterations;
  res.common_steps = common.steps;
  res.transforms.a_p = std::move(priv.a_p);
  res.transforms.a_c = std::move(common.a_c);
  res.transforms.alpha_c = alpha_c;
  res.lb = hardening_rates(res.transforms, ops);
  res.sum_lb = res.lb.sum();
  return res;
}

PowerSplitResult golden_section(const SinrOperators& ops, double p_dl, const SplitOptions& opt) {
  std::map<double, SplitResult> solved;
  const PrecoderTransforms* warm = nullptr;
  auto f = [&](double x) {
    auto r = evaluate_split(x, ops, p_dl, warm, opt);
    const double v = r.sum_lb;
    auto [pos, _] = solved.insert_or_assign(x, std::move(r));
    warm = &pos->second.transforms;
    return v;
  };
  PowerSplitResult out;
  out.search = golden_section_max(f, 0.0, 1.0, opt.golden);
  out.best = solved.at(out.search.best_x);
  return out;
}

}  // namespace rsmimo
