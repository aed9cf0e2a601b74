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

#include "rsmimo/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "rsmimo/rng.hpp"
#include "rsmimo/training.hpp"

namespace rsmimo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct KahanSum {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

std::uint64_t realization_index(int trial, int r) {
  return (static_cast<std::uint64_t>(trial) << 20) | static_cast<std::uint64_t>(r);
}

struct Draw {
  std::vector<CVec> h;
  std::vector<CVec> noise;  // white, scaled per power point
};

std::vector<Draw> draw_realizations(const SweepConfig& cfg, const CovarianceSet& cov, int trial) {
  const ChannelSampler sampler(cov);
  std::vector<Draw> out;
  for (int r = 0; r < cfg.realizations; ++r) {
    Rng ch = make_stream(cfg.scenario.seed, realization_index(trial, r), Stream::kChannel);
    Rng nz = make_stream(cfg.scenario.seed, realization_index(trial, r), Stream::kNoise);
    Draw d;
    d.h = sampler.sample(ch);
    for (int k = 0; k < cov.K(); ++k) d.noise.push_back(complex_normal_vector(nz, cfg.T_dl));
    out.push_back(std::move(d));
  }
  return out;
}

void accumulate(TrialOutcome& o, const InstantRates& r, bool rs, double scale) {
  o.sum_rate += scale * (rs ? r.sum_rs : r.sum_nors);
  o.common_rate += scale * (rs ? r.common_rate : 0.0);
  if (o.user_rates.empty()) o.user_rates.assign(r.private_rates.size(), 0.0);
  for (std::size_t k = 0; k < r.private_rates.size(); ++k) o.user_rates[k] += scale * r.private_rates[k];
}

}  // namespace

int RateReport::failed_trials() const {
  int n = 0;
  for (const auto& p : points) n += p.failed;
  return n;
}

const PointSummary& RateReport::at(Method m, double p_dl_db) const {
  for (const auto& p : points) {
    if (p.method == m && std::abs(p.p_dl_db - p_dl_db) < 1e-9) return p;
  }
  throw ConfigError("report has no point " + method_name(m) + " at " + std::to_string(p_dl_db) + " dB");
}

std::pair<double, double> mean_stderr(const std::vector<double>& v) {
  KahanSum s;
  int n = 0;
  for (double x : v) {
    if (std::isfinite(x)) {
      s.add(x);
      ++n;
    }
  }
  if (n == 0) return {kNaN, kNaN};
  const double mean = s.sum / n;
  if (n < 2) return {mean, 0.0};
  KahanSum q;
  for (double x : v) {
    if (std::isfinite(x)) q.add((x - mean) * (x - mean));
  }
  return {mean, std::sqrt(q.sum / (n - 1)) / std::sqrt(static_cast<double>(n))};
}

std::vector<TrialOutcome> run_trial(const SweepConfig& cfg, int trial, int power_index) {
  const int K = cfg.scenario.K;
  const double db = cfg.p_dl_db[static_cast<std::size_t>(power_index)];
  const double p_dl = std::pow(10.0, db / 10.0);
  const double sigma_n2 = cfg.sigma_n2 >= 0.0 ? cfg.sigma_n2 : training_noise_variance(p_dl, cfg.T_dl);

  std::vector<TrialOutcome> out(cfg.methods.size());
  try {
    const std::uint64_t geo_index = cfg.fixed_geometry ? 0 : static_cast<std::uint64_t>(trial);
    Rng geo_rng = make_stream(cfg.scenario.seed, geo_index, Stream::kGeometry);
    const auto geom = drop_users(cfg.scenario, geo_rng);
    const auto cov = build_covariance(geom, cfg.scenario);
    const auto pilots = build_pilot_matrix(cfg.scenario.M, cfg.T_dl);
    const auto obs = observation_covariances(cov, pilots.phi, sigma_n2);
    SinrOperators ops(cov, obs);
    ops.set_common_own_mean(cfg.common_own_mean);
    const auto draws = draw_realizations(cfg, cov, trial);
    const double w = 1.0 / static_cast<double>(draws.size());

    std::vector<std::vector<CVec>> ys;
    for (const auto& d : draws) {
      std::vector<CVec> y;
      for (int k = 0; k < K; ++k) {
        y.push_back(observe_with(d.h[static_cast<std::size_t>(k)], pilots.phi, sigma_n2, d.noise[static_cast<std::size_t>(k)]));
      }
      ys.push_back(std::move(y));
    }

    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      const Method m = cfg.methods[mi];
      TrialOutcome& o = out[mi];
      try {
        if (is_bilinear(m)) {
          SplitResult sol;
          if (m == Method::kBilinearRs) {
            sol = golden_section(ops, p_dl, cfg.split).best;
          } else {
            sol = evaluate_split(0.0, ops, p_dl, nullptr, cfg.split);
          }
          const bool rs = m == Method::kBilinearRs;
          o.lb = rs ? sol.sum_lb : sol.lb.private_sum();
          o.alpha_c = sol.alpha_c;
          for (std::size_t r = 0; r < draws.size(); ++r) {
            const CMat P = realize_precoders(sol.transforms, ys[r]);
            accumulate(o, instantaneous_rates(draws[r].h, P), rs, w);
          }
        } else {
          IwmmseOptions opt = cfg.iwmmse;
          opt.rate_splitting = m == Method::kIwmmseRs;
          o.lb = kNaN;
          for (std::size_t r = 0; r < draws.size(); ++r) {
            std::vector<CVec> h_hat;
            for (int k = 0; k < K; ++k) h_hat.push_back(mmse_estimator(ops, k) * ys[r][static_cast<std::size_t>(k)]);
            const auto res = run_iwmmse(h_hat, p_dl, opt);
            accumulate(o, instantaneous_rates(draws[r].h, res.P), opt.rate_splitting, w);
            o.alpha_c += w * res.P.col(0).squaredNorm() / p_dl;
          }
        }
        o.ok = std::isfinite(o.sum_rate);
        if (!o.ok) o.error = "non-finite rate";
      } catch (const std::exception& e) {
        o = TrialOutcome{};
        o.error = e.what();
      }
    }
  } catch (const std::exception& e) {
    for (auto& o : out) {
      o = TrialOutcome{};
      o.error = e.what();
    }
  }
  return out;
}

RateReport run_sweep(const SweepConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  const int n_pow = static_cast<int>(cfg.p_dl_db.size());
  const int total = cfg.n_iter * n_pow;
  std::vector<std::vector<TrialOutcome>> slots(static_cast<std::size_t>(total));

  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (;;) {
      const int item = next.fetch_add(1);
      if (item >= total) return;
      // Power-major inner order keeps one trial's geometry hot across powers.
      const int trial = item / n_pow;
      const int pj = item % n_pow;
      slots[static_cast<std::size_t>(item)] = run_trial(cfg, trial, pj);
      const int d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(d, total);
      }
    }
  };
  const int n_threads = std::min(cfg.threads, std::max(total, 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  RateReport report;
  report.config = cfg;
  const int K = cfg.scenario.K;
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    for (int pj = 0; pj < n_pow; ++pj) {
      PointSummary s;
      s.method = cfg.methods[mi];
      s.p_dl_db = cfg.p_dl_db[static_cast<std::size_t>(pj)];
      std::vector<double> alpha, common;
      std::vector<std::vector<double>> users(static_cast<std::size_t>(K));
      for (int t = 0; t < cfg.n_iter; ++t) {
        const TrialOutcome& o = slots[static_cast<std::size_t>(t * n_pow + pj)][mi];
        if (!o.ok) {
          ++s.failed;
          report.failures.push_back(method_name(s.method) + " " + std::to_string(s.p_dl_db) + " dB trial " +
                                    std::to_string(t) + ": " + o.error);
          s.trial_sum_rates.push_back(kNaN);
          s.trial_lb.push_back(kNaN);
          continue;
        }
        ++s.trials;
        s.trial_sum_rates.push_back(o.sum_rate);
        s.trial_lb.push_back(o.lb);
        alpha.push_back(o.alpha_c);
        common.push_back(o.common_rate);
        for (int k = 0; k < K; ++k) users[static_cast<std::size_t>(k)].push_back(o.user_rates[static_cast<std::size_t>(k)]);
      }
      std::tie(s.mean_sum_rate, s.stderr_sum_rate) = mean_stderr(s.trial_sum_rates);
      std::tie(s.mean_lb, s.stderr_lb) = mean_stderr(s.trial_lb);
      s.alpha_c = mean_stderr(alpha).first;
      s.common_rate = mean_stderr(common).first;
      for (const auto& u : users) s.user_rates.push_back(mean_stderr(u).first);
      report.points.push_back(std::move(s));
    }
  }
  return report;
}

}  // namespace rsmimo
