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

// Acceptance gate. Prints one PASS/FAIL line per criterion; exit status is
// nonzero if any selected criterion fails. All thresholds live in the
// constants below.

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "../oracles.hpp"
#include "../test_util.hpp"
#include "rsmimo/common_opt.hpp"
#include "rsmimo/iwmmse.hpp"
#include "rsmimo/power_split.hpp"
#include "rsmimo/private_opt.hpp"
#include "rsmimo/report.hpp"
#include "rsmimo/sweep.hpp"

namespace rsmimo {
namespace {

// 1: sampling oracle
constexpr int kMcDraws = 100000;
constexpr double kMcRelTol = 0.03;
constexpr int kMcInstances = 3;
// 2: dense operators
constexpr double kDenseTol = 1e-10;
// 3: monotonicity
constexpr int kMonoInstances = 100;
constexpr double kF1aSlack = 1e-9;
constexpr double kIwmmseSlack = 1e-8;
constexpr double kPowerSlack = 1e-6;
// 4: golden section
constexpr double kGoldenTol = 1e-12;
// 5, 6, 7: sweeps
constexpr int kPaperTrials = 300;
constexpr int kDeskTrials = 50;
constexpr double kNoRsSaturation = 1.5;   // bits, 30 -> 40 dB
constexpr double kRsGrowth = 1.0;         // bits, 30 -> 40 dB
constexpr double kPaperGap = 2.0;         // bits at 40 dB
constexpr double kDeskGap = 1.0;
constexpr double kLowPowerSigmas = 2.0;   // standard errors at 0 and 5 dB
constexpr double kIwmmseGap = 3.0;        // bits at 40 dB
constexpr double kIwmmseSaturation = 1.0; // bits, 30 -> 40 dB
constexpr double kBoundSigmas = 2.0;

struct Verdict {
  bool pass = true;
  void require(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Verdict::require(bool ok, const char* fmt, ...) {
  std::printf("    [%s] ", ok ? "ok" : "XX");
  va_list ap;
  va_start(ap, fmt);
  std::vprintf(fmt, ap);
  va_end(ap);
  std::printf("\n");
  std::fflush(stdout);
  pass = pass && ok;
}

void report_line(int n, const Verdict& v, const std::string& what, double seconds) {
  std::printf("CRITERION %d %s  %s  (%.1f s)\n", n, v.pass ? "PASS" : "FAIL", what.c_str(), seconds);
  std::fflush(stdout);
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

Verdict criterion_sampling() {
  Verdict v;
  double worst = 0.0;
  for (int inst = 0; inst < kMcInstances; ++inst) {
    const auto ops = testing::random_ops(1000 + inst, 8, 2, 4, 0.2, 2 + 2 * inst);
    Rng rng = make_stream(1000 + inst, 7, Stream::kTest);
    const auto tr = testing::mixed_transforms(ops, rng);
    const auto mc = testing::monte_carlo_moments(tr, ops, kMcDraws, 1000 + inst);
    auto check = [&](const char* name, int k, double est, double closed) {
      const double e = testing::rel_diff(est, closed);
      worst = std::max(worst, e);
      if (e > kMcRelTol) v.require(false, "instance %d user %d %s: sampled %.6g closed %.6g", inst, k, name, est, closed);
    };
    for (int k = 0; k < 2; ++k) {
      const double m2 = std::norm(ops.mean(tr.a_p[k], k));
      check("private numerator", k, std::norm(mc.mean_p[k]), m2);
      check("own Q form", k, mc.second_p[k][k] - std::norm(mc.mean_p[k]), ops.q_form(tr.a_p[k], k, k));
      for (int i = 0; i < 2; ++i) {
        if (i != k) check("cross Q form", k, mc.second_p[k][i], ops.q_form(tr.a_p[i], i, k));
      }
      check("common numerator", k, std::norm(mc.mean_c[k]), std::norm(ops.common_mean(tr.a_c, k)));
      check("Z form", k, mc.second_c[k] - std::norm(mc.mean_c[k]), ops.z_form(tr.a_c, k));
      check("quartic moment", k,
            testing::monte_carlo_quartic(tr.a_p[k], ops.phi(), ops.C(k), kMcDraws, 1000 + inst + 10 * k),
            quartic_moment(tr.a_p[k], ops.phi(), ops.C(k)));
    }
  }
  v.require(worst <= kMcRelTol, "largest relative deviation %.4f (limit %.2f, %d draws, %d instances)", worst,
            kMcRelTol, kMcDraws, kMcInstances);
  return v;
}

// ---------------------------------------------------------------- 2

Verdict criterion_dense() {
  Verdict v;
  double worst = 0.0;
  int cases = 0;
  for (int K = 1; K <= 2; ++K) {
    for (int T = 1; T <= 2; ++T) {
      for (int M = std::max(T, 2); M <= 4; ++M) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
          const auto ops = testing::random_ops(2000 + 100 * seed + 10 * M + 3 * K + T, M, K, T, 0.3);
          worst = std::max(worst, testing::dense_operator_error(ops, seed));
          ++cases;
        }
      }
    }
  }
  v.require(worst <= kDenseTol, "largest scaled deviation %.3g over %d operator sets (limit %.0e)", worst, cases,
            kDenseTol);
  return v;
}

// ---------------------------------------------------------------- 3

struct RandomInstance {
  SinrOperators ops;
  double p_dl;
  double alpha_c;
};

RandomInstance random_instance(int i) {
  Rng rng = make_stream(3000 + i, 0, Stream::kTest);
  const int M = i % 2 ? 16 : 8;
  const int K = 2 + i % 3;
  const double db = uniform(rng, 0.0, 40.0);
  const double p = std::pow(10.0, db / 10.0);
  return {testing::scenario_ops(3000 + i, M, K, 4, p), p, uniform(rng, 0.05, 0.95)};
}

Verdict criterion_monotone() {
  Verdict v;
  int f1a_bad = 0, alg3_bad = 0, iw_bad = 0, power_bad = 0;
  double f1a_worst = 0.0, iw_worst = 0.0, power_worst = 0.0;
  long alg3_steps = 0, iw_steps = 0, f1a_steps = 0;
  auto power_check = [&](double p, double budget) {
    const double over = (p - budget) / budget;
    power_worst = std::max(power_worst, over);
    if (over > kPowerSlack) ++power_bad;
  };
  for (int i = 0; i < kMonoInstances; ++i) {
    const auto inst = random_instance(i);
    const auto& ops = inst.ops;
    const double bp = (1.0 - inst.alpha_c) * inst.p_dl;
    const double bc = inst.alpha_c * inst.p_dl;

    const auto priv = optimize_private(ops, inst.alpha_c, inst.p_dl);
    for (std::size_t t = 1; t < priv.trace.size(); ++t) {
      const double prev = priv.trace[t - 1].f1a, cur = priv.trace[t].f1a;
      const double drop = (prev - cur) / std::max(std::abs(prev), 1e-300);
      f1a_worst = std::max(f1a_worst, drop);
      if (drop > kF1aSlack) ++f1a_bad;
      ++f1a_steps;
    }
    for (const auto& e : priv.trace) power_check(e.power, bp);

    CommonOptions step;
    step.method = CommonMethod::kSinrIncrease;
    const auto com = optimize_common(priv.a_p, ops, inst.alpha_c, inst.p_dl, std::nullopt, step);
    double last = -1.0;
    for (const auto& e : com.trace) {
      if (e.accepted) {
        if (!(e.gamma_min > last)) ++alg3_bad;
        ++alg3_steps;
      }
      if (e.gamma_min < last) ++alg3_bad;
      last = e.gamma_min;
      power_check(e.power, bc);
    }
    power_check(ops.common_power(com.a_c), bc);
    const auto mm = optimize_common(priv.a_p, ops, inst.alpha_c, inst.p_dl);
    power_check(ops.common_power(mm.a_c), bc);

    // IWMMSE on MMSE estimates of one channel draw of the same instance.
    Rng rng = make_stream(3000 + i, 1, Stream::kTest);
    const auto h = sample_channels(ops.covariances(), rng);
    std::vector<CVec> hh;
    for (int k = 0; k < ops.K(); ++k) hh.push_back(mmse_estimator(ops, k) * observe(h[k], ops.phi(), ops.sigma_n2(), rng));
    for (bool rs : {true, false}) {
      IwmmseOptions o;
      o.rate_splitting = rs;
      const auto r = run_iwmmse(hh, inst.p_dl, o);
      for (std::size_t t = 1; t < r.trace.size(); ++t) {
        const double prev = r.trace[t - 1].objective, cur = r.trace[t].objective;
        const double rise = (cur - prev) / std::max(std::abs(prev), 1e-300);
        iw_worst = std::max(iw_worst, rise);
        if (rise > kIwmmseSlack) ++iw_bad;
        ++iw_steps;
      }
      for (const auto& e : r.trace) power_check(e.power, inst.p_dl);
    }
  }
  v.require(f1a_bad == 0, "private objective: %d decreases in %ld iterations, worst relative drop %.2e", f1a_bad,
            f1a_steps, f1a_worst);
  v.require(alg3_bad == 0, "common step iteration: %d violations over %ld accepted steps", alg3_bad, alg3_steps);
  v.require(iw_bad == 0, "IWMMSE objective: %d increases in %ld iterations, worst relative rise %.2e", iw_bad,
            iw_steps, iw_worst);
  v.require(power_bad == 0, "power constraints: %d violations, worst relative excess %.2e", power_bad, power_worst);
  return v;
}

// ---------------------------------------------------------------- 4

Verdict criterion_golden() {
  Verdict v;
  double contraction = 0.0, identity = 0.0;
  auto scan = [&](const GoldenResult& r) {
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      const auto& t = r.trace[i];
      const double w0 = r.trace[0].b - r.trace[0].a;
      contraction = std::max(contraction, std::abs((t.b - t.a) - w0 * std::pow(kGolden, static_cast<double>(i))));
      identity = std::max(identity, std::abs(t.alpha_c1 + t.alpha_c2 - t.a - t.b));
    }
  };
  GoldenOptions fine;
  fine.tol = 1e-6;
  fine.max_eval = 100;
  const auto sur = golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, fine);
  scan(sur);
  const auto coarse = golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0);
  scan(coarse);
  const auto ops = testing::scenario_ops(4000, 16, 3, 4, 1000.0);
  const auto real = golden_section(ops, 1000.0);
  scan(real.search);
  v.require(contraction <= kGoldenTol, "width vs g^n deviation %.2e over %zu iterations", contraction,
            sur.trace.size() + coarse.trace.size() + real.search.trace.size() - 3);
  v.require(identity <= kGoldenTol, "probe identity deviation %.2e", identity);
  v.require(std::abs(sur.best_x - 0.3) <= fine.tol, "surrogate optimum %.8f (tol %.0e)", sur.best_x, fine.tol);
  v.require(std::abs(coarse.best_x - 0.3) <= GoldenOptions{}.tol, "surrogate optimum at default tol %.5f (tol %.2f)",
            coarse.best_x, GoldenOptions{}.tol);
  v.require(real.best.alpha_c >= 0.0 && real.best.alpha_c <= 1.0, "pipeline search alpha_c = %.4f in [0, 1]",
            real.best.alpha_c);
  return v;
}

// ---------------------------------------------------------------- 5, 6, 7

struct Sweeps {
  RateReport paper, desk;
  bool have_paper = false, have_desk = false;
};

SweepConfig sweep_config(const std::string& profile, int threads) {
  SweepConfig cfg = default_config();
  apply_profile(cfg, profile);
  cfg.n_iter = profile == "desk" ? kDeskTrials : kPaperTrials;
  cfg.p_dl_db = {0, 5, 30, 40};
  if (profile == "desk") cfg.methods = {Method::kBilinearRs, Method::kBilinearNoRs};
  cfg.threads = threads;
  return cfg;
}

RateReport run_logged(const SweepConfig& cfg, const std::string& name, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  int last = -1;
  const auto rep = run_sweep(cfg, [&](int done, int total) {
    const int pct = 100 * done / total;
    if (pct / 10 != last / 10) {
      std::printf("    %s sweep %3d%% (%d/%d, %.0f s)\n", name.c_str(), pct, done, total, since(t0));
      std::fflush(stdout);
      last = pct;
    }
  });
  if (!out_dir.empty()) emit_report(rep, (std::filesystem::path(out_dir) / name).string());
  return rep;
}

void print_table(const RateReport& r) {
  for (const auto& p : r.points) {
    std::printf("    %-14s %5.1f dB  mean %8.4f  se %.4f  lb %8.4f  alpha_c %.3f  failed %d\n",
                method_name(p.method).c_str(), p.p_dl_db, p.mean_sum_rate, p.stderr_sum_rate, p.mean_lb, p.alpha_c,
                p.failed);
  }
}

// Mean and standard error of per-trial differences a - b.
std::pair<double, double> paired(const PointSummary& a, const PointSummary& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.trial_sum_rates.size(); ++i) d.push_back(a.trial_sum_rates[i] - b.trial_sum_rates[i]);
  return mean_stderr(d);
}

void shape_checks(Verdict& v, const RateReport& r, const char* scale, double gap_min, bool low_power) {
  const auto& rs30 = r.at(Method::kBilinearRs, 30), &rs40 = r.at(Method::kBilinearRs, 40);
  const auto& no30 = r.at(Method::kBilinearNoRs, 30), &no40 = r.at(Method::kBilinearNoRs, 40);
  v.require(r.failed_trials() == 0, "%s: %d failed trials", scale, r.failed_trials());
  const double sat = no40.mean_sum_rate - no30.mean_sum_rate;
  v.require(sat < kNoRsSaturation, "%s (a) no-RS 30->40 dB increase %.3f bits (< %.1f)", scale, sat, kNoRsSaturation);
  const double grow = rs40.mean_sum_rate - rs30.mean_sum_rate;
  v.require(grow > kRsGrowth, "%s (b) RS 30->40 dB increase %.3f bits (> %.1f)", scale, grow, kRsGrowth);
  const auto [gap, gap_se] = paired(rs40, no40);
  v.require(gap >= gap_min, "%s (c) RS - no-RS at 40 dB %.3f bits (paired se %.3f, >= %.1f)", scale, gap, gap_se,
            gap_min);
  if (low_power) {
    for (double db : {0.0, 5.0}) {
      const auto& a = r.at(Method::kBilinearRs, db);
      const auto& b = r.at(Method::kBilinearNoRs, db);
      const double d = a.mean_sum_rate - b.mean_sum_rate;
      const double se = std::hypot(a.stderr_sum_rate, b.stderr_sum_rate);
      const auto [pd, pse] = paired(a, b);
      v.require(std::abs(d) <= kLowPowerSigmas * se,
                "%s (d) %.0f dB: RS %.4f vs no-RS %.4f, |diff| %.4f <= %.0f x %.4f (paired diff %.4f, se %.4f)", scale,
                db, a.mean_sum_rate, b.mean_sum_rate, std::abs(d), kLowPowerSigmas, se, pd, pse);
    }
  }
}

Verdict criterion_shape(const Sweeps& s) {
  Verdict v;
  if (s.have_paper) shape_checks(v, s.paper, "paper", kPaperGap, true);
  if (s.have_desk) shape_checks(v, s.desk, "desk", kDeskGap, false);
  return v;
}

Verdict criterion_baseline(const Sweeps& s) {
  Verdict v;
  const auto& r = s.paper;
  const auto [gap, se] = paired(r.at(Method::kBilinearRs, 40), r.at(Method::kIwmmseRs, 40));
  v.require(gap >= kIwmmseGap, "bilinear RS - IWMMSE RS at 40 dB %.3f bits (paired se %.3f, >= %.1f)", gap, se,
            kIwmmseGap);
  const double sat = r.at(Method::kIwmmseNoRs, 40).mean_sum_rate - r.at(Method::kIwmmseNoRs, 30).mean_sum_rate;
  v.require(sat < kIwmmseSaturation, "IWMMSE no-RS 30->40 dB increase %.3f bits (< %.1f)", sat, kIwmmseSaturation);
  return v;
}

Verdict criterion_bound(const Sweeps& s) {
  Verdict v;
  auto scan = [&](const RateReport& r, const char* scale) {
    for (const auto& p : r.points) {
      if (!is_bilinear(p.method)) continue;
      const double slack = p.mean_sum_rate - p.mean_lb;
      v.require(slack >= -kBoundSigmas * p.stderr_sum_rate, "%s %-13s %4.0f dB: mean %.4f, bound %.4f, se %.4f",
                scale, method_name(p.method).c_str(), p.p_dl_db, p.mean_sum_rate, p.mean_lb, p.stderr_sum_rate);
    }
  };
  if (s.have_paper) scan(s.paper, "paper");
  if (s.have_desk) scan(s.desk, "desk");
  return v;
}

// ---------------------------------------------------------------- 8

std::string csv_body(const std::string& csv) { return csv.substr(csv.find('\n') + 1); }

Verdict criterion_determinism(int threads) {
  Verdict v;
  SweepConfig cfg = default_config();
  apply_profile(cfg, "desk");
  cfg.n_iter = 4;
  cfg.p_dl_db = {0, 20, 40};
  cfg.threads = 1;
  const auto a = report_csv(run_sweep(cfg));
  const auto b = report_csv(run_sweep(cfg));
  cfg.threads = std::max(threads, 4);
  const auto c = report_csv(run_sweep(cfg));
  v.require(csv_body(a) == csv_body(b), "repeat run, 1 thread: CSV bodies identical (%zu bytes)", csv_body(a).size());
  v.require(csv_body(a) == csv_body(c), "%d threads vs 1 thread: CSV bodies identical", cfg.threads);
  return v;
}

}  // namespace
}  // namespace rsmimo

int main(int argc, char** argv) {
  using namespace rsmimo;
  CLI::App app{"rsmimo acceptance criteria"};
  std::vector<int> only;
  std::string out_dir;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool skip_paper = false;
  app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 8));
  app.add_option("--out", out_dir, "write sweep reports below this directory");
  app.add_option("--threads", threads, "worker threads for the sweeps")->check(CLI::PositiveNumber);
  app.add_flag("--skip-paper", skip_paper, "skip the paper-scale sweep (criteria 5 and 7 then cover desk only)");
  CLI11_PARSE(app, argc, argv);

  std::set<int> sel(only.begin(), only.end());
  if (sel.empty()) sel = {1, 2, 3, 4, 5, 6, 7, 8};
  if (skip_paper && sel.count(6)) {
    std::fprintf(stderr, "criterion 6 needs the paper-scale sweep\n");
    return 2;
  }
  bool all = true;
  auto run = [&](int n, const std::string& what, auto&& fn) {
    if (!sel.count(n)) return;
    std::printf("criterion %d: %s\n", n, what.c_str());
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    const Verdict v = fn();
    report_line(n, v, what, since(t0));
    all = all && v.pass;
  };

  run(1, "closed-form moments match sampling", criterion_sampling);
  run(2, "structured operators match dense matrices", criterion_dense);
  run(3, "solver monotonicity and power feasibility", criterion_monotone);
  run(4, "golden-section contract", criterion_golden);

  Sweeps sw;
  const auto t_sweep = std::chrono::steady_clock::now();
  if (sel.count(5) || sel.count(6) || sel.count(7)) {
    if (!skip_paper) {
      std::printf("paper-scale sweep (M=64, K=5, T_dl=8, %d trials, %d threads)\n", kPaperTrials, threads);
      sw.paper = run_logged(sweep_config("paper", threads), "paper", out_dir);
      sw.have_paper = true;
      print_table(sw.paper);
    }
    if (sel.count(5) || sel.count(7)) {
      std::printf("desk-scale sweep (M=16, K=3, T_dl=4, %d trials)\n", kDeskTrials);
      const auto t0 = std::chrono::steady_clock::now();
      sw.desk = run_logged(sweep_config("desk", threads), "desk", out_dir);
      sw.have_desk = true;
      std::printf("    desk sweep took %.1f s\n", since(t0));
      print_table(sw.desk);
    }
  }
  const double sweep_s = since(t_sweep);
  run(5, skip_paper ? "sum-rate curve shape (desk only)" : "sum-rate curve shape", [&] { return criterion_shape(sw); });
  run(6, "ordering against IWMMSE", [&] { return criterion_baseline(sw); });
  run(7, "hardening bound below achieved rate", [&] { return criterion_bound(sw); });
  if (sel.count(5) || sel.count(6) || sel.count(7)) std::printf("sweeps took %.1f s in total\n", sweep_s);
  run(8, "determinism across runs and thread counts", [&] { return criterion_determinism(threads); });

  std::printf("ACCEPTANCE %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
