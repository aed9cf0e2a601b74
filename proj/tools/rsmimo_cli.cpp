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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsmimo/report.hpp"
#include "rsmimo/sweep.hpp"
#include "rsmimo/training.hpp"

namespace {

using namespace rsmimo;

struct CommonFlags {
  std::string config;
  std::string profile;
  std::string methods;
  std::string p_dl_db;
  std::string out;
  long long seed = -1;
  int trials = -1;
  int threads = -1;
  int realizations = -1;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "key=value configuration file");
  app->add_option("--profile", f.profile, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  app->add_option("--methods", f.methods, "comma separated subset of bilinear_rs,bilinear_nors,iwmmse_rs,iwmmse_nors");
  app->add_option("--p-dl-db", f.p_dl_db, "comma separated power grid in dB");
  app->add_option("--seed", f.seed, "RNG seed");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--trials", f.trials, "trials per power point");
  app->add_option("--threads", f.threads, "worker threads");
  app->add_option("--realizations", f.realizations, "channel draws per trial");
}

// defaults, then profile, then config file, then flags
SweepConfig resolve(const CommonFlags& f) {
  SweepConfig cfg = default_config();
  apply_profile(cfg, f.profile);
  if (!f.config.empty()) parse_config_into(cfg, f.config);
  if (!f.methods.empty()) apply_setting(cfg, "methods", f.methods);
  if (!f.p_dl_db.empty()) apply_setting(cfg, "p_dl_db", f.p_dl_db);
  if (f.seed >= 0) cfg.scenario.seed = static_cast<std::uint64_t>(f.seed);
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.trials > 0) cfg.n_iter = f.trials;
  if (f.threads > 0) cfg.threads = f.threads;
  if (f.realizations > 0) cfg.realizations = f.realizations;
  cfg.validate();
  return cfg;
}

int simulate(const CommonFlags& f, bool quiet) {
  const SweepConfig cfg = resolve(f);
  ProgressFn progress;
  if (!quiet) {
    progress = [](int done, int total) {
      std::fprintf(stderr, "\r%d/%d work items", done, total);
      if (done == total) std::fprintf(stderr, "\n");
    };
  }
  const RateReport report = run_sweep(cfg, progress);
  for (const auto& path : emit_report(report, cfg.out_dir)) std::cout << "wrote " << path << "\n";
  const int failed = report.failed_trials();
  if (failed > 0) {
    std::cerr << failed << " trial(s) failed\n";
    for (const auto& msg : report.failures) std::cerr << "  " << msg << "\n";
    return 2;
  }
  return 0;
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << s;
}

int trace(const CommonFlags& f, int trial, double db) {
  const SweepConfig cfg = resolve(f);
  const double p_dl = std::pow(10.0, db / 10.0);
  const double sigma_n2 = cfg.sigma_n2 >= 0.0 ? cfg.sigma_n2 : training_noise_variance(p_dl, cfg.T_dl);
  Rng geo = make_stream(cfg.scenario.seed, cfg.fixed_geometry ? 0 : static_cast<std::uint64_t>(trial), Stream::kGeometry);
  const auto cov = build_covariance(drop_users(cfg.scenario, geo), cfg.scenario);
  const auto pilots = build_pilot_matrix(cfg.scenario.M, cfg.T_dl);
  SinrOperators ops(cov, observation_covariances(cov, pilots.phi, sigma_n2));
  ops.set_common_own_mean(cfg.common_own_mean);

  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  char buf[256];

  const auto split = golden_section(ops, p_dl, cfg.split);
  std::string g = "iteration,a,b,alpha_c1,alpha_c2,R1,R2\n";
  for (const auto& e : split.search.trace) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", e.iteration, e.a, e.b, e.alpha_c1,
                  e.alpha_c2, e.r1, e.r2);
    g += buf;
  }
  write_text(fs::path(cfg.out_dir) / "golden_trace.csv", g);

  const double alpha = split.best.alpha_c;
  const auto priv = optimize_private(ops, alpha, p_dl, std::nullopt, cfg.split.priv);
  std::string p = "iteration,f1a,power\n";
  for (const auto& e : priv.trace) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", e.iteration, e.f1a, e.power);
    p += buf;
  }
  write_text(fs::path(cfg.out_dir) / "private_trace.csv", p);

  const auto common = optimize_common(priv.a_p, ops, alpha, p_dl, std::nullopt, cfg.split.common);
  std::string c = "sweep,step,worst_user,gamma_min,u,power,accepted\n";
  for (const auto& e : common.trace) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.12g,%.6g,%.12g,%d\n", e.sweep, e.step, e.worst_user + 1, e.gamma_min,
                  e.u, e.power, e.accepted ? 1 : 0);
    c += buf;
  }
  write_text(fs::path(cfg.out_dir) / "common_trace.csv", c);

  std::printf("alpha_c=%.4f lb_sum=%.4f private_iters=%d common_steps=%d\n", alpha, split.best.sum_lb,
              priv.iterations, common.steps);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-splitting bilinear precoding simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rsmimo::version_string());

  CommonFlags sim_flags;
  bool quiet = false;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo sum-rate sweep over P_dl");
  add_common(sim, sim_flags);
  sim->add_flag("--quiet", quiet, "suppress progress output");

  CommonFlags trace_flags;
  int trial = 0;
  double db = 30.0;
  auto* tr = app.add_subcommand("trace", "Dump solver convergence traces for one trial");
  add_common(tr, trace_flags);
  tr->add_option("--trial", trial, "trial index (selects the geometry)");
  tr->add_option("--power-db", db, "P_dl in dB");

  CLI11_PARSE(app, argc, argv);
  try {
    if (sim->parsed()) return simulate(sim_flags, quiet);
    if (tr->parsed()) return trace(trace_flags, trial, db);
  } catch (const rsmimo::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
