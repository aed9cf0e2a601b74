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

#include "rsmimo/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "rsmimo/version.hpp"

namespace rsmimo {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double json_num(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json vec_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num_json(x));
  return a;
}

std::vector<double> json_vec(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(json_num(x));
  return v;
}

json config_json(const SweepConfig& c) {
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(method_name(m));
  return {
      {"M", c.scenario.M},
      {"K", c.scenario.K},
      {"T_dl", c.T_dl},
      {"T_ch", c.T_ch},
      {"radius_m", c.scenario.cell_radius},
      {"N_path", c.scenario.n_path},
      {"N_rays", c.scenario.n_rays},
      {"nu", c.scenario.nu},
      {"path_loss_exponent", c.scenario.path_loss_exponent},
      {"center_half_width_deg", c.scenario.center_half_width / kDegree},
      {"cluster_half_width_deg", c.scenario.cluster_half_width / kDegree},
      {"ray_half_width_deg", c.scenario.ray_half_width / kDegree},
      {"seed", c.scenario.seed},
      {"p_dl_db", c.p_dl_db},
      {"n_iter", c.n_iter},
      {"realizations", c.realizations},
      {"methods", methods},
      {"fixed_geometry", c.fixed_geometry},
      {"sigma_n2", c.sigma_n2},
      {"common_own_mean", c.common_own_mean},
      {"private_tol", c.split.priv.tol},
      {"private_max_iter", c.split.priv.max_iter},
      {"common_solver", common_method_name(c.split.common.method)},
      {"common_maxmin_max_iter", c.split.common.maxmin_max_iter},
      {"common_maxmin_tol", c.split.common.maxmin_tol},
      {"common_u_max", c.split.common.u_max},
      {"common_n_max", c.split.common.n_max},
      {"common_outer_tol", c.split.common.outer_tol},
      {"common_max_sweeps", c.split.common.max_sweeps},
      {"golden_tol", c.split.golden.tol},
      {"golden_max_eval", c.split.golden.max_eval},
      {"iwmmse_tol", c.iwmmse.tol},
      {"iwmmse_max_iter", c.iwmmse.max_iter},
      {"iwmmse_alpha_init", c.iwmmse.alpha_init},
  };
}

SweepConfig config_from_json(const json& j) {
  SweepConfig c;
  c.scenario.M = j.at("M");
  c.scenario.K = j.at("K");
  c.T_dl = j.at("T_dl");
  c.T_ch = j.at("T_ch");
  c.scenario.cell_radius = j.at("radius_m");
  c.scenario.n_path = j.at("N_path");
  c.scenario.n_rays = j.at("N_rays");
  c.scenario.nu = j.at("nu");
  c.scenario.path_loss_exponent = j.at("path_loss_exponent");
  c.scenario.center_half_width = j.at("center_half_width_deg").get<double>() * kDegree;
  c.scenario.cluster_half_width = j.at("cluster_half_width_deg").get<double>() * kDegree;
  c.scenario.ray_half_width = j.at("ray_half_width_deg").get<double>() * kDegree;
  c.scenario.seed = j.at("seed");
  c.p_dl_db = j.at("p_dl_db").get<std::vector<double>>();
  c.n_iter = j.at("n_iter");
  c.realizations = j.at("realizations");
  c.methods.clear();
  for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
  c.fixed_geometry = j.at("fixed_geometry");
  c.sigma_n2 = j.at("sigma_n2");
  c.common_own_mean = j.at("common_own_mean");
  c.split.priv.tol = j.at("private_tol");
  c.split.priv.max_iter = j.at("private_max_iter");
  c.split.common.method = parse_common_method(j.at("common_solver").get<std::string>());
  c.split.common.maxmin_max_iter = j.at("common_maxmin_max_iter");
  c.split.common.maxmin_tol = j.at("common_maxmin_tol");
  c.split.common.u_max = j.at("common_u_max");
  c.split.common.n_max = j.at("common_n_max");
  c.split.common.outer_tol = j.at("common_outer_tol");
  c.split.common.max_sweeps = j.at("common_max_sweeps");
  c.split.golden.tol = j.at("golden_tol");
  c.split.golden.max_eval = j.at("golden_max_eval");
  c.iwmmse.tol = j.at("iwmmse_tol");
  c.iwmmse.max_iter = j.at("iwmmse_max_iter");
  c.iwmmse.alpha_init = j.at("iwmmse_alpha_init");
  return c;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + p.string() + "'");
}

}  // namespace

std::string version_string() { return std::string(RSMIMO_VERSION) + "+" + RSMIMO_GIT_REV; }

std::string report_csv(const RateReport& report) {
  std::string s = "method,P_dl_dB,mean_sum_rate,stderr,mean_lb,alpha_c,common_rate";
  for (int k = 1; k <= report.config.scenario.K; ++k) s += ",user_" + std::to_string(k);
  s += "\n";
  for (const auto& p : report.points) {
    s += method_name(p.method) + "," + num(p.p_dl_db) + "," + num(p.mean_sum_rate) + "," + num(p.stderr_sum_rate) +
         "," + num(p.mean_lb) + "," + num(p.alpha_c) + "," + num(p.common_rate);
    for (double u : p.user_rates) s += "," + num(u);
    s += "\n";
  }
  return s;
}

std::string report_json(const RateReport& report) {
  json points = json::array();
  for (const auto& p : report.points) {
    points.push_back({
        {"method", method_name(p.method)},
        {"P_dl_dB", p.p_dl_db},
        {"mean_sum_rate", num_json(p.mean_sum_rate)},
        {"stderr", num_json(p.stderr_sum_rate)},
        {"mean_lb", num_json(p.mean_lb)},
        {"stderr_lb", num_json(p.stderr_lb)},
        {"alpha_c", num_json(p.alpha_c)},
        {"common_rate", num_json(p.common_rate)},
        {"user_rates", vec_json(p.user_rates)},
        {"trials", p.trials},
        {"failed", p.failed},
        {"trial_sum_rates", vec_json(p.trial_sum_rates)},
        {"trial_lb", vec_json(p.trial_lb)},
    });
  }
  json j = {
      {"version", RSMIMO_VERSION},
      {"git", RSMIMO_GIT_REV},
      {"config", config_json(report.config)},
      {"points", points},
      {"failures", report.failures},
  };
  return j.dump(2) + "\n";
}

RateReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  RateReport r;
  r.config = config_from_json(j.at("config"));
  for (const auto& p : j.at("points")) {
    PointSummary s;
    s.method = parse_method(p.at("method").get<std::string>());
    s.p_dl_db = p.at("P_dl_dB");
    s.mean_sum_rate = json_num(p.at("mean_sum_rate"));
    s.stderr_sum_rate = json_num(p.at("stderr"));
    s.mean_lb = json_num(p.at("mean_lb"));
    s.stderr_lb = json_num(p.at("stderr_lb"));
    s.alpha_c = json_num(p.at("alpha_c"));
    s.common_rate = json_num(p.at("common_rate"));
    s.user_rates = json_vec(p.at("user_rates"));
    s.trials = p.at("trials");
    s.failed = p.at("failed");
    s.trial_sum_rates = json_vec(p.at("trial_sum_rates"));
    s.trial_lb = json_vec(p.at("trial_lb"));
    r.points.push_back(std::move(s));
  }
  r.failures = j.at("failures").get<std::vector<std::string>>();
  return r;
}

std::string curve_data(const RateReport& report, Method m, bool lower_bound) {
  std::string s = "# P_dl_dB " + std::string(lower_bound ? "mean_lb" : "mean_sum_rate") + "\n";
  for (const auto& p : report.points) {
    if (p.method != m) continue;
    s += num(p.p_dl_db) + " " + num(lower_bound ? p.mean_lb : p.mean_sum_rate) + "\n";
  }
  return s;
}

std::vector<std::string> emit_report(const RateReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    const fs::path p = fs::path(dir) / name;
    write_file(p, text);
    written.push_back(p.string());
  };
  put("results.csv", report_csv(report));
  put("results.json", report_json(report));
  for (Method m : report.config.methods) {
    put("curve_" + method_name(m) + ".dat", curve_data(report, m, false));
    if (is_bilinear(m)) put("curve_" + method_name(m) + "_lb.dat", curve_data(report, m, true));
  }
  return written;
}

}  // namespace rsmimo
