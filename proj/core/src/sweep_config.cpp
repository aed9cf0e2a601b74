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

#include "rsmimo/sweep_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace rsmimo {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto t = trim(v);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid number for key '" + key + "': '" + v + "'");
  }
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto t = trim(v);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("invalid integer for key '" + key + "': '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  const auto t = trim(v);
  if (t == "1" || t == "true" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "no") return false;
  throw ConfigError("invalid boolean for key '" + key + "': '" + v + "'");
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::kBilinearRs: return "bilinear_rs";
    case Method::kBilinearNoRs: return "bilinear_nors";
    case Method::kIwmmseRs: return "iwmmse_rs";
    case Method::kIwmmseNoRs: return "iwmmse_nors";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::kBilinearRs, Method::kBilinearNoRs, Method::kIwmmseRs, Method::kIwmmseNoRs}) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + name + "'");
}

bool is_bilinear(Method m) { return m == Method::kBilinearRs || m == Method::kBilinearNoRs; }

void SweepConfig::validate() const {
  scenario.validate();
  if (T_dl < 1) throw ConfigError("T_dl must be >= 1");
  if (T_dl >= scenario.M) throw ConfigError("T_dl must be < M");
  if (T_ch < T_dl) throw ConfigError("T_ch must be >= T_dl");
  if (p_dl_db.empty()) throw ConfigError("p_dl_db must not be empty");
  if (n_iter < 1) throw ConfigError("n_iter must be >= 1");
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (split.golden.tol <= 0.0 || split.golden.tol >= 1.0) throw ConfigError("golden_tol must lie in (0, 1)");
}

SweepConfig default_config() { return SweepConfig{}; }

void apply_profile(SweepConfig& cfg, const std::string& profile) {
  if (profile == "paper" || profile.empty()) {
    return;
  }
  if (profile == "desk") {
    cfg.scenario.M = 16;
    cfg.scenario.K = 3;
    cfg.T_dl = 4;
    cfg.n_iter = 50;
    return;
  }
  throw ConfigError("unknown profile '" + profile + "'");
}

void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& value) {
  auto& sc = cfg.scenario;
  if (key == "M") sc.M = static_cast<int>(to_int(key, value));
  else if (key == "K") sc.K = static_cast<int>(to_int(key, value));
  else if (key == "T_dl") cfg.T_dl = static_cast<int>(to_int(key, value));
  else if (key == "T_ch") cfg.T_ch = static_cast<int>(to_int(key, value));
  else if (key == "radius_m") sc.cell_radius = to_double(key, value);
  else if (key == "N_path") sc.n_path = static_cast<int>(to_int(key, value));
  else if (key == "N_rays") sc.n_rays = static_cast<int>(to_int(key, value));
  else if (key == "nu") sc.nu = to_double(key, value);
  else if (key == "path_loss_exponent") sc.path_loss_exponent = to_double(key, value);
  else if (key == "center_half_width_deg") sc.center_half_width = to_double(key, value) * kDegree;
  else if (key == "cluster_half_width_deg") sc.cluster_half_width = to_double(key, value) * kDegree;
  else if (key == "ray_half_width_deg") sc.ray_half_width = to_double(key, value) * kDegree;
  else if (key == "seed") sc.seed = static_cast<std::uint64_t>(to_int(key, value));
  else if (key == "p_dl_db") {
    cfg.p_dl_db.clear();
    for (const auto& v : split_list(value)) cfg.p_dl_db.push_back(to_double(key, v));
  } else if (key == "n_iter") cfg.n_iter = static_cast<int>(to_int(key, value));
  else if (key == "realizations") cfg.realizations = static_cast<int>(to_int(key, value));
  else if (key == "methods") {
    cfg.methods.clear();
    for (const auto& v : split_list(value)) cfg.methods.push_back(parse_method(v));
  } else if (key == "fixed_geometry") cfg.fixed_geometry = to_bool(key, value);
  else if (key == "common_own_mean") cfg.common_own_mean = to_bool(key, value);
  else if (key == "sigma_n2") cfg.sigma_n2 = to_double(key, value);
  else if (key == "threads") cfg.threads = static_cast<int>(to_int(key, value));
  else if (key == "out") cfg.out_dir = trim(value);
  else if (key == "private_tol") cfg.split.priv.tol = to_double(key, value);
  else if (key == "private_max_iter") cfg.split.priv.max_iter = static_cast<int>(to_int(key, value));
  else if (key == "common_solver") cfg.split.common.method = parse_common_method(trim(value));
  else if (key == "common_maxmin_max_iter") cfg.split.common.maxmin_max_iter = static_cast<int>(to_int(key, value));
  else if (key == "common_maxmin_tol") cfg.split.common.maxmin_tol = to_double(key, value);
  else if (key == "common_u_max") cfg.split.common.u_max = to_double(key, value);
  else if (key == "common_n_max") cfg.split.common.n_max = static_cast<int>(to_int(key, value));
  else if (key == "common_outer_tol") cfg.split.common.outer_tol = to_double(key, value);
  else if (key == "common_max_sweeps") cfg.split.common.max_sweeps = static_cast<int>(to_int(key, value));
  else if (key == "golden_tol") cfg.split.golden.tol = to_double(key, value);
  else if (key == "golden_max_eval") cfg.split.golden.max_eval = static_cast<int>(to_int(key, value));
  else if (key == "iwmmse_tol") cfg.iwmmse.tol = to_double(key, value);
  else if (key == "iwmmse_max_iter") cfg.iwmmse.max_iter = static_cast<int>(to_int(key, value));
  else if (key == "iwmmse_alpha_init") cfg.iwmmse.alpha_init = to_double(key, value);
  else throw ConfigError("unknown key '" + key + "'");
}

void parse_config_text(SweepConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

void parse_config_into(SweepConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  parse_config_text(cfg, ss.str(), path);
}

SweepConfig parse_config(const std::string& path) {
  SweepConfig cfg = default_config();
  parse_config_into(cfg, path);
  return cfg;
}

}  // namespace rsmimo
