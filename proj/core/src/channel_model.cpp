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

#include "rsmimo/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rsmimo/linalg.hpp"

namespace rsmimo {

void ScenarioConfig::validate() const {
  if (M < 2) throw ConfigError("M must be >= 2");
  if (K < 1) throw ConfigError("K must be >= 1");
  if (n_path < 1) throw ConfigError("N_path must be >= 1");
  if (n_rays < 1) throw ConfigError("N_rays must be >= 1");
  if (!(nu > 0.0)) throw ConfigError("nu must be > 0");
  if (!(cell_radius > 0.0)) throw ConfigError("cell radius must be > 0");
  if (path_loss_exponent < 0.0) throw ConfigError("path loss exponent must be >= 0");
  if (center_half_width < 0.0 || cluster_half_width < 0.0 || ray_half_width < 0.0) {
    throw ConfigError("angle half-widths must be >= 0");
  }
}

CVec steering_vector(double theta, double nu, int M) {
  if (M < 1) throw ConfigError("steering_vector: M must be >= 1");
  CVec a(M);
  const double phase = std::numbers::pi * nu * std::sin(theta);
  for (int i = 0; i < M; ++i) a[i] = std::polar(1.0, phase * i);
  return a;
}

UserGeometry drop_users(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  UserGeometry g;
  g.cluster_powers.resize(static_cast<std::size_t>(cfg.n_path));
  double total = 0.0;
  for (int n = 0; n < cfg.n_path; ++n) {
    g.cluster_powers[n] = std::exp(-(n + 1) / 2.0);
    total += g.cluster_powers[n];
  }
  for (auto& b : g.cluster_powers) b /= total;

  for (int k = 0; k < cfg.K; ++k) {
    // 1 - U lies in (0, 1], so d stays strictly positive.
    const double d = cfg.cell_radius * std::sqrt(1.0 - uniform(rng, 0.0, 1.0));
    g.distances.push_back(d);
    g.path_gains.push_back(std::pow(d / kPathLossRefDistance, -cfg.path_loss_exponent));

    const double center = uniform(rng, -cfg.center_half_width, cfg.center_half_width);
    std::vector<double> rays;
    rays.reserve(static_cast<std::size_t>(cfg.n_path * cfg.n_rays));
    for (int n = 0; n < cfg.n_path; ++n) {
      const double cluster = center + uniform(rng, -cfg.cluster_half_width, cfg.cluster_half_width);
      for (int m = 0; m < cfg.n_rays; ++m) {
        rays.push_back(cluster + uniform(rng, -cfg.ray_half_width, cfg.ray_half_width));
      }
    }
    g.angles.push_back(std::move(rays));
  }
  const double top = *std::max_element(g.path_gains.begin(), g.path_gains.end());
  for (auto& p : g.path_gains) p /= top;
  return g;
}

CovarianceSet::CovarianceSet(std::vector<CMat> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ConfigError("CovarianceSet: at least one user required");
  for (const auto& b : blocks_) {
    if (b.rows() != b.cols() || b.rows() != blocks_.front().rows()) {
      throw ConfigError("CovarianceSet: blocks must be square with equal size");
    }
  }
}

CVec CovarianceSet::vectorized(int k) const { return vec((*this)[k]); }

CMat CovarianceSet::stacked() const { return block_diagonal(blocks_); }

CVec CovarianceSet::stacked_vectorized() const { return vec(stacked()); }

void CovarianceSet::validate() const {
  for (int k = 0; k < K(); ++k) {
    const CMat& c = (*this)[k];
    const double scale = std::max(c.cwiseAbs().maxCoeff(), 1e-300);
    if ((c - c.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ConfigError("covariance of user " + std::to_string(k) + " is not Hermitian");
    }
    const auto eig = HermitianEigen::of(c);
    const double tr = c.trace().real();
    if (eig.min_value() < -1e-10 * std::max(tr, 0.0) / c.rows() - 1e-300) {
      throw ConfigError("covariance of user " + std::to_string(k) + " is not PSD");
    }
  }
}

CovarianceSet build_covariance(const UserGeometry& geom, const ScenarioConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(geom.angles.size()) != cfg.K || static_cast<int>(geom.path_gains.size()) != cfg.K ||
      static_cast<int>(geom.cluster_powers.size()) != cfg.n_path) {
    throw ConfigError("build_covariance: geometry does not match scenario");
  }
  std::vector<CMat> blocks;
  blocks.reserve(static_cast<std::size_t>(cfg.K));
  for (int k = 0; k < cfg.K; ++k) {
    CMat c = CMat::Zero(cfg.M, cfg.M);
    const auto& rays = geom.angles[static_cast<std::size_t>(k)];
    if (static_cast<int>(rays.size()) != cfg.n_path * cfg.n_rays) {
      throw ConfigError("build_covariance: ray count does not match scenario");
    }
    for (int n = 0; n < cfg.n_path; ++n) {
      const double w = geom.cluster_powers[static_cast<std::size_t>(n)] / cfg.n_rays;
      for (int m = 0; m < cfg.n_rays; ++m) {
        const CVec a = steering_vector(rays[static_cast<std::size_t>(n * cfg.n_rays + m)], cfg.nu, cfg.M);
        c.noalias() += w * (a * a.adjoint());
      }
    }
    c *= geom.path_gains[static_cast<std::size_t>(k)];
    blocks.push_back(hermitian_part(c));
  }
  return CovarianceSet(std::move(blocks));
}

ChannelSampler::ChannelSampler(const CovarianceSet& cov) {
  for (int k = 0; k < cov.K(); ++k) {
    const auto eig = HermitianEigen::of(cov[k]);
    const double tr = std::max(cov[k].trace().real(), 0.0);
    if (eig.min_value() < -1e-8 * tr / cov.M() - 1e-300) {
      throw NumericalError("sample_channels: covariance of user " + std::to_string(k) + " is not PSD");
    }
    roots_.push_back(eig.sqrt());
  }
}

std::vector<CVec> ChannelSampler::sample(Rng& rng) const {
  std::vector<CVec> white;
  white.reserve(roots_.size());
  for (const auto& r : roots_) white.push_back(complex_normal_vector(rng, r.rows()));
  return color(white);
}

std::vector<CVec> ChannelSampler::color(const std::vector<CVec>& white) const {
  if (white.size() != roots_.size()) throw ConfigError("ChannelSampler: user count mismatch");
  std::vector<CVec> h;
  h.reserve(roots_.size());
  for (std::size_t k = 0; k < roots_.size(); ++k) h.push_back(roots_[k] * white[k]);
  return h;
}

std::vector<CVec> sample_channels(const CovarianceSet& cov, Rng& rng) { return ChannelSampler(cov).sample(rng); }

}  // namespace rsmimo
