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
#include <vector>

#include "rsmimo/rng.hpp"
#include "rsmimo/types.hpp"

namespace rsmimo {

inline constexpr double kDegree = 3.14159265358979323846 / 180.0;

/// Cell and scattering parameters of one simulated scenario.
struct ScenarioConfig {
  int M = 64;                 ///< BS antennas
  int K = 5;                  ///< single-antenna users
  double cell_radius = 250.0; ///< meters
  int n_path = 6;             ///< scattering clusters per user
  int n_rays = 20;            ///< rays per cluster
  double nu = 1.1;            ///< DL/UL carrier frequency ratio
  double path_loss_exponent = 1.0;  ///< 0 gives equal gains
  /// Half-widths (radians) of the uniform user center, cluster offset and
  /// ray offset draws.
  double center_half_width = 3.14159265358979323846 / 3.0;
  double cluster_half_width = 3.14159265358979323846 / 3.0;
  double ray_half_width = 3.14159265358979323846 / 36.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Path-loss law: p = (d / d_ref)^(-exponent), normalized per drop so that
/// the strongest user has unit gain.
inline constexpr double kPathLossRefDistance = 100.0;

struct UserGeometry {
  std::vector<double> distances;       ///< meters, (0, cell_radius]
  std::vector<double> path_gains;      ///< linear, max = 1
  std::vector<double> cluster_powers;  ///< sums to 1
  /// Ray angles, indexed [user][cluster * n_rays + ray].
  std::vector<std::vector<double>> angles;
};

/// ULA steering vector at the DL carrier: [a]_i = exp(j pi nu i sin(theta)),
/// i = 0..M-1.
CVec steering_vector(double theta, double nu, int M);

/// Area-uniform user drop inside the disk plus cluster/ray angles.
UserGeometry drop_users(const ScenarioConfig& cfg, Rng& rng);

/// Per-user DL covariance matrices.
class CovarianceSet {
 public:
  CovarianceSet() = default;
  explicit CovarianceSet(std::vector<CMat> blocks);

  int M() const { return blocks_.empty() ? 0 : static_cast<int>(blocks_.front().rows()); }
  int K() const { return static_cast<int>(blocks_.size()); }

  const CMat& operator[](int k) const { return blocks_[static_cast<std::size_t>(k)]; }
  const std::vector<CMat>& blocks() const { return blocks_; }

  /// c_k = vec(C_k).
  CVec vectorized(int k) const;
  /// C_h = blkdiag(C_1, ..., C_K).
  CMat stacked() const;
  /// c_h = vec(C_h).
  CVec stacked_vectorized() const;

  /// Throws ConfigError unless every block is square, Hermitian and
  /// numerically PSD.
  void validate() const;

 private:
  std::vector<CMat> blocks_;
};

/// C_k = p_k sum_n beta_n / N_rays sum_m a a^H, symmetrized.
CovarianceSet build_covariance(const UserGeometry& geom, const ScenarioConfig& cfg);

/// Draws h_k = C_k^{1/2} w_k with cached square roots.
class ChannelSampler {
 public:
  explicit ChannelSampler(const CovarianceSet& cov);

  std::vector<CVec> sample(Rng& rng) const;
  /// Colors given white CN(0, I) vectors.
  std::vector<CVec> color(const std::vector<CVec>& white) const;

  const CMat& sqrt_factor(int k) const { return roots_[static_cast<std::size_t>(k)]; }

 private:
  std::vector<CMat> roots_;
};

std::vector<CVec> sample_channels(const CovarianceSet& cov, Rng& rng);

}  // namespace rsmimo
