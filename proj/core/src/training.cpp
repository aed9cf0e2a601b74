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

#include "rsmimo/training.hpp"

#include <cmath>

#include "rsmimo/linalg.hpp"

namespace rsmimo {

PilotMatrix build_pilot_matrix(int M, int T_dl) {
  if (T_dl < 1) throw ConfigError("T_dl must be >= 1");
  if (T_dl > M) throw ConfigError("T_dl must not exceed M");
  CMat phi = CMat::Zero(M, T_dl);
  for (int i = 0; i < M; ++i) phi(i, i % T_dl) = 1.0;
  for (int j = 0; j < T_dl; ++j) phi.col(j) /= phi.col(j).norm();
  return {std::move(phi)};
}

double training_noise_variance(double p_dl, int T_dl) {
  if (!(p_dl > 0.0)) throw ConfigError("P_dl must be > 0");
  if (T_dl < 1) throw ConfigError("T_dl must be >= 1");
  return 1.0 / (p_dl * T_dl);
}

CVec observe(const CVec& h, const CMat& phi, double sigma_n2, Rng& rng) {
  return observe_with(h, phi, sigma_n2, complex_normal_vector(rng, phi.cols()));
}

CVec observe_with(const CVec& h, const CMat& phi, double sigma_n2, const CVec& n_white) {
  if (h.size() != phi.rows() || n_white.size() != phi.cols()) throw ConfigError("observe: dimension mismatch");
  return phi.adjoint() * h + std::sqrt(sigma_n2) * n_white;
}

CMat ObservationModel::stacked() const { return block_diagonal(cy); }

CMat ObservationModel::selection_map() const {
  return kron(CMat::Identity(K(), K()), phi.adjoint());
}

ObservationModel observation_covariances(const CovarianceSet& cov, const CMat& phi, double sigma_n2) {
  if (cov.M() != phi.rows()) throw ConfigError("observation_covariances: M mismatch");
  if (sigma_n2 < 0.0) throw ConfigError("observation_covariances: negative noise variance");
  ObservationModel obs;
  obs.phi = phi;
  obs.sigma_n2 = sigma_n2;
  const auto T = phi.cols();
  for (int k = 0; k < cov.K(); ++k) {
    CMat c = phi.adjoint() * cov[k] * phi;
    c += sigma_n2 * CMat::Identity(T, T);
    obs.cy.push_back(hermitian_part(c));
  }
  return obs;
}

CVec stack_observations(const std::vector<CVec>& y) {
  Eigen::Index n = 0;
  for (const auto& v : y) n += v.size();
  CVec out(n);
  Eigen::Index offset = 0;
  for (const auto& v : y) {
    out.segment(offset, v.size()) = v;
    offset += v.size();
  }
  return out;
}

}  // namespace rsmimo
