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

#include <vector>

#include "rsmimo/channel_model.hpp"
#include "rsmimo/rng.hpp"
#include "rsmimo/types.hpp"

namespace rsmimo {

/// Orthonormal pilot matrix with antenna reuse (T_dl < M).
struct PilotMatrix {
  CMat phi;  ///< M x T_dl, phi^H phi = I

  int M() const { return static_cast<int>(phi.rows()); }
  int T() const { return static_cast<int>(phi.cols()); }
};

/// Stacks ceil(M / T_dl) copies of I_{T_dl}, truncates to M rows and
/// normalizes columns. Antenna i uses pilot i mod T_dl.
PilotMatrix build_pilot_matrix(int M, int T_dl);

/// sigma_n^2 = 1 / (P_dl T_dl).
double training_noise_variance(double p_dl, int T_dl);

/// y_k = phi^H h_k + n_k, n_k ~ CN(0, sigma_n2 I).
CVec observe(const CVec& h, const CMat& phi, double sigma_n2, Rng& rng);
/// Same with externally supplied white noise n_white ~ CN(0, I).
CVec observe_with(const CVec& h, const CMat& phi, double sigma_n2, const CVec& n_white);

/// Second-order statistics of the training observations.
struct ObservationModel {
  CMat phi;
  double sigma_n2 = 0.0;
  std::vector<CMat> cy;  ///< C_yk = phi^H C_k phi + sigma_n2 I

  int K() const { return static_cast<int>(cy.size()); }
  int T() const { return static_cast<int>(phi.cols()); }
  int M() const { return static_cast<int>(phi.rows()); }

  /// C_y = blkdiag(C_y1, ..., C_yK).
  CMat stacked() const;
  /// D = I_K (x) phi^H.
  CMat selection_map() const;
  /// Offset of user k inside the stacked observation vector.
  int offset(int k) const { return k * T(); }
};

ObservationModel observation_covariances(const CovarianceSet& cov, const CMat& phi, double sigma_n2);

/// Stacked observation y = [y_1; ...; y_K].
CVec stack_observations(const std::vector<CVec>& y);

}  // namespace rsmimo
