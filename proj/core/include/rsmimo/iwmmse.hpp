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

#include "rsmimo/sinr.hpp"

namespace rsmimo {

struct IwmmseOptions {
  double tol = 1e-4;
  int max_iter = 100;
  double alpha_init = 0.5;
  bool rate_splitting = true;
  int dual_iter = 60;       ///< multiplier ascent steps in the precoder update
};

/// h_hat = C_k Phi (Phi^H C_k Phi + sigma_n2 I)^{-1} y_k.
CVec mmse_channel_estimate(const CVec& y, const CMat& C, const CMat& phi, double sigma_n2);

/// Statistical part of the estimator, C_k Phi C_yk^{-1}.
CMat mmse_estimator(const SinrOperators& ops, int k);

struct IwmmseState {
  CMat P;                                ///< M x (K + 1), column 0 is p_c
  std::vector<double> t_c, t_p;          ///< received power denominators
  std::vector<cplx> g_c, g_p;            ///< equalizers
  std::vector<cplx> w_c, w_p;            ///< auxiliaries
  std::vector<double> eps_c, eps_p;      ///< MMSEs
  std::vector<double> u_c, u_p;          ///< weights
};

/// Equalizers, MMSEs and weights u = 1/eps for the current P.
void update_equalizers_weights(IwmmseState& s, const std::vector<CVec>& h_hat);
/// w = h_hat^H p / T.
void update_auxiliaries(IwmmseState& s, const std::vector<CVec>& h_hat);

/// MSE of user k for fixed auxiliaries as a function of P.
double weighted_mse_common(const CMat& P, const std::vector<CVec>& h_hat, cplx w, int k);
double weighted_mse_private(const CMat& P, const std::vector<CVec>& h_hat, cplx w, int k);

/// Augmented WMSE objective max_k xi_ck + sum_k xi_pk for fixed (w, u),
/// xi = u eps - ln u. The common term is absent without rate splitting.
double augmented_objective(const IwmmseState& s, const CMat& P, const std::vector<CVec>& h_hat, bool rs);

/// Reported augmented MMSE with log2, equal to 1 - R^inst at optimal weights.
double xi_mmse(double eps);

/// Precoder update for fixed (w, u): minimizes the augmented objective under
/// trace(P P^H) <= P_dl. Never returns a point worse than s.P.
CMat solve_precoders(const IwmmseState& s, const std::vector<CVec>& h_hat, double p_dl, const IwmmseOptions& opt);

struct IwmmseTraceEntry {
  int iteration = 0;
  double objective = 0.0;
  double power = 0.0;
};

struct IwmmseResult {
  CMat P;
  int iterations = 0;
  std::vector<IwmmseTraceEntry> trace;
};

CMat iwmmse_initialization(const std::vector<CVec>& h_hat, double p_dl, const IwmmseOptions& opt);

IwmmseResult run_iwmmse(const std::vector<CVec>& h_hat, double p_dl, const IwmmseOptions& opt = {});

}  // namespace rsmimo
