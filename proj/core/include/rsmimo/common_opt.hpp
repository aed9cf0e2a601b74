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

#include <optional>
#include <string>
#include <vector>

#include "rsmimo/sinr.hpp"

namespace rsmimo {

enum class CommonMethod {
  kSinrIncrease,  ///< projected step iteration on the worst user
  kMaxMin,        ///< KKT fixed point of the max-min problem
};

struct CommonOptions {
  CommonMethod method = CommonMethod::kMaxMin;
  double u_max = 1.0;
  int n_max = 500;         ///< inner steps per sweep
  double outer_tol = 1e-4;
  int max_sweeps = 50;
  double u_min = 1e-12;    ///< inner loop stops once u falls below this
  int maxmin_max_iter = 200;
  double maxmin_tol = 1e-6;  ///< relative change of min gamma
};

std::string common_method_name(CommonMethod m);
CommonMethod parse_common_method(const std::string& s);

struct CommonTraceEntry {
  int sweep = 0;
  int step = 0;
  int worst_user = 0;
  double gamma_min = 0.0;
  double u = 0.0;
  double power = 0.0;
  bool accepted = false;
};

struct CommonResult {
  CMat a_c;
  std::vector<double> gamma;
  int sweeps = 0;
  int steps = 0;
  int accepted = 0;
  std::vector<CommonTraceEntry> trace;
  double min_gamma() const;
};

/// sigma_k^2 for every user, see common_interference.
std::vector<double> common_noise(const std::vector<CMat>& a_p, const SinrOperators& ops);

/// eta_k = z_k^H a_c / (a_c^H Z_k a_c + sigma_k^2).
std::vector<cplx> update_eta(const CMat& a_c, const std::vector<double>& sigma2, const SinrOperators& ops);

/// 2 Re{eta^* z_k^H a_c} - |eta|^2 (a_c^H Z_k a_c + sigma_k^2).
double eta_objective(const CMat& a_c, cplx eta, double sigma2, const SinrOperators& ops, int k);

/// Works in whitened coordinates At = A_c C_y^{1/2}, where the common power
/// is ||At||_F^2 and the common SINR of user k is
/// |<C_k Phi C_yk^{-1/2}, At_k>|^2 / (tr(C_k At At^H) + sigma_k^2).
class CommonSolver {
 public:
  CommonSolver(const SinrOperators& ops, std::vector<double> sigma2, double budget);

  CMat whiten(const CMat& a_c) const;
  CMat unwhiten(const CMat& at) const;

  std::vector<double> sinrs(const CMat& at) const;
  std::vector<cplx> etas(const CMat& at) const;

  /// Step quantities that do not depend on u.
  struct Basis {
    int ell = 0;
    cplx eta = 0.0;
    CMat b2, b3, b4;
    cplx c0 = 0.0, c1 = 0.0;
    double t_norm2 = 0.0;
  };
  Basis basis(const CMat& at, int ell, cplx eta) const;

  /// Normalized direction W/||W|| in whitened coordinates; empty when the
  /// projected direction vanishes.
  CMat direction(const CMat& at, const Basis& b, double u) const;
  /// (1 - u) At + v W/||W||; empty when the direction vanishes.
  CMat candidate(const CMat& at, const Basis& b, double u) const;

  double budget() const { return budget_; }
  const SinrOperators& ops() const { return ops_; }
  /// C_k Phi C_yk^{-1/2}, the whitened mean direction of user k.
  const CMat& zcheck(int k) const { return zcheck_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& sigma2() const { return sigma2_; }

 private:
  const SinrOperators& ops_;
  std::vector<double> sigma2_;
  double budget_;
  std::vector<CMat> zcheck_;  // C_k Phi C_yk^{-1/2}
};

struct CommonStep {
  bool accepted = false;
  CMat a_c;           ///< candidate (accepted or not); empty if no direction
  std::vector<double> gamma;
  double gamma_min = 0.0;
  int worst_user = 0;
  double u_next = 0.0;
};

/// One step of the common SINR increasing iteration in original coordinates.
CommonStep sinr_increase_step(const CMat& a_c, const std::vector<cplx>& eta, const std::vector<double>& sigma2,
                              const SinrOperators& ops, double budget, double u, const CommonOptions& opt = {});

/// Max-min common SINR over whitened precoders of power budget(). Every
/// stationary point has blocks At_k = v_k (I + sum_j r_j C_j)^{-1} zcheck_k;
/// the weights r follow a fixed point and the v_k come from an exact
/// max-min power allocation. Returns the whitened iterate.
CMat maxmin_common(const CommonSolver& solver, const CommonOptions& opt, CommonResult* res = nullptr);

/// A_ck = Phi for every user, scaled to the budget.
CMat common_initialization(const SinrOperators& ops, double budget);

/// Algorithm 2 with the step-size controlled inner iteration.
CommonResult optimize_common(const std::vector<CMat>& a_p, const SinrOperators& ops, double alpha_c, double p_dl,
                             const std::optional<CMat>& init = std::nullopt, const CommonOptions& opt = {});

}  // namespace rsmimo
