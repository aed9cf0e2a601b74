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
#include "rsmimo/linalg.hpp"
#include "rsmimo/training.hpp"
#include "rsmimo/types.hpp"

namespace rsmimo {

/// Deterministic bilinear transforms. p_pk = A_pk y_k, p_c = A_c y where
/// column block k of A_c multiplies y_k.
struct PrecoderTransforms {
  std::vector<CMat> a_p;  ///< K matrices M x T
  CMat a_c;               ///< M x (K T)
  double alpha_c = 0.0;

  static PrecoderTransforms zeros(int M, int K, int T);

  int K() const { return static_cast<int>(a_p.size()); }
  auto common_block(int k, int T) const { return a_c.middleCols(k * T, T); }
};

/// Kronecker-structured statistics shared by the bilinear solvers.
///
/// All quadratic forms are evaluated on the M x T (or M x KT) reshape:
///   a_i^H Q_{i,k} a_i = tr(C_k A_i C_yi A_i^H)
///   a_c^H Z_k a_c     = tr(C_k A_c C_y A_c^H)
///   q_k^H a           = <C_k Phi, A>
class SinrOperators {
 public:
  SinrOperators(const CovarianceSet& cov, const ObservationModel& obs);

  int M() const { return m_; }
  int K() const { return k_; }
  int T() const { return t_; }
  double sigma_n2() const { return obs_.sigma_n2; }

  const CovarianceSet& covariances() const { return cov_; }
  const ObservationModel& observation() const { return obs_; }
  const CMat& C(int k) const { return cov_[k]; }
  const CMat& Cy(int k) const { return obs_.cy[static_cast<std::size_t>(k)]; }
  const CMat& phi() const { return obs_.phi; }

  /// C_k Phi, the reshape of q_k.
  const CMat& c_phi(int k) const { return cphi_[static_cast<std::size_t>(k)]; }
  const HermitianEigen& c_eigen(int k) const { return ceig_[static_cast<std::size_t>(k)]; }
  const HermitianEigen& cy_eigen(int k) const { return cyeig_[static_cast<std::size_t>(k)]; }
  const CMat& cy_inverse(int k) const { return cyinv_[static_cast<std::size_t>(k)]; }
  const CMat& cy_inv_sqrt(int k) const { return cyinvsqrt_[static_cast<std::size_t>(k)]; }
  const CMat& cy_sqrt(int k) const { return cysqrt_[static_cast<std::size_t>(k)]; }

  CVec q(int k) const;
  /// Length M K T, zero outside block k.
  CVec z(int k) const;

  KronOperator Q(int i, int k) const;
  KronOperator Z(int k) const;
  KronOperator Fp(int k) const;
  KronOperator Fc() const;
  /// Factorized Z_k^{1/2} and Z_k^{-1/2}; C_k eigenvalues floored at
  /// kEigenFloor times the largest one.
  KronOperator Z_sqrt(int k) const;
  KronOperator Z_inv_sqrt(int k) const;

  /// tr(C_k A C_yi A^H)
  double q_form(const CMat& A, int i, int k) const;
  /// Q(i, k) = q_form(a_p[i], i, k) for every pair, sharing the products.
  RMat q_matrix(const std::vector<CMat>& a_p) const;
  /// tr(C_k A_c C_y A_c^H)
  double z_form(const CMat& Ac, int k) const;
  /// <C_k Phi, A>
  cplx mean(const CMat& A, int k) const;
  /// <C_k Phi, block k of A_c>
  cplx common_mean(const CMat& Ac, int k) const;

  double private_power(const std::vector<CMat>& a_p) const;
  double common_power(const CMat& Ac) const;

  /// Stacked C_y and C_y^{1/2}.
  CMat cy_stacked() const;

  /// Whether the common-stream bound counts user k's own private mean
  /// |E[h_k^H p_k]|^2 as interference. Off reproduces the closed form that
  /// drops it.
  bool common_own_mean() const { return common_own_mean_; }
  void set_common_own_mean(bool on) { common_own_mean_ = on; }

 private:
  CovarianceSet cov_;
  ObservationModel obs_;
  int m_ = 0, k_ = 0, t_ = 0;
  std::vector<CMat> cphi_;
  std::vector<HermitianEigen> ceig_;
  std::vector<HermitianEigen> cyeig_;
  std::vector<CMat> cyinv_, cysqrt_, cyinvsqrt_;
  bool common_own_mean_ = true;
};

/// E|h^H A Phi^H h|^2 for h ~ CN(0, C).
double quartic_moment(const CMat& A, const CMat& phi, const CMat& C);

double private_sinr(const PrecoderTransforms& tr, const SinrOperators& ops, int k);
/// private_sinr for all users at once.
std::vector<double> private_sinrs(const std::vector<CMat>& a_p, const SinrOperators& ops);

/// Private interference plus noise seen by the common stream of user k:
/// |q_k^H a_pk|^2 + sum_i a_pi^H Q_{i,k} a_pi + 1.
double common_interference(const std::vector<CMat>& a_p, const SinrOperators& ops, int k);

double common_sinr(const PrecoderTransforms& tr, const SinrOperators& ops, int k);

struct LbRates {
  std::vector<double> common;   ///< log2(1 + gamma_ck)
  std::vector<double> priv;     ///< log2(1 + gamma_pk)
  double min_common() const;
  double private_sum() const;
  double sum() const { return min_common() + private_sum(); }
};

LbRates hardening_rates(const PrecoderTransforms& tr, const SinrOperators& ops);

/// Concrete precoders for one realization: column 0 is p_c, column k+1 is p_pk.
CMat realize_precoders(const PrecoderTransforms& tr, const std::vector<CVec>& y);

struct InstantRates {
  std::vector<double> gamma_c;
  std::vector<double> gamma_p;
  double common_rate = 0.0;   ///< log2(1 + min_k gamma_ck)
  std::vector<double> private_rates;
  double sum_rs = 0.0;
  double sum_nors = 0.0;
};

/// P has K + 1 columns [p_c, p_1, ..., p_K].
InstantRates instantaneous_rates(const std::vector<CVec>& h, const CMat& P);

}  // namespace rsmimo
