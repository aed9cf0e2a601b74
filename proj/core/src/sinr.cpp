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

#include "rsmimo/sinr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rsmimo {

PrecoderTransforms PrecoderTransforms::zeros(int M, int K, int T) {
  PrecoderTransforms tr;
  tr.a_p.assign(static_cast<std::size_t>(K), CMat::Zero(M, T));
  tr.a_c = CMat::Zero(M, K * T);
  return tr;
}

SinrOperators::SinrOperators(const CovarianceSet& cov, const ObservationModel& obs) : cov_(cov), obs_(obs) {
  m_ = cov.M();
  k_ = cov.K();
  t_ = obs.T();
  if (obs.K() != k_ || obs.M() != m_) throw ConfigError("SinrOperators: covariance/observation mismatch");
  for (int k = 0; k < k_; ++k) {
    cphi_.push_back(cov[k] * obs.phi);
    ceig_.push_back(HermitianEigen::of(cov[k]));
    auto ey = HermitianEigen::of(obs.cy[static_cast<std::size_t>(k)]);
    if (ey.min_value() <= 0.0) throw NumericalError("SinrOperators: C_y is not positive definite");
    cyinv_.push_back(ey.apply([](double v) { return 1.0 / v; }));
    cysqrt_.push_back(ey.sqrt());
    cyinvsqrt_.push_back(ey.apply([](double v) { return 1.0 / std::sqrt(v); }));
    cyeig_.push_back(std::move(ey));
  }
}

CVec SinrOperators::q(int k) const { return vec(c_phi(k)); }

CVec SinrOperators::z(int k) const {
  CMat zm = CMat::Zero(m_, k_ * t_);
  zm.middleCols(k * t_, t_) = c_phi(k);
  return vec(zm);
}

CMat SinrOperators::cy_stacked() const { return obs_.stacked(); }

KronOperator SinrOperators::Q(int i, int k) const { return KronOperator(C(k), Cy(i)); }
KronOperator SinrOperators::Z(int k) const { return KronOperator(C(k), cy_stacked()); }
KronOperator SinrOperators::Fp(int k) const { return KronOperator(CMat::Identity(m_, m_), Cy(k)); }
KronOperator SinrOperators::Fc() const { return KronOperator(CMat::Identity(m_, m_), cy_stacked()); }

KronOperator SinrOperators::Z_sqrt(int k) const {
  const HermitianEigen& e = c_eigen(k);
  const RVec f = e.floored(kEigenFloor);
  return KronOperator(e.vectors * f.cwiseSqrt().asDiagonal() * e.vectors.adjoint(), block_diagonal(cysqrt_));
}

KronOperator SinrOperators::Z_inv_sqrt(int k) const {
  return KronOperator(c_eigen(k).inv_sqrt(kEigenFloor), block_diagonal(cyinvsqrt_));
}

double SinrOperators::q_form(const CMat& A, int i, int k) const {
  const CMat ac = A * Cy(i);
  return trace_product_real(C(k) * ac, A.adjoint());
}

RMat SinrOperators::q_matrix(const std::vector<CMat>& a_p) const {
  if (static_cast<int>(a_p.size()) != k_) throw ConfigError("q_matrix: user count mismatch");
  RMat q(k_, k_);
  for (int i = 0; i < k_; ++i) {
    const CMat b = a_p[static_cast<std::size_t>(i)] * cy_sqrt(i);
    const CMat y = b * b.adjoint();
    for (int k = 0; k < k_; ++k) q(i, k) = trace_product_real(C(k), y);
  }
  return q;
}

double SinrOperators::z_form(const CMat& Ac, int k) const {
  double s = 0.0;
  for (int i = 0; i < k_; ++i) s += q_form(Ac.middleCols(i * t_, t_), i, k);
  return s;
}

cplx SinrOperators::mean(const CMat& A, int k) const { return inner(c_phi(k), A); }

cplx SinrOperators::common_mean(const CMat& Ac, int k) const {
  return inner(c_phi(k), Ac.middleCols(k * t_, t_));
}

double SinrOperators::private_power(const std::vector<CMat>& a_p) const {
  double s = 0.0;
  for (int k = 0; k < k_; ++k) s += trace_product_real(a_p[static_cast<std::size_t>(k)] * Cy(k), a_p[static_cast<std::size_t>(k)].adjoint());
  return s;
}

double SinrOperators::common_power(const CMat& Ac) const {
  double s = 0.0;
  for (int i = 0; i < k_; ++i) {
    const auto b = Ac.middleCols(i * t_, t_);
    s += trace_product_real(b * Cy(i), b.adjoint());
  }
  return s;
}

double quartic_moment(const CMat& A, const CMat& phi, const CMat& C) {
  const CMat B = A * phi.adjoint();
  const cplx t = (B * C).trace();
  const double second = trace_product_real(B * C, phi * A.adjoint() * C);
  return std::norm(t) + second;
}

double private_sinr(const PrecoderTransforms& tr, const SinrOperators& ops, int k) {
  if (tr.K() != ops.K()) throw ConfigError("private_sinr: user count mismatch");
  double den = 1.0;
  for (int i = 0; i < ops.K(); ++i) den += ops.q_form(tr.a_p[static_cast<std::size_t>(i)], i, k);
  return std::norm(ops.mean(tr.a_p[static_cast<std::size_t>(k)], k)) / den;
}

std::vector<double> private_sinrs(const std::vector<CMat>& a_p, const SinrOperators& ops) {
  const RMat q = ops.q_matrix(a_p);
  std::vector<double> g;
  for (int k = 0; k < ops.K(); ++k) {
    g.push_back(std::norm(ops.mean(a_p[static_cast<std::size_t>(k)], k)) / (1.0 + q.col(k).sum()));
  }
  return g;
}

double common_interference(const std::vector<CMat>& a_p, const SinrOperators& ops, int k) {
  if (static_cast<int>(a_p.size()) != ops.K()) throw ConfigError("common_interference: user count mismatch");
  double den = 1.0;
  if (ops.common_own_mean()) den += std::norm(ops.mean(a_p[static_cast<std::size_t>(k)], k));
  for (int i = 0; i < ops.K(); ++i) den += ops.q_form(a_p[static_cast<std::size_t>(i)], i, k);
  return den;
}

double common_sinr(const PrecoderTransforms& tr, const SinrOperators& ops, int k) {
  if (tr.a_c.rows() != ops.M() || tr.a_c.cols() != ops.K() * ops.T()) {
    throw ConfigError("common_sinr: A_c dimension mismatch");
  }
  const double den = ops.z_form(tr.a_c, k) + common_interference(tr.a_p, ops, k);
  return std::norm(ops.common_mean(tr.a_c, k)) / den;
}

double LbRates::min_common() const {
  return common.empty() ? 0.0 : *std::min_element(common.begin(), common.end());
}

double LbRates::private_sum() const { return std::accumulate(priv.begin(), priv.end(), 0.0); }

LbRates hardening_rates(const PrecoderTransforms& tr, const SinrOperators& ops) {
  LbRates r;
  const auto gp = private_sinrs(tr.a_p, ops);
  for (int k = 0; k < ops.K(); ++k) {
    r.common.push_back(std::log2(1.0 + common_sinr(tr, ops, k)));
    r.priv.push_back(std::log2(1.0 + gp[static_cast<std::size_t>(k)]));
  }
  return r;
}

CMat realize_precoders(const PrecoderTransforms& tr, const std::vector<CVec>& y) {
  const int K = tr.K();
  if (static_cast<int>(y.size()) != K) throw ConfigError("realize_precoders: user count mismatch");
  const Eigen::Index M = tr.a_c.rows();
  CMat P(M, K + 1);
  P.col(0) = tr.a_c * stack_observations(y);
  for (int k = 0; k < K; ++k) P.col(k + 1) = tr.a_p[static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(k)];
  return P;
}

InstantRates instantaneous_rates(const std::vector<CVec>& h, const CMat& P) {
  const int K = static_cast<int>(h.size());
  if (P.cols() != K + 1) throw ConfigError("instantaneous_rates: precoder matrix must have K + 1 columns");
  InstantRates r;
  double min_c = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k) {
    const CVec g = P.adjoint() * h[static_cast<std::size_t>(k)];  // conj(h_k^H p)
    double priv_total = 0.0;
    for (int j = 0; j < K; ++j) priv_total += std::norm(g[j + 1]);
    const double own = std::norm(g[k + 1]);
    const double gc = std::norm(g[0]) / (priv_total + 1.0);
    const double gp = own / (priv_total - own + 1.0);
    r.gamma_c.push_back(gc);
    r.gamma_p.push_back(gp);
    r.private_rates.push_back(std::log2(1.0 + gp));
    min_c = std::min(min_c, gc);
  }
  r.common_rate = K > 0 ? std::log2(1.0 + min_c) : 0.0;
  r.sum_nors = std::accumulate(r.private_rates.begin(), r.private_rates.end(), 0.0);
  r.sum_rs = r.common_rate + r.sum_nors;
  return r;
}

}  // namespace rsmimo
