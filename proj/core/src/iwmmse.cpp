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

#include "rsmimo/iwmmse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsmimo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CMat stack_rows(const std::vector<CVec>& h_hat) {
  const int K = static_cast<int>(h_hat.size());
  CMat H(K, h_hat.front().size());
  for (int k = 0; k < K; ++k) H.row(k) = h_hat[static_cast<std::size_t>(k)].adjoint();
  return H;
}

// (D G + nu I)^{-1} X restricted to the indices with d_k > 0. Rows outside
// the active set are zero. Returns false when the system is singular.
bool solve_reduced(const CMat& G, const RVec& d, const CMat& X, double nu, CMat& Y) {
  const Eigen::Index K = d.size();
  std::vector<Eigen::Index> act;
  for (Eigen::Index k = 0; k < K; ++k) {
    if (d[k] > 0.0) act.push_back(k);
  }
  Y = CMat::Zero(K, X.cols());
  if (act.empty()) return true;
  const auto n = static_cast<Eigen::Index>(act.size());
  CMat A(n, n);
  CMat B(n, X.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = d[act[i]] * G(act[i], act[j]);
    A(i, i) += nu;
    B.row(i) = X.row(act[i]);
  }
  Eigen::FullPivLU<CMat> lu(A);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) return false;
  const CMat sol = lu.solve(B);
  for (Eigen::Index i = 0; i < n; ++i) Y.row(act[i]) = sol.row(i);
  return true;
}

struct PrecoderSystem {
  const CMat& H;
  const CMat& G;
  RVec dc, dp;
  CVec xc;
  CMat Xp;
  bool rs;

  // Power of the stationary point for multiplier nu; inf if singular.
  double power(double nu, CMat* P) const {
    CMat Yc, Yp;
    double total = 0.0;
    if (rs) {
      if (!solve_reduced(G, dc, xc, nu, Yc)) return kInf;
      total += (Yc.adjoint() * G * Yc).trace().real();
    }
    if (!solve_reduced(G, dp, Xp, nu, Yp)) return kInf;
    total += (Yp.adjoint() * G * Yp).trace().real();
    if (P) {
      P->resize(H.cols(), H.rows() + 1);
      if (rs) P->col(0) = H.adjoint() * Yc; else P->col(0).setZero();
      P->rightCols(H.rows()) = H.adjoint() * Yp;
    }
    return total;
  }

  CMat solve(double p_dl) const {
    CMat P;
    const double p0 = power(0.0, &P);
    if (p0 <= p_dl) return P;
    double scale = std::max(G.diagonal().real().maxCoeff() * std::max(dp.maxCoeff(), rs ? dc.maxCoeff() : 0.0), 1e-300);
    double lo = 0.0, hi = scale;
    int guard = 0;
    while (power(hi, nullptr) > p_dl) {
      lo = hi;
      hi *= 2.0;
      if (++guard > 200) throw NumericalError("iwmmse: power multiplier bracket failed");
    }
    for (int it = 0; it < 200; ++it) {
      const double ph = power(hi, nullptr);
      if (p_dl - ph <= 1e-10 * p_dl) break;
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (power(mid, nullptr) > p_dl) lo = mid; else hi = mid;
    }
    power(hi, &P);
    const double p = P.squaredNorm();
    if (p > p_dl) P *= std::sqrt(p_dl / p);
    return P;
  }
};

}  // namespace

CVec mmse_channel_estimate(const CVec& y, const CMat& C, const CMat& phi, double sigma_n2) {
  CMat cy = phi.adjoint() * C * phi;
  cy += sigma_n2 * CMat::Identity(phi.cols(), phi.cols());
  Eigen::LDLT<CMat> ldlt(hermitian_part(cy));
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().real().minCoeff() > 0.0)) {
    throw ConfigError("mmse_channel_estimate: observation covariance is singular");
  }
  return C * (phi * ldlt.solve(y));
}

CMat mmse_estimator(const SinrOperators& ops, int k) { return ops.c_phi(k) * ops.cy_inverse(k); }

void update_equalizers_weights(IwmmseState& s, const std::vector<CVec>& h_hat) {
  const int K = static_cast<int>(h_hat.size());
  s.t_c.assign(K, 0.0);
  s.t_p.assign(K, 0.0);
  s.g_c.assign(K, 0.0);
  s.g_p.assign(K, 0.0);
  s.eps_c.assign(K, 1.0);
  s.eps_p.assign(K, 1.0);
  s.u_c.assign(K, 1.0);
  s.u_p.assign(K, 1.0);
  for (int k = 0; k < K; ++k) {
    const CVec e = s.P.adjoint() * h_hat[static_cast<std::size_t>(k)];  // p^H h_hat
    double priv = 1.0;
    for (int j = 0; j < K; ++j) priv += std::norm(e[j + 1]);
    s.t_p[k] = priv;
    s.t_c[k] = priv + std::norm(e[0]);
    s.g_c[k] = e[0] / s.t_c[k];
    s.g_p[k] = e[k + 1] / s.t_p[k];
    s.eps_c[k] = 1.0 - std::norm(e[0]) / s.t_c[k];
    s.eps_p[k] = 1.0 - std::norm(e[k + 1]) / s.t_p[k];
    s.u_c[k] = 1.0 / s.eps_c[k];
    s.u_p[k] = 1.0 / s.eps_p[k];
  }
}

void update_auxiliaries(IwmmseState& s, const std::vector<CVec>& h_hat) {
  const int K = static_cast<int>(h_hat.size());
  s.w_c.assign(K, 0.0);
  s.w_p.assign(K, 0.0);
  for (int k = 0; k < K; ++k) {
    const CVec& h = h_hat[static_cast<std::size_t>(k)];
    double priv = 1.0;
    for (int j = 0; j < K; ++j) priv += std::norm(h.dot(s.P.col(j + 1)));
    const cplx ec = h.dot(s.P.col(0));
    s.w_c[k] = ec / (priv + std::norm(ec));
    s.w_p[k] = h.dot(s.P.col(k + 1)) / priv;
  }
}

double weighted_mse_common(const CMat& P, const std::vector<CVec>& h_hat, cplx w, int k) {
  const CVec e = P.adjoint() * h_hat[static_cast<std::size_t>(k)];
  const double t = e.squaredNorm() + 1.0;
  const cplx x = std::conj(e[0]);  // h^H p_c
  return std::norm(w) * t - 2.0 * (std::conj(w) * x).real() + 1.0;
}

double weighted_mse_private(const CMat& P, const std::vector<CVec>& h_hat, cplx w, int k) {
  const CVec e = P.adjoint() * h_hat[static_cast<std::size_t>(k)];
  const double t = e.tail(e.size() - 1).squaredNorm() + 1.0;
  const cplx x = std::conj(e[k + 1]);
  return std::norm(w) * t - 2.0 * (std::conj(w) * x).real() + 1.0;
}

double augmented_objective(const IwmmseState& s, const CMat& P, const std::vector<CVec>& h_hat, bool rs) {
  const int K = static_cast<int>(h_hat.size());
  double worst = rs ? -kInf : 0.0;
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    if (rs) {
      const double c = s.u_c[k] * weighted_mse_common(P, h_hat, s.w_c[k], k) - std::log(s.u_c[k]);
      worst = std::max(worst, c);
    }
    total += s.u_p[k] * weighted_mse_private(P, h_hat, s.w_p[k], k) - std::log(s.u_p[k]);
  }
  return worst + total;
}

double xi_mmse(double eps) {
  const double u = 1.0 / eps;
  return u * eps - std::log2(u);
}

CMat solve_precoders(const IwmmseState& s, const std::vector<CVec>& h_hat, double p_dl, const IwmmseOptions& opt) {
  const int K = static_cast<int>(h_hat.size());
  const CMat H = stack_rows(h_hat);
  const CMat G = H * H.adjoint();
  const bool rs = opt.rate_splitting;

  PrecoderSystem sys{H, G, RVec::Zero(K), RVec::Zero(K), CVec::Zero(K), CMat::Zero(K, K), rs};
  for (int k = 0; k < K; ++k) sys.Xp(k, k) = s.u_p[k] * s.w_p[k];

  CMat best = s.P;
  double best_j = augmented_objective(s, s.P, h_hat, rs);

  RVec mu = RVec::Constant(K, 1.0 / K);
  const int rounds = rs ? std::max(opt.dual_iter, 1) : 1;
  for (int t = 0; t < rounds; ++t) {
    for (int k = 0; k < K; ++k) {
      const double a = rs ? mu[k] * s.u_c[k] * std::norm(s.w_c[k]) : 0.0;
      sys.dc[k] = a;
      sys.xc[k] = rs ? mu[k] * s.u_c[k] * s.w_c[k] : 0.0;
      sys.dp[k] = a + s.u_p[k] * std::norm(s.w_p[k]);
    }
    const CMat P = sys.solve(p_dl);
    const double j = augmented_objective(s, P, h_hat, rs);
    if (j < best_j) {
      best_j = j;
      best = P;
    }
    if (!rs) break;
    // Exponentiated-gradient ascent of the dual weights on the simplex.
    RVec c(K);
    for (int k = 0; k < K; ++k) {
      c[k] = s.u_c[k] * weighted_mse_common(P, h_hat, s.w_c[k], k) - std::log(s.u_c[k]);
    }
    const double range = c.maxCoeff() - c.minCoeff();
    if (!(range > 1e-12)) break;
    const double step = 2.0 / (range * std::sqrt(t + 1.0));
    for (int k = 0; k < K; ++k) mu[k] *= std::exp(step * (c[k] - c.maxCoeff()));
    mu /= mu.sum();
  }
  return best;
}

CMat iwmmse_initialization(const std::vector<CVec>& h_hat, double p_dl, const IwmmseOptions& opt) {
  const int K = static_cast<int>(h_hat.size());
  const Eigen::Index M = h_hat.front().size();
  CMat P = CMat::Zero(M, K + 1);
  const double alpha = opt.rate_splitting ? opt.alpha_init : 0.0;
  if (opt.rate_splitting) {
    CVec sum = CVec::Zero(M);
    for (const auto& h : h_hat) sum += h;
    if (sum.norm() > 0.0) P.col(0) = std::sqrt(alpha * p_dl) * sum / sum.norm();
  }
  for (int k = 0; k < K; ++k) {
    const double n = h_hat[static_cast<std::size_t>(k)].norm();
    if (n > 0.0) P.col(k + 1) = std::sqrt((1.0 - alpha) * p_dl / K) * h_hat[static_cast<std::size_t>(k)] / n;
  }
  return P;
}

IwmmseResult run_iwmmse(const std::vector<CVec>& h_hat, double p_dl, const IwmmseOptions& opt) {
  if (h_hat.empty()) throw ConfigError("run_iwmmse: no users");
  if (!(p_dl > 0.0)) throw ConfigError("run_iwmmse: P_dl must be > 0");
  IwmmseState s;
  s.P = iwmmse_initialization(h_hat, p_dl, opt);
  IwmmseResult res;
  double j_prev = kInf;
  for (int it = 0; it <= opt.max_iter; ++it) {
    update_equalizers_weights(s, h_hat);
    update_auxiliaries(s, h_hat);
    const double j = augmented_objective(s, s.P, h_hat, opt.rate_splitting);
    res.trace.push_back({it, j, s.P.squaredNorm()});
    res.iterations = it;
    if (it > 0 && std::abs(j_prev - j) < opt.tol * std::max(std::abs(j_prev), 1e-300)) break;
    if (it == opt.max_iter) break;
    j_prev = j;
    s.P = solve_precoders(s, h_hat, p_dl, opt);
  }
  res.P = s.P;
  return res;
}

}  // namespace rsmimo
