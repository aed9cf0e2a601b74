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

#include "rsmimo/private_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rsmimo {

namespace {

double scale_to_budget(std::vector<CMat>& a_p, const SinrOperators& ops, double budget) {
  const double p = ops.private_power(a_p);
  if (!(p > 0.0)) return 0.0;
  const double s = std::sqrt(budget / p);
  for (auto& a : a_p) a *= s;
  return s;
}

}  // namespace

double f1a(const std::vector<CMat>& a_p, const std::vector<double>& alpha, const SinrOperators& ops) {
  const auto gamma = private_sinrs(a_p, ops);
  double s = 0.0;
  for (int k = 0; k < ops.K(); ++k) {
    const double g = gamma[static_cast<std::size_t>(k)];
    const double a = alpha[static_cast<std::size_t>(k)];
    s += std::log1p(a) - a + (1.0 + a) * g / (1.0 + g);
  }
  return s / std::numbers::ln2;
}

std::vector<double> update_alpha(const std::vector<CMat>& a_p, const SinrOperators& ops) {
  return private_sinrs(a_p, ops);
}

std::vector<cplx> update_beta(const std::vector<CMat>& a_p, const std::vector<double>& alpha,
                              const SinrOperators& ops) {
  const RMat q = ops.q_matrix(a_p);
  std::vector<cplx> beta;
  for (int k = 0; k < ops.K(); ++k) {
    const cplx m = ops.mean(a_p[static_cast<std::size_t>(k)], k);
    const double den = 1.0 + std::norm(m) + q.col(k).sum();
    beta.push_back(std::sqrt(1.0 + alpha[static_cast<std::size_t>(k)]) * m / den);
  }
  return beta;
}

double f2a(const std::vector<CMat>& a_p, const std::vector<double>& alpha, const std::vector<cplx>& beta,
           const SinrOperators& ops) {
  const RMat q = ops.q_matrix(a_p);
  double s = 0.0;
  for (int k = 0; k < ops.K(); ++k) {
    const cplx m = ops.mean(a_p[static_cast<std::size_t>(k)], k);
    const double den = 1.0 + std::norm(m) + q.col(k).sum();
    const cplx b = beta[static_cast<std::size_t>(k)];
    s += 2.0 * std::sqrt(1.0 + alpha[static_cast<std::size_t>(k)]) * (std::conj(b) * m).real() - std::norm(b) * den;
  }
  return s;
}

std::vector<bool> degenerate_users(const SinrOperators& ops) {
  double top = 0.0;
  std::vector<double> n;
  for (int k = 0; k < ops.K(); ++k) {
    n.push_back(ops.c_phi(k).norm());
    top = std::max(top, n.back());
  }
  std::vector<bool> out;
  for (double v : n) out.push_back(!(v > 1e-12 * top) || top == 0.0);
  return out;
}

PrivateLambdaSolver::PrivateLambdaSolver(const SinrOperators& ops, const std::vector<double>& alpha,
                                         const std::vector<cplx>& beta)
    : ops_(ops) {
  const int M = ops.M(), K = ops.K();
  CMat S = CMat::Zero(M, M);
  for (int j = 0; j < K; ++j) {
    const double b2 = std::norm(beta[static_cast<std::size_t>(j)]);
    beta2_.push_back(b2);
    if (b2 > 0.0) S += b2 * ops.C(j);
  }
  const auto eig = HermitianEigen::of(S);
  s_ = eig.values.cwiseMax(0.0);
  u_ = eig.vectors;
  cutoff_ = 1e-13 * std::max(s_.size() ? s_.maxCoeff() : 0.0, 1e-300);
  for (int k = 0; k < K; ++k) {
    const CMat bt = u_.adjoint() * ops.c_phi(k);
    CMat bc = bt * ops.cy_inverse(k);
    omega_.push_back((bc.cwiseProduct(bt.conjugate())).rowwise().sum().real());
    btilde_cyinv_.push_back(std::move(bc));
    scale_.push_back(std::sqrt(1.0 + alpha[static_cast<std::size_t>(k)]) * beta[static_cast<std::size_t>(k)]);
  }
}

double PrivateLambdaSolver::inv(double s, double lambda) const {
  const double d = s + lambda;
  return d > cutoff_ ? 1.0 / d : 0.0;
}

cplx PrivateLambdaSolver::coef(int k, double lambda) const {
  const RVec& w = omega_[static_cast<std::size_t>(k)];
  double g = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) g += w[j] * inv(s_[j], lambda);
  return scale_[static_cast<std::size_t>(k)] / (1.0 + beta2_[static_cast<std::size_t>(k)] * g);
}

double PrivateLambdaSolver::power(double lambda) const {
  double total = 0.0;
  for (int k = 0; k < ops_.K(); ++k) {
    if (scale_[static_cast<std::size_t>(k)] == 0.0) continue;
    const RVec& w = omega_[static_cast<std::size_t>(k)];
    double acc = 0.0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      const double d = inv(s_[j], lambda);
      acc += w[j] * d * d;
    }
    total += std::norm(coef(k, lambda)) * acc;
  }
  return total;
}

std::vector<CMat> PrivateLambdaSolver::solve(double lambda) const {
  std::vector<CMat> out;
  RVec d(s_.size());
  for (Eigen::Index j = 0; j < s_.size(); ++j) d[j] = inv(s_[j], lambda);
  for (int k = 0; k < ops_.K(); ++k) {
    if (scale_[static_cast<std::size_t>(k)] == 0.0) {
      out.push_back(CMat::Zero(ops_.M(), ops_.T()));
      continue;
    }
    out.push_back(coef(k, lambda) * (u_ * (d.asDiagonal() * btilde_cyinv_[static_cast<std::size_t>(k)])));
  }
  return out;
}

std::vector<CMat> solve_ap_given_lambda(const std::vector<cplx>& beta, const std::vector<double>& alpha,
                                        double lambda, const SinrOperators& ops) {
  if (lambda < 0.0) throw ConfigError("solve_ap_given_lambda: lambda must be >= 0");
  bool any = false;
  for (const auto& b : beta) any = any || b != 0.0;
  if (!any) throw NumericalError("solve_ap_given_lambda: all auxiliaries are zero");
  return PrivateLambdaSolver(ops, alpha, beta).solve(lambda);
}

LambdaResult bisect_lambda(const std::vector<cplx>& beta, const std::vector<double>& alpha,
                           const SinrOperators& ops, double budget, const PrivateOptions& opt) {
  if (!(budget > 0.0)) throw ConfigError("bisect_lambda: budget must be > 0");
  bool any = false;
  for (const auto& b : beta) any = any || b != 0.0;
  if (!any) throw NumericalError("bisect_lambda: all auxiliaries are zero");
  const PrivateLambdaSolver solver(ops, alpha, beta);

  LambdaResult res;
  const double p0 = solver.power(0.0);
  if (p0 <= budget) {
    res.a_p = solver.solve(0.0);
    res.power = ops.private_power(res.a_p);
    return res;
  }
  double lo = 0.0, hi = 1.0;
  int doublings = 0;
  while (solver.power(hi) >= budget) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > opt.max_doublings) throw NumericalError("bisect_lambda: bracket expansion failed");
  }
  // Keep hi on the feasible side; stop once its power is within eps of the budget.
  for (int it = 0; it < 400; ++it) {
    const double p_hi = solver.power(hi);
    if (budget - p_hi <= opt.bisection_eps * budget) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (solver.power(mid) >= budget) lo = mid; else hi = mid;
  }
  res.lambda = hi;
  res.a_p = solver.solve(hi);
  res.power = ops.private_power(res.a_p);
  if (res.power > budget) {
    // Rounding in the full-matrix evaluation; shave it off.
    const double s = std::sqrt(budget / res.power);
    for (auto& a : res.a_p) a *= s;
    res.power = ops.private_power(res.a_p);
  }
  return res;
}

std::vector<CMat> private_initialization(const SinrOperators& ops, double budget) {
  std::vector<CMat> a_p(static_cast<std::size_t>(ops.K()), ops.phi());
  const auto deg = degenerate_users(ops);
  for (int k = 0; k < ops.K(); ++k) {
    if (deg[static_cast<std::size_t>(k)]) a_p[static_cast<std::size_t>(k)].setZero();
  }
  scale_to_budget(a_p, ops, budget);
  return a_p;
}

PrivateResult optimize_private(const SinrOperators& ops, double alpha_c, double p_dl,
                               const std::optional<std::vector<CMat>>& init, const PrivateOptions& opt) {
  if (alpha_c < 0.0 || alpha_c > 1.0) throw ConfigError("optimize_private: alpha_c must lie in [0, 1]");
  if (!(p_dl > 0.0)) throw ConfigError("optimize_private: P_dl must be > 0");
  const int K = ops.K();
  const double budget = (1.0 - alpha_c) * p_dl;
  PrivateResult res;
  res.a_p.assign(static_cast<std::size_t>(K), CMat::Zero(ops.M(), ops.T()));
  res.alpha.assign(static_cast<std::size_t>(K), 0.0);
  res.beta.assign(static_cast<std::size_t>(K), cplx(0.0));
  if (budget <= 0.0) return res;

  const auto deg = degenerate_users(ops);
  std::vector<CMat> a;
  if (init && static_cast<int>(init->size()) == K) {
    a = *init;
    for (int k = 0; k < K; ++k) {
      if (deg[static_cast<std::size_t>(k)]) a[static_cast<std::size_t>(k)].setZero();
    }
    if (!(scale_to_budget(a, ops, budget) > 0.0)) a = private_initialization(ops, budget);
  } else {
    a = private_initialization(ops, budget);
  }
  if (!(ops.private_power(a) > 0.0)) return res;  // every user degenerate

  std::vector<double> alpha = update_alpha(a, ops);
  double f_prev = f1a(a, alpha, ops);
  res.trace.push_back({0, f_prev, ops.private_power(a)});
  for (int it = 1; it <= opt.max_iter; ++it) {
    auto beta = update_beta(a, alpha, ops);
    for (int k = 0; k < K; ++k) {
      if (deg[static_cast<std::size_t>(k)]) beta[static_cast<std::size_t>(k)] = 0.0;
    }
    bool any = false;
    for (const auto& b : beta) any = any || b != 0.0;
    if (!any) {
      // All users starved; restart from the initialization once.
      a = private_initialization(ops, budget);
      alpha = update_alpha(a, ops);
      beta = update_beta(a, alpha, ops);
    }
    auto lam = bisect_lambda(beta, alpha, ops, budget, opt);
    const auto alpha_new = update_alpha(lam.a_p, ops);
    const double f = f1a(lam.a_p, alpha_new, ops);
    res.trace.push_back({it, f, lam.power});
    res.iterations = it;
    a = std::move(lam.a_p);
    alpha = alpha_new;
    res.beta = std::move(beta);
    res.lambda = lam.lambda;
    const bool done = std::abs(f - f_prev) < opt.tol * std::max(std::abs(f), 1e-300);
    f_prev = f;
    if (done) break;
  }
  res.a_p = std::move(a);
  res.alpha = std::move(alpha);
  return res;
}

}  // namespace rsmimo
