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
#include <vector>

#include "rsmimo/sinr.hpp"

namespace rsmimo {

struct PrivateOptions {
  double tol = 1e-5;
  int max_iter = 200;
  double bisection_eps = 1e-10;
  int max_doublings = 200;
};

struct PrivateTraceEntry {
  int iteration = 0;
  double f1a = 0.0;
  double power = 0.0;
};

struct PrivateResult {
  std::vector<CMat> a_p;
  std::vector<double> alpha;
  std::vector<cplx> beta;
  double lambda = 0.0;
  int iterations = 0;
  std::vector<PrivateTraceEntry> trace;
};

/// Lagrangian dual transform objective. Natural logs scaled by 1/ln 2, so
/// alpha = gamma maximizes it and the value there is sum log2(1 + gamma).
double f1a(const std::vector<CMat>& a_p, const std::vector<double>& alpha, const SinrOperators& ops);

std::vector<double> update_alpha(const std::vector<CMat>& a_p, const SinrOperators& ops);

std::vector<cplx> update_beta(const std::vector<CMat>& a_p, const std::vector<double>& alpha,
                              const SinrOperators& ops);

/// Quadratic-transform surrogate f2a (natural log units, without the
/// log(1+alpha) - alpha constant).
double f2a(const std::vector<CMat>& a_p, const std::vector<double>& alpha, const std::vector<cplx>& beta,
           const SinrOperators& ops);

/// True when q_k is numerically zero; such users get no private power.
std::vector<bool> degenerate_users(const SinrOperators& ops);

/// Closed-form a_pk(lambda) for fixed alpha, beta, evaluated in the
/// eigenbasis of S = sum_j |beta_j|^2 C_j so that every lambda costs O(K M).
class PrivateLambdaSolver {
 public:
  PrivateLambdaSolver(const SinrOperators& ops, const std::vector<double>& alpha, const std::vector<cplx>& beta);

  double power(double lambda) const;
  std::vector<CMat> solve(double lambda) const;

 private:
  const SinrOperators& ops_;
  RVec s_;
  CMat u_;
  double cutoff_ = 0.0;
  std::vector<CMat> btilde_cyinv_;  // U^H C_k Phi C_yk^{-1}
  std::vector<RVec> omega_;
  std::vector<cplx> scale_;         // sqrt(1 + alpha_k) beta_k
  std::vector<double> beta2_;

  double inv(double s, double lambda) const;
  cplx coef(int k, double lambda) const;
};

std::vector<CMat> solve_ap_given_lambda(const std::vector<cplx>& beta, const std::vector<double>& alpha,
                                        double lambda, const SinrOperators& ops);

struct LambdaResult {
  double lambda = 0.0;
  std::vector<CMat> a_p;
  double power = 0.0;
};

LambdaResult bisect_lambda(const std::vector<cplx>& beta, const std::vector<double>& alpha,
                           const SinrOperators& ops, double budget, const PrivateOptions& opt = {});

/// A_pk = Phi for every user, scaled to the budget.
std::vector<CMat> private_initialization(const SinrOperators& ops, double budget);

/// Algorithm 1. init (optional) is rescaled to the budget.
PrivateResult optimize_private(const SinrOperators& ops, double alpha_c, double p_dl,
                               const std::optional<std::vector<CMat>>& init = std::nullopt,
                               const PrivateOptions& opt = {});

}  // namespace rsmimo
