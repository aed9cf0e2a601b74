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

#include "rsmimo/common_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsmimo {

namespace {

int argmin(const std::vector<double>& v) {
  return static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
}

double min_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

// Max-min power allocation for fixed block directions d_k. The SINR of user
// k is p_k D_k / (sum_j p_j G_kj + s_k); at the optimum all users share one
// value g and p solves (diag(D) - g G) p = g s. A positive solution exists
// exactly below the Perron bound, and its power grows with g.
struct Allocation {
  double gamma = 0.0;
  Eigen::VectorXd p;
};

Allocation allocate(const Eigen::VectorXd& D, const Eigen::MatrixXd& G, const Eigen::VectorXd& s,
                    const Eigen::VectorXd& norms, double budget) {
  const Eigen::Index K = D.size();
  auto solve = [&](double g, Eigen::VectorXd& p) {
    const Eigen::MatrixXd A = Eigen::MatrixXd(D.asDiagonal()) - g * G;
    p = A.partialPivLu().solve(g * s);
    if (!p.allFinite() || (p.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
    return norms.dot(p);
  };
  double hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < K; ++k) {
    if (G(k, k) > 0.0) hi = std::min(hi, D[k] / G(k, k));
    hi = std::min(hi, D[k] * budget / (norms[k] * s[k]));
  }
  Allocation out;
  out.p = Eigen::VectorXd::Zero(K);
  if (!(hi > 0.0) || !std::isfinite(hi)) return out;
  double lo = 0.0;
  Eigen::VectorXd p;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (solve(mid, p) <= budget) {
      lo = mid;
      out.p = p;
    } else {
      hi = mid;
    }
  }
  out.gamma = lo;
  return out;
}

}  // namespace

std::string common_method_name(CommonMethod m) {
  return m == CommonMethod::kMaxMin ? "maxmin" : "sinr_increase";
}

CommonMethod parse_common_method(const std::string& s) {
  if (s == "maxmin") return CommonMethod::kMaxMin;
  if (s == "sinr_increase") return CommonMethod::kSinrIncrease;
  throw ConfigError("unknown common solver '" + s + "' (expected maxmin or sinr_increase)");
}

double CommonResult::min_gamma() const { return min_of(gamma); }

std::vector<double> common_noise(const std::vector<CMat>& a_p, const SinrOperators& ops) {
  const RMat q = ops.q_matrix(a_p);
  std::vector<double> s;
  for (int k = 0; k < ops.K(); ++k) {
    double den = 1.0 + q.col(k).sum();
    if (ops.common_own_mean()) den += std::norm(ops.mean(a_p[static_cast<std::size_t>(k)], k));
    s.push_back(den);
  }
  return s;
}

std::vector<cplx> update_eta(const CMat& a_c, const std::vector<double>& sigma2, const SinrOperators& ops) {
  std::vector<cplx> eta;
  for (int k = 0; k < ops.K(); ++k) {
    eta.push_back(ops.common_mean(a_c, k) / (ops.z_form(a_c, k) + sigma2[static_cast<std::size_t>(k)]));
  }
  return eta;
}

double eta_objective(const CMat& a_c, cplx eta, double sigma2, const SinrOperators& ops, int k) {
  return 2.0 * (std::conj(eta) * ops.common_mean(a_c, k)).real() - std::norm(eta) * (ops.z_form(a_c, k) + sigma2);
}

CommonSolver::CommonSolver(const SinrOperators& ops, std::vector<double> sigma2, double budget)
    : ops_(ops), sigma2_(std::move(sigma2)), budget_(budget) {
  if (static_cast<int>(sigma2_.size()) != ops.K()) throw ConfigError("CommonSolver: sigma2 size mismatch");
  for (int k = 0; k < ops.K(); ++k) zcheck_.push_back(ops.c_phi(k) * ops.cy_inv_sqrt(k));
}

CMat CommonSolver::whiten(const CMat& a_c) const {
  const int T = ops_.T();
  CMat at(a_c.rows(), a_c.cols());
  for (int k = 0; k < ops_.K(); ++k) at.middleCols(k * T, T) = a_c.middleCols(k * T, T) * ops_.cy_sqrt(k);
  return at;
}

CMat CommonSolver::unwhiten(const CMat& at) const {
  const int T = ops_.T();
  CMat a(at.rows(), at.cols());
  for (int k = 0; k < ops_.K(); ++k) a.middleCols(k * T, T) = at.middleCols(k * T, T) * ops_.cy_inv_sqrt(k);
  return a;
}

std::vector<double> CommonSolver::sinrs(const CMat& at) const {
  const int T = ops_.T();
  CMat S = CMat::Zero(at.rows(), at.rows());
  S.selfadjointView<Eigen::Lower>().rankUpdate(at);
  S = S.selfadjointView<Eigen::Lower>();
  std::vector<double> g;
  for (int k = 0; k < ops_.K(); ++k) {
    const cplx m = inner(zcheck_[static_cast<std::size_t>(k)], at.middleCols(k * T, T));
    const double var = trace_product_real(ops_.C(k), S);
    g.push_back(std::norm(m) / (var + sigma2_[static_cast<std::size_t>(k)]));
  }
  return g;
}

std::vector<cplx> CommonSolver::etas(const CMat& at) const {
  const int T = ops_.T();
  std::vector<cplx> e;
  for (int k = 0; k < ops_.K(); ++k) {
    const cplx m = inner(zcheck_[static_cast<std::size_t>(k)], at.middleCols(k * T, T));
    const double var = (ops_.C(k) * at).cwiseProduct(at.conjugate()).sum().real();
    e.push_back(m / (var + sigma2_[static_cast<std::size_t>(k)]));
  }
  return e;
}

CommonSolver::Basis CommonSolver::basis(const CMat& at, int ell, cplx eta) const {
  const int T = ops_.T();
  const HermitianEigen& e = ops_.c_eigen(ell);
  const RVec cf = e.floored(kEigenFloor);
  const RVec inv = cf.cwiseInverse();
  RVec pi(cf.size());
  for (Eigen::Index a = 0; a < cf.size(); ++a) pi[a] = std::sqrt(std::max(e.values[a], 0.0) / cf[a]);

  Basis b;
  b.ell = ell;
  b.eta = eta;
  const CMat bar = e.vectors.adjoint() * at;
  const RVec rows = bar.rowwise().squaredNorm();
  b.b4 = e.vectors * (inv.asDiagonal() * bar);
  b.b3 = e.vectors * (pi.asDiagonal() * bar);
  b.b2 = CMat::Zero(at.rows(), at.cols());
  b.b2.middleCols(ell * T, T) =
      e.vectors * (inv.asDiagonal() * (e.vectors.adjoint() * zcheck_[static_cast<std::size_t>(ell)]));
  b.t_norm2 = inv.dot(rows);
  const cplx td0 = eta * inner(at.middleCols(ell * T, T), b.b2.middleCols(ell * T, T));
  const cplx td1 = -std::norm(eta) * pi.dot(rows);
  if (b.t_norm2 > 0.0) {
    b.c0 = td0 / b.t_norm2;
    b.c1 = td1 / b.t_norm2;
  }
  return b;
}

CMat CommonSolver::direction(const CMat& at, const Basis& b, double u) const {
  (void)at;
  const CMat w = b.eta * b.b2 - b.c0 * b.b4 + (1.0 - u) * (-std::norm(b.eta) * b.b3 - b.c1 * b.b4);
  const double n = w.norm();
  const double scale = std::max(b.b2.norm() * std::abs(b.eta), 1e-300);
  if (!(n > 1e-14 * scale) || !std::isfinite(n)) return {};
  return w / n;
}

CMat CommonSolver::candidate(const CMat& at, const Basis& b, double u) const {
  CMat w = direction(at, b, u);
  if (w.size() == 0) return {};
  const double v = std::sqrt(budget_ * std::max(2.0 * u - u * u, 0.0));
  CMat out = (1.0 - u) * at + v * w;
  const double p = out.squaredNorm();
  if (p > 0.0) out *= std::sqrt(budget_ / p);
  return out;
}

CommonStep sinr_increase_step(const CMat& a_c, const std::vector<cplx>& eta, const std::vector<double>& sigma2,
                              const SinrOperators& ops, double budget, double u, const CommonOptions& opt) {
  const CommonSolver solver(ops, sigma2, budget);
  const CMat at = solver.whiten(a_c);
  const auto g0 = solver.sinrs(at);
  CommonStep step;
  step.worst_user = argmin(g0);
  step.gamma_min = min_of(g0);
  step.gamma = g0;
  const auto b = solver.basis(at, step.worst_user, eta[static_cast<std::size_t>(step.worst_user)]);
  const CMat cand = solver.candidate(at, b, u);
  step.u_next = u / 2.0;
  if (cand.size() == 0) return step;
  step.a_c = solver.unwhiten(cand);
  const auto g1 = solver.sinrs(cand);
  if (min_of(g1) > step.gamma_min) {
    step.accepted = true;
    step.gamma = g1;
    step.gamma_min = min_of(g1);
    step.u_next = std::min(2.0 * u, opt.u_max);
  }
  return step;
}

CMat common_initialization(const SinrOperators& ops, double budget) {
  const int T = ops.T();
  CMat a = CMat::Zero(ops.M(), ops.K() * T);
  for (int k = 0; k < ops.K(); ++k) a.middleCols(k * T, T) = ops.phi();
  const double p = ops.common_power(a);
  if (p > 0.0) a *= std::sqrt(budget / p);
  return a;
}

CMat maxmin_common(const CommonSolver& solver, const CommonOptions& opt, CommonResult* res) {
  const SinrOperators& ops = solver.ops();
  const int K = ops.K(), M = ops.M(), T = ops.T();
  const double budget = solver.budget();
  const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(solver.sigma2().data(), K);

  CMat best = CMat::Zero(M, K * T);
  double best_min = -1.0;
  std::vector<double> r(static_cast<std::size_t>(K), 0.0);
  double prev = -1.0;
  for (int it = 1; it <= opt.maxmin_max_iter; ++it) {
    CMat S = CMat::Identity(M, M);
    for (int k = 0; k < K; ++k) S += r[static_cast<std::size_t>(k)] * ops.C(k);
    const Eigen::LLT<CMat> llt(S);
    std::vector<CMat> d;
    Eigen::VectorXd D(K), norms(K), zd(K);
    Eigen::MatrixXd G(K, K);
    for (int k = 0; k < K; ++k) {
      d.push_back(llt.solve(solver.zcheck(k)));
      const cplx z = inner(solver.zcheck(k), d.back());
      zd[k] = z.real();
      D[k] = std::norm(z);
      norms[k] = d.back().squaredNorm();
    }
    if (!(D.minCoeff() > 0.0)) break;  // some user cannot be reached
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < K; ++j) {
        const CMat& dj = d[static_cast<std::size_t>(j)];
        G(k, j) = inner(dj, ops.C(k) * dj).real();
      }
    }
    const Allocation a = allocate(D, G, s, norms, budget);
    CMat at(M, K * T);
    for (int k = 0; k < K; ++k) at.middleCols(k * T, T) = std::sqrt(std::max(a.p[k], 0.0)) * d[static_cast<std::size_t>(k)];
    const auto gamma = solver.sinrs(at);
    const double gmin = min_of(gamma);
    const bool improved = gmin > best_min;
    if (improved) {
      best = at;
      best_min = gmin;
    }
    if (res) {
      ++res->steps;
      res->sweeps = it;
      if (improved) ++res->accepted;
      res->trace.push_back({it, it, argmin(gamma), gmin, 0.0, at.squaredNorm(), improved});
    }
    // Stationarity of the power-minimization dual: r_k = g / <zcheck_k, S^{-1} zcheck_k>.
    for (int k = 0; k < K; ++k) r[static_cast<std::size_t>(k)] = a.gamma / zd[k];
    if (prev >= 0.0 && std::abs(a.gamma - prev) <= opt.maxmin_tol * std::max(a.gamma, 1e-300)) break;
    prev = a.gamma;
  }
  if (best_min < 0.0) {
    best = solver.whiten(common_initialization(ops, budget));
    best *= std::sqrt(budget / best.squaredNorm());
  }
  return best;
}

CommonResult optimize_common(const std::vector<CMat>& a_p, const SinrOperators& ops, double alpha_c, double p_dl,
                             const std::optional<CMat>& init, const CommonOptions& opt) {
  if (alpha_c < 0.0 || alpha_c > 1.0) throw ConfigError("optimize_common: alpha_c must lie in [0, 1]");
  if (!(p_dl > 0.0)) throw ConfigError("optimize_common: P_dl must be > 0");
  const double budget = alpha_c * p_dl;
  CommonResult res;
  res.a_c = CMat::Zero(ops.M(), ops.K() * ops.T());
  res.gamma.assign(static_cast<std::size_t>(ops.K()), 0.0);
  if (budget <= 0.0) return res;

  const CommonSolver solver(ops, common_noise(a_p, ops), budget);
  CMat a0;
  if (init && init->rows() == ops.M() && init->cols() == ops.K() * ops.T() && ops.common_power(*init) > 0.0) {
    a0 = *init * std::sqrt(budget / ops.common_power(*init));
  } else {
    a0 = common_initialization(ops, budget);
  }
  if (opt.method == CommonMethod::kMaxMin) {
    const CMat at = maxmin_common(solver, opt, &res);
    res.a_c = solver.unwhiten(at);
    res.gamma = solver.sinrs(at);
    return res;
  }

  CMat at = solver.whiten(a0);
  at *= std::sqrt(budget / at.squaredNorm());
  auto gamma = solver.sinrs(at);
  double gmin = min_of(gamma);
  double u = opt.u_max;

  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    res.sweeps = sweep;
    const double rate_start = std::log2(1.0 + gmin);
    const auto eta = solver.etas(at);
    int ell = -1;
    CommonSolver::Basis b;
    for (int n = 0; n < opt.n_max; ++n) {
      const int worst = argmin(gamma);
      if (worst != ell) {
        ell = worst;
        b = solver.basis(at, ell, eta[static_cast<std::size_t>(ell)]);
      }
      const CMat cand = solver.candidate(at, b, u);
      bool accepted = false;
      if (cand.size() != 0) {
        auto g = solver.sinrs(cand);
        const double m = min_of(g);
        if (m > gmin) {
          accepted = true;
          at = cand;
          gamma = std::move(g);
          gmin = m;
          ell = -1;  // basis depends on the iterate
        }
      }
      ++res.steps;
      res.trace.push_back({sweep, res.steps, worst, gmin, u, at.squaredNorm(), accepted});
      if (accepted) {
        ++res.accepted;
        u = std::min(2.0 * u, opt.u_max);
      } else {
        u *= 0.5;
        if (u < opt.u_min) break;
      }
    }
    u = opt.u_max;
    const double rate_end = std::log2(1.0 + gmin);
    if (rate_end - rate_start <= opt.outer_tol * std::max(rate_end, 1e-300)) break;
  }
  res.a_c = solver.unwhiten(at);
  res.gamma = gamma;
  return res;
}

}  // namespace rsmimo
