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

#include "rsmimo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace rsmimo {

HermitianEigen HermitianEigen::of(const CMat& hermitian) {
  if (hermitian.rows() != hermitian.cols()) {
    throw ConfigError("HermitianEigen: matrix must be square");
  }
  HermitianEigen out;
  if (hermitian.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<CMat> solver(hermitian_part(hermitian));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("HermitianEigen: eigendecomposition did not converge");
  }
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

RVec HermitianEigen::floored(double floor_rel) const {
  const double top = max_value();
  const double floor = top > 0.0 ? floor_rel * top : floor_rel;
  return values.cwiseMax(floor);
}

CMat HermitianEigen::sqrt() const {
  return apply([](double v) { return std::sqrt(std::max(v, 0.0)); });
}

CMat HermitianEigen::inv_sqrt(double floor_rel) const {
  const RVec f = floored(floor_rel);
  return vectors * f.cwiseSqrt().cwiseInverse().asDiagonal() * vectors.adjoint();
}

CMat HermitianEigen::inverse(double floor_rel) const {
  const RVec f = floored(floor_rel);
  return vectors * f.cwiseInverse().asDiagonal() * vectors.adjoint();
}

KronOperator::KronOperator(CMat left, CMat right) : left_(std::move(left)), right_(std::move(right)) {}

CVec KronOperator::apply(const CVec& x) const { return apply_kron(left_, right_, x); }

CMat KronOperator::apply_matrix(const CMat& x) const {
  if (x.rows() != left_.cols() || x.cols() != right_.rows()) {
    throw ConfigError("KronOperator: reshape dimension mismatch");
  }
  return left_ * x * right_;
}

cplx KronOperator::quadratic_form(const CVec& x) const { return x.dot(apply(x)); }

CMat KronOperator::materialize() const { return kron(right_.transpose(), left_); }

CVec apply_kron(const CMat& left, const CMat& right, const CVec& x) {
  if (x.size() != left.cols() * right.rows()) {
    throw ConfigError("apply_kron: vector length does not match operator");
  }
  const Eigen::Map<const CMat> xm(x.data(), left.cols(), right.rows());
  const CMat out = left * xm * right;
  return Eigen::Map<const CVec>(out.data(), out.size());
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVec vec(const CMat& m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw ConfigError("unvec: size mismatch");
  return Eigen::Map<const CMat>(v.data(), rows, cols);
}

CMat block_diagonal(const std::vector<CMat>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  CMat out = CMat::Zero(n, n);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    out.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  return out;
}

}  // namespace rsmimo
