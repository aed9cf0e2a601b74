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

#include "rsmimo/types.hpp"

namespace rsmimo {

/// Eigendecomposition of a Hermitian matrix with helpers for matrix
/// functions. Eigenvalues are ascending.
struct HermitianEigen {
  RVec values;
  CMat vectors;

  static HermitianEigen of(const CMat& hermitian);

  /// U diag(f(values)) U^H.
  template <typename F>
  CMat apply(F&& f) const {
    RVec mapped(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) mapped[i] = f(values[i]);
    return vectors * mapped.asDiagonal() * vectors.adjoint();
  }

  double max_value() const { return values.size() ? values.maxCoeff() : 0.0; }
  double min_value() const { return values.size() ? values.minCoeff() : 0.0; }

  /// Eigenvalues floored at floor_rel * max(values); an all-zero matrix is
  /// floored at floor_rel itself.
  RVec floored(double floor_rel) const;

  /// Principal square root, negative rounding noise clipped to zero.
  CMat sqrt() const;
  /// Inverse square root on floored eigenvalues.
  CMat inv_sqrt(double floor_rel) const;
  /// Inverse on floored eigenvalues.
  CMat inverse(double floor_rel) const;
};

/// Relative floor used whenever a rank-deficient covariance is inverted.
inline constexpr double kEigenFloor = 1e-10;

/// Matrix-free Kronecker operator x -> (B^T (x) A) x, realized as
/// vec(X) -> vec(A X B) on the reshape X of size A.cols() x B.rows().
class KronOperator {
 public:
  KronOperator(CMat left, CMat right);

  Eigen::Index rows() const { return left_.rows() * right_.cols(); }
  Eigen::Index cols() const { return left_.cols() * right_.rows(); }

  CVec apply(const CVec& x) const;
  CMat apply_matrix(const CMat& x) const;

  /// x^H (B^T (x) A) x.
  cplx quadratic_form(const CVec& x) const;

  /// Explicit (B^T (x) A). Only for small instances and tests.
  CMat materialize() const;

  const CMat& left() const { return left_; }
  const CMat& right() const { return right_; }

 private:
  CMat left_;
  CMat right_;
};

/// (B^T (x) A) x without allocating the Kronecker product.
CVec apply_kron(const CMat& left, const CMat& right, const CVec& x);

/// Dense Kronecker product a (x) b.
CMat kron(const CMat& a, const CMat& b);

/// Column-stacking vec and its inverse.
CVec vec(const CMat& m);
CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols);

/// Frobenius inner product <X, Y> = tr(X^H Y).
inline cplx inner(const CMat& x, const CMat& y) { return (x.conjugate().cwiseProduct(y)).sum(); }

/// Real part of tr(A B) for Hermitian A, B, computed in O(n^2).
inline double trace_product_real(const CMat& a, const CMat& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

/// (M + M^H) / 2.
inline CMat hermitian_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }

/// Block-diagonal stack of square blocks.
CMat block_diagonal(const std::vector<CMat>& blocks);

}  // namespace rsmimo
