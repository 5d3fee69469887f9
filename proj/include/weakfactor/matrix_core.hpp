// Copyright 2026 The weakfactor Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense matrix utilities: truncated SVD, projectors, norms and the
// "(1,1) entry replaced by zero" operation used for the missing-entry design.
//
// Everything here is a pure function templated on the Eigen expression type,
// so callers may pass blocks, transposes or maps without materializing them.

#ifndef WEAKFACTOR_MATRIX_CORE_HPP
#define WEAKFACTOR_MATRIX_CORE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "weakfactor/errors.hpp"

namespace weakfactor {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mat = Matrix<double>;
using Vec = Vector<double>;
using Index = Eigen::Index;

/// Top-k singular triplets. Columns of U and V are orthonormal, S is
/// nonincreasing and nonnegative. Each singular vector pair is oriented so
/// that the largest-magnitude entry of the U column is positive.
template <typename Scalar>
struct SvdResult {
  Matrix<Scalar> U;
  Vector<Scalar> S;
  Matrix<Scalar> V;

  Index rank() const { return S.size(); }
  Matrix<Scalar> reconstruct() const {
    return U * S.asDiagonal() * V.transpose();
  }
};

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* where) {
  if (!a.allFinite()) {
    throw ArgumentError(std::string(where) + ": matrix has non-finite entries");
  }
}

// Relative cutoff below which singular values count as zero for pseudo-inverse
// and rank decisions.
template <typename Scalar>
Scalar pinv_cutoff(Index rows, Index cols, Scalar sigma1) {
  return static_cast<Scalar>(std::max(rows, cols)) * sigma1 * Scalar(1e-12);
}

template <typename Scalar>
void orient_columns(Matrix<Scalar>& u, Matrix<Scalar>& v) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index arg = 0;
    u.col(j).cwiseAbs().maxCoeff(&arg);
    if (u(arg, j) < Scalar(0)) {
      u.col(j) = -u.col(j);
      v.col(j) = -v.col(j);
    }
  }
}

template <typename Scalar>
struct Decomposition {
  Matrix<Scalar> U;
  Vector<Scalar> S;
  Matrix<Scalar> V;
};

// Divide-and-conquer SVD, redone with one-sided Jacobi when the fast path
// returns non-finite or unsorted values (seen on some exactly rank-one
// inputs).
template <typename Scalar>
Decomposition<Scalar> decompose(const Matrix<Scalar>& a, unsigned int options,
                                const char* where) {
  Decomposition<Scalar> out;
  auto finite = [&]() {
    for (Index i = 1; i < out.S.size(); ++i)
      if (!(out.S(i) <= out.S(i - 1))) return false;
    return out.S.allFinite() && out.U.allFinite() && out.V.allFinite();
  };
  {
    Eigen::BDCSVD<Matrix<Scalar>> svd(a, options);
    if (svd.info() == Eigen::Success) {
      out.S = svd.singularValues();
      if (options & Eigen::ComputeThinU) out.U = svd.matrixU();
      if (options & Eigen::ComputeThinV) out.V = svd.matrixV();
      if (finite()) return out;
    }
  }
  Eigen::JacobiSVD<Matrix<Scalar>> svd(a, options);
  if (svd.info() != Eigen::Success) {
    throw NumericalError(std::string(where) + ": SVD did not converge");
  }
  out.S = svd.singularValues();
  if (options & Eigen::ComputeThinU) out.U = svd.matrixU();
  if (options & Eigen::ComputeThinV) out.V = svd.matrixV();
  if (!finite()) throw NumericalError(std::string(where) + ": SVD is not finite");
  return out;
}

}  // namespace detail

/// All singular values of `a`, nonincreasing.
template <typename Derived>
Vector<typename Derived::Scalar> singular_values(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return Vector<Scalar>();
  detail::require_finite(a, "singular_values");
  return detail::decompose<Scalar>(a.eval(), 0, "singular_values").S;
}

/// Best rank-k approximation factors. Requires 1 <= k <= min(n, T).
template <typename Derived>
SvdResult<typename Derived::Scalar> svd_truncated(
    const Eigen::MatrixBase<Derived>& a, Index k) {
  using Scalar = typename Derived::Scalar;
  const Index p = std::min(a.rows(), a.cols());
  if (k < 1 || k > p) {
    throw ArgumentError("svd_truncated: k = " + std::to_string(k) +
                        " outside [1, " + std::to_string(p) + "]");
  }
  detail::require_finite(a, "svd_truncated");
  const auto svd = detail::decompose<Scalar>(
      a.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV, "svd_truncated");
  SvdResult<Scalar> out;
  out.U = svd.U.leftCols(k);
  out.S = svd.S.head(k);
  out.V = svd.V.leftCols(k);
  detail::orient_columns(out.U, out.V);
  return out;
}

/// Best rank-k approximation in Frobenius norm; k = 0 gives the zero matrix.
template <typename Derived>
Matrix<typename Derived::Scalar> best_rank_approximation(
    const Eigen::MatrixBase<Derived>& a, Index k) {
  using Scalar = typename Derived::Scalar;
  if (k == 0) return Matrix<Scalar>::Zero(a.rows(), a.cols());
  return svd_truncated(a, k).reconstruct();
}

template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return Scalar(0);
  return singular_values(a)(0);
}

template <typename Derived>
typename Derived::Scalar frobenius_norm(const Eigen::MatrixBase<Derived>& a) {
  return a.norm();
}

template <typename Derived>
typename Derived::Scalar nuclear_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return Scalar(0);
  return singular_values(a).sum();
}

/// Largest absolute entry.
template <typename Derived>
typename Derived::Scalar max_abs_entry(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return Scalar(0);
  return a.cwiseAbs().maxCoeff();
}

/// Number of singular values above `rel_tol * sigma_1`.
template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& a,
                     typename Derived::Scalar rel_tol) {
  const auto s = singular_values(a);
  if (s.size() == 0 || s(0) == 0) return 0;
  return (s.array() > rel_tol * s(0)).count();
}

/// Copy of `a` with entry (1,1) set to zero.
template <typename Derived>
Matrix<typename Derived::Scalar> zero_entry_11(
    const Eigen::MatrixBase<Derived>& a) {
  Matrix<typename Derived::Scalar> out = a;
  if (out.size() > 0) out(0, 0) = 0;
  return out;
}

/// trace(A'B), i.e. the Frobenius inner product.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar trace_product(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ArgumentError("trace_product: shape mismatch");
  }
  return a.cwiseProduct(b).sum();
}

/// Orthonormal basis of the column space of `a` under the pseudo-inverse
/// cutoff. Has zero columns when `a` is numerically zero.
template <typename Derived>
Matrix<typename Derived::Scalar> column_space_basis(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  detail::require_finite(a, "column_space_basis");
  if (a.cols() == 0 || a.rows() == 0) return Matrix<Scalar>(a.rows(), 0);
  const auto svd =
      detail::decompose<Scalar>(a.eval(), Eigen::ComputeThinU, "column_space_basis");
  const auto& s = svd.S;
  if (s.size() == 0 || s(0) == 0) return Matrix<Scalar>(a.rows(), 0);
  const Scalar cutoff = detail::pinv_cutoff(a.rows(), a.cols(), s(0));
  const Index r = (s.array() > cutoff).count();
  return svd.U.leftCols(r);
}

/// P_A = A (A'A)^+ A', the orthogonal projector onto span(A).
template <typename Derived>
Matrix<typename Derived::Scalar> projector(const Eigen::MatrixBase<Derived>& a) {
  const auto q = column_space_basis(a);
  return q * q.transpose();
}

/// Pi_A = I - P_A.
template <typename Derived>
Matrix<typename Derived::Scalar> annihilator(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> out = Matrix<Scalar>::Identity(a.rows(), a.rows());
  out -= projector(a);
  return out;
}

}  // namespace weakfactor

#endif  // WEAKFACTOR_MATRIX_CORE_HPP
