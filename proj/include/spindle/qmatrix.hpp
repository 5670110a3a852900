/* Copyright 2026 The Spindle Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <variant>

#include "spindle/error.hpp"
#include "spindle/types.hpp"

namespace spindle {

// Advisory tag used for dimension sanity checks; it never changes numerics.
enum class Kind { Operator, Ket, Bra, Superoperator };

// Complex matrix with dense or sparse storage, the carrier for operators,
// kets, density matrices and superoperators. Values are immutable after
// construction; all operations are pure functions and safe to share across
// threads.
class QMatrix {
 public:
  QMatrix() : storage_(cx_mat::Zero(1, 1)), kind_(Kind::Operator) {}
  QMatrix(cx_mat m);                    // NOLINT: implicit by design
  QMatrix(sp_cx_mat m);                 // NOLINT
  QMatrix(cx_mat m, Kind kind);
  QMatrix(sp_cx_mat m, Kind kind);
  template <typename Derived>
  QMatrix(const Eigen::MatrixBase<Derived>& m) : QMatrix(cx_mat(m.template cast<cx>())) {}

  static QMatrix zero(Eigen::Index rows, Eigen::Index cols);
  static QMatrix identity(Eigen::Index n);
  static QMatrix sparse_zero(Eigen::Index rows, Eigen::Index cols);
  static QMatrix sparse_identity(Eigen::Index n);

  Eigen::Index rows() const;
  Eigen::Index cols() const;
  bool is_square() const { return rows() == cols(); }
  bool is_sparse() const { return std::holds_alternative<sp_cx_mat>(storage_); }

  Kind kind() const { return kind_; }
  QMatrix with_kind(Kind k) const;

  cx operator()(Eigen::Index i, Eigen::Index j) const;

  cx_mat to_dense() const;
  sp_cx_mat to_sparse() const;
  QMatrix as_dense() const;
  QMatrix as_sparse() const;

  QMatrix adjoint() const;
  QMatrix transpose() const;
  QMatrix conj() const;

  cx trace() const;
  double norm() const;      // Frobenius
  double max_abs() const;
  QMatrix unit() const;     // scaled to unit trace

  QMatrix operator-() const;

  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator*(cx s, const QMatrix& a);
  friend QMatrix operator*(const QMatrix& a, cx s) { return s * a; }
  friend QMatrix operator*(double s, const QMatrix& a) { return cx(s, 0.0) * a; }
  friend QMatrix operator*(const QMatrix& a, double s) { return cx(s, 0.0) * a; }
  friend QMatrix operator/(const QMatrix& a, cx s);
  friend QMatrix operator/(const QMatrix& a, double s) { return a / cx(s, 0.0); }

 private:
  void validate() const;

  std::variant<cx_mat, sp_cx_mat> storage_;
  Kind kind_;
};

// Entry-wise comparison after densification; tolerance 0 demands bit-equal
// values, which dense and sparse storages of one logical matrix satisfy.
bool approx_eq(const QMatrix& a, const QMatrix& b, double tolerance = tol::equality);

// Kronecker product, left factor slowest:
// result((i*b.rows+k),(j*b.cols+l)) = a(i,j)*b(k,l).
QMatrix kron(const QMatrix& a, const QMatrix& b);
QMatrix kron(const std::vector<QMatrix>& factors);

// Block-diagonal stacking of square matrices.
QMatrix direct_sum(const QMatrix& a, const QMatrix& b);
QMatrix direct_sum(const std::vector<QMatrix>& blocks);

// Matrix exponential (scaling-and-squaring with Pade approximation).
QMatrix expm(const QMatrix& a);

QMatrix commutator(const QMatrix& a, const QMatrix& b);

// Relative deviation from Hermiticity, max|A - A^dag| / max(1, max|A|).
double hermiticity_defect(const QMatrix& a);

struct EigResult {
  real_vec values;   // ascending
  QMatrix vectors;   // columns, unitary
};

// Eigendecomposition of a Hermitian matrix; throws DomainError if the input
// deviates from Hermiticity beyond the tolerance.
EigResult eig_hermitian(const QMatrix& a, double herm_tolerance = tol::hermiticity);

// Sparse storage pays off only for large, mostly-empty operators. Converts to
// sparse when density < 10% at dimension >= 64, otherwise returns dense.
QMatrix auto_storage(const QMatrix& a);

}  // namespace spindle
