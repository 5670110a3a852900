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
#include "spindle/qmatrix.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace spindle {

namespace {

Kind deduce_kind(Eigen::Index rows, Eigen::Index cols) {
  if (cols == 1 && rows > 1) return Kind::Ket;
  if (rows == 1 && cols > 1) return Kind::Bra;
  return Kind::Operator;
}

bool finite(const cx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

QMatrix::QMatrix(cx_mat m) : storage_(std::move(m)) {
  kind_ = deduce_kind(rows(), cols());
  validate();
}

QMatrix::QMatrix(sp_cx_mat m) : storage_(std::move(m)) {
  kind_ = deduce_kind(rows(), cols());
  validate();
}

QMatrix::QMatrix(cx_mat m, Kind kind) : storage_(std::move(m)), kind_(kind) { validate(); }

QMatrix::QMatrix(sp_cx_mat m, Kind kind) : storage_(std::move(m)), kind_(kind) { validate(); }

void QMatrix::validate() const {
  if (rows() < 1 || cols() < 1) throw DimensionError("QMatrix: dimensions must be at least 1x1");
  if (is_sparse()) {
    const auto& s = std::get<sp_cx_mat>(storage_);
    for (int k = 0; k < s.outerSize(); ++k)
      for (sp_cx_mat::InnerIterator it(s, k); it; ++it)
        if (!finite(it.value())) throw ValueError("QMatrix: non-finite entry");
  } else {
    if (!std::get<cx_mat>(storage_).allFinite()) throw ValueError("QMatrix: non-finite entry");
  }
}

QMatrix QMatrix::zero(Eigen::Index rows, Eigen::Index cols) {
  return QMatrix(cx_mat(cx_mat::Zero(rows, cols)));
}

QMatrix QMatrix::identity(Eigen::Index n) { return QMatrix(cx_mat(cx_mat::Identity(n, n))); }

QMatrix QMatrix::sparse_zero(Eigen::Index rows, Eigen::Index cols) {
  return QMatrix(sp_cx_mat(rows, cols));
}

QMatrix QMatrix::sparse_identity(Eigen::Index n) {
  sp_cx_mat m(n, n);
  m.setIdentity();
  return QMatrix(std::move(m));
}

Eigen::Index QMatrix::rows() const {
  return std::visit([](const auto& m) { return m.rows(); }, storage_);
}

Eigen::Index QMatrix::cols() const {
  return std::visit([](const auto& m) { return m.cols(); }, storage_);
}

QMatrix QMatrix::with_kind(Kind k) const {
  QMatrix out = *this;
  out.kind_ = k;
  return out;
}

cx QMatrix::operator()(Eigen::Index i, Eigen::Index j) const {
  if (i < 0 || i >= rows() || j < 0 || j >= cols())
    throw DimensionError("QMatrix: index out of range");
  if (is_sparse()) return std::get<sp_cx_mat>(storage_).coeff(i, j);
  return std::get<cx_mat>(storage_)(i, j);
}

cx_mat QMatrix::to_dense() const {
  if (is_sparse()) return cx_mat(std::get<sp_cx_mat>(storage_));
  return std::get<cx_mat>(storage_);
}

sp_cx_mat QMatrix::to_sparse() const {
  if (is_sparse()) return std::get<sp_cx_mat>(storage_);
  return std::get<cx_mat>(storage_).sparseView();
}

QMatrix QMatrix::as_dense() const { return QMatrix(to_dense(), kind_); }

QMatrix QMatrix::as_sparse() const { return QMatrix(to_sparse(), kind_); }

QMatrix QMatrix::adjoint() const {
  Kind k = kind_ == Kind::Ket ? Kind::Bra : (kind_ == Kind::Bra ? Kind::Ket : kind_);
  if (is_sparse()) return QMatrix(sp_cx_mat(std::get<sp_cx_mat>(storage_).adjoint()), k);
  return QMatrix(cx_mat(std::get<cx_mat>(storage_).adjoint()), k);
}

QMatrix QMatrix::transpose() const {
  if (is_sparse()) return QMatrix(sp_cx_mat(std::get<sp_cx_mat>(storage_).transpose()), kind_);
  return QMatrix(cx_mat(std::get<cx_mat>(storage_).transpose()), kind_);
}

QMatrix QMatrix::conj() const {
  if (is_sparse()) return QMatrix(sp_cx_mat(std::get<sp_cx_mat>(storage_).conjugate()), kind_);
  return QMatrix(cx_mat(std::get<cx_mat>(storage_).conjugate()), kind_);
}

cx QMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace: matrix must be square");
  if (is_sparse()) {
    const auto& s = std::get<sp_cx_mat>(storage_);
    cx t = 0;
    for (Eigen::Index i = 0; i < s.rows(); ++i) t += s.coeff(i, i);
    return t;
  }
  return std::get<cx_mat>(storage_).trace();
}

double QMatrix::norm() const {
  return std::visit([](const auto& m) { return m.norm(); }, storage_);
}

double QMatrix::max_abs() const {
  if (is_sparse()) {
    const auto& s = std::get<sp_cx_mat>(storage_);
    double m = 0;
    for (int k = 0; k < s.outerSize(); ++k)
      for (sp_cx_mat::InnerIterator it(s, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
  }
  return std::get<cx_mat>(storage_).cwiseAbs().maxCoeff();
}

QMatrix QMatrix::unit() const {
  cx t = trace();
  if (std::abs(t) < 1e-300) throw DomainError("unit: trace is zero");
  return *this / t;
}

QMatrix QMatrix::operator-() const { return cx(-1.0, 0.0) * *this; }

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("operator+: shape mismatch");
  if (a.is_sparse() && b.is_sparse())
    return QMatrix(sp_cx_mat(a.to_sparse() + b.to_sparse()), a.kind());
  return QMatrix(cx_mat(a.to_dense() + b.to_dense()), a.kind());
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("operator-: shape mismatch");
  if (a.is_sparse() && b.is_sparse())
    return QMatrix(sp_cx_mat(a.to_sparse() - b.to_sparse()), a.kind());
  return QMatrix(cx_mat(a.to_dense() - b.to_dense()), a.kind());
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("operator*: inner dimensions differ");
  if (a.is_sparse() && b.is_sparse()) return QMatrix(sp_cx_mat(a.to_sparse() * b.to_sparse()));
  if (a.is_sparse()) return QMatrix(cx_mat(a.to_sparse() * b.to_dense()));
  if (b.is_sparse()) return QMatrix(cx_mat(a.to_dense() * b.to_sparse()));
  return QMatrix(cx_mat(a.to_dense() * b.to_dense()));
}

QMatrix operator*(cx s, const QMatrix& a) {
  if (a.is_sparse()) return QMatrix(sp_cx_mat(s * a.to_sparse()), a.kind());
  return QMatrix(cx_mat(s * a.to_dense()), a.kind());
}

QMatrix operator/(const QMatrix& a, cx s) {
  if (std::abs(s) == 0.0) throw ValueError("operator/: division by zero");
  return (cx(1.0, 0.0) / s) * a;
}

bool approx_eq(const QMatrix& a, const QMatrix& b, double tolerance) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a.to_dense() - b.to_dense()).cwiseAbs().maxCoeff() <= tolerance;
}

QMatrix kron(const QMatrix& a, const QMatrix& b) {
  if (a.is_sparse() && b.is_sparse()) {
    sp_cx_mat sa = a.to_sparse(), sb = b.to_sparse();
    sp_cx_mat out(sa.rows() * sb.rows(), sa.cols() * sb.cols());
    std::vector<Eigen::Triplet<cx>> trips;
    trips.reserve(static_cast<size_t>(sa.nonZeros()) * static_cast<size_t>(sb.nonZeros()));
    for (int ka = 0; ka < sa.outerSize(); ++ka)
      for (sp_cx_mat::InnerIterator ia(sa, ka); ia; ++ia)
        for (int kb = 0; kb < sb.outerSize(); ++kb)
          for (sp_cx_mat::InnerIterator ib(sb, kb); ib; ++ib)
            trips.emplace_back(ia.row() * sb.rows() + ib.row(), ia.col() * sb.cols() + ib.col(),
                               ia.value() * ib.value());
    out.setFromTriplets(trips.begin(), trips.end());
    return QMatrix(std::move(out));
  }
  cx_mat da = a.to_dense(), db = b.to_dense();
  cx_mat out(da.rows() * db.rows(), da.cols() * db.cols());
  for (Eigen::Index i = 0; i < da.rows(); ++i)
    for (Eigen::Index j = 0; j < da.cols(); ++j)
      out.block(i * db.rows(), j * db.cols(), db.rows(), db.cols()) = da(i, j) * db;
  return QMatrix(std::move(out));
}

QMatrix kron(const std::vector<QMatrix>& factors) {
  if (factors.empty()) throw ValueError("kron: empty factor list");
  QMatrix out = factors.front();
  for (size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

QMatrix direct_sum(const QMatrix& a, const QMatrix& b) { return direct_sum({a, b}); }

QMatrix direct_sum(const std::vector<QMatrix>& blocks) {
  if (blocks.empty()) throw ValueError("direct_sum: empty block list");
  Eigen::Index n = 0;
  bool all_sparse = true;
  for (const auto& blk : blocks) {
    if (!blk.is_square()) throw DimensionError("direct_sum: blocks must be square");
    n += blk.rows();
    all_sparse = all_sparse && blk.is_sparse();
  }
  if (all_sparse) {
    sp_cx_mat out(n, n);
    std::vector<Eigen::Triplet<cx>> trips;
    Eigen::Index off = 0;
    for (const auto& blk : blocks) {
      sp_cx_mat s = blk.to_sparse();
      for (int k = 0; k < s.outerSize(); ++k)
        for (sp_cx_mat::InnerIterator it(s, k); it; ++it)
          trips.emplace_back(off + it.row(), off + it.col(), it.value());
      off += s.rows();
    }
    out.setFromTriplets(trips.begin(), trips.end());
    return QMatrix(std::move(out));
  }
  cx_mat out = cx_mat::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& blk : blocks) {
    out.block(off, off, blk.rows(), blk.rows()) = blk.to_dense();
    off += blk.rows();
  }
  return QMatrix(std::move(out));
}

QMatrix expm(const QMatrix& a) {
  if (!a.is_square()) throw DimensionError("expm: matrix must be square");
  return QMatrix(cx_mat(a.to_dense().exp()), a.kind());
}

QMatrix commutator(const QMatrix& a, const QMatrix& b) { return a * b - b * a; }

double hermiticity_defect(const QMatrix& a) {
  if (!a.is_square()) throw DimensionError("hermiticity_defect: matrix must be square");
  cx_mat d = a.to_dense();
  double num = (d - d.adjoint()).cwiseAbs().maxCoeff();
  return num / std::max(1.0, d.cwiseAbs().maxCoeff());
}

EigResult eig_hermitian(const QMatrix& a, double herm_tolerance) {
  if (!a.is_square()) throw DimensionError("eig_hermitian: matrix must be square");
  if (hermiticity_defect(a) > herm_tolerance)
    throw DomainError("eig_hermitian: input is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<cx_mat> solver(a.to_dense());
  if (solver.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver failed");
  return EigResult{solver.eigenvalues(), QMatrix(cx_mat(solver.eigenvectors()))};
}

QMatrix auto_storage(const QMatrix& a) {
  if (a.is_sparse()) return a;
  if (std::min(a.rows(), a.cols()) < 64) return a;
  const cx_mat& d = a.to_dense();
  Eigen::Index nnz = 0;
  for (Eigen::Index j = 0; j < d.cols(); ++j)
    for (Eigen::Index i = 0; i < d.rows(); ++i)
      if (d(i, j) != cx(0.0, 0.0)) ++nnz;
  double density = static_cast<double>(nnz) / (static_cast<double>(d.rows()) * d.cols());
  if (density < 0.10) return a.as_sparse();
  return a;
}

}  // namespace spindle
