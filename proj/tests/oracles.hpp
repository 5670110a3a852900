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
// Test-only reference implementations, deliberately independent of the
// library code paths they are used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Cyclic Jacobi eigensolver for Hermitian matrices. Slow but self-contained;
// used as the independent diagonalization oracle.
struct JacobiResult {
  Eigen::VectorXd values;  // ascending
  Mat vectors;             // columns
};

inline JacobiResult jacobi_hermitian(Mat a) {
  const int n = static_cast<int>(a.rows());
  Mat v = Mat::Identity(n, n);
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off < 1e-14 * scale) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        cxd b = a(p, q);
        if (std::abs(b) < 1e-300) continue;
        double app = a(p, p).real(), aqq = a(q, q).real();
        double rad = std::sqrt(0.25 * (app - aqq) * (app - aqq) + std::norm(b));
        double l1 = 0.5 * (app + aqq) + rad;
        double l2 = 0.5 * (app + aqq) - rad;
        // Eigenvectors of the 2x2 block [[app, b], [conj(b), aqq]].
        Eigen::Vector2cd u1(b, cxd(l1 - app, 0.0));
        Eigen::Vector2cd u2(b, cxd(l2 - app, 0.0));
        u1.normalize();
        u2.normalize();
        Eigen::Matrix2cd r;
        r.col(0) = u1;
        r.col(1) = u2;
        Mat cols(n, 2);
        cols.col(0) = a.col(p);
        cols.col(1) = a.col(q);
        Mat newc = cols * r;
        a.col(p) = newc.col(0);
        a.col(q) = newc.col(1);
        Mat rows(2, n);
        rows.row(0) = a.row(p);
        rows.row(1) = a.row(q);
        Mat newr = r.adjoint() * rows;
        a.row(p) = newr.row(0);
        a.row(q) = newr.row(1);
        Mat vcols(n, 2);
        vcols.col(0) = v.col(p);
        vcols.col(1) = v.col(q);
        Mat newv = vcols * r;
        v.col(p) = newv.col(0);
        v.col(q) = newv.col(1);
      }
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });
  JacobiResult out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]).real();
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

// Adaptive Dormand-Prince RK45 on a matrix-valued ODE y' = f(t, y).
inline Mat rk45(const std::function<Mat(double, const Mat&)>& f, Mat y0, double t0, double t1,
                double rel_tol = 1e-11, double abs_tol = 1e-13) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                      b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = t0;
  double h = (t1 - t0) / 64.0;
  Mat y = std::move(y0);
  int guard = 0;
  while (t < t1 && guard++ < 2000000) {
    h = std::min(h, t1 - t);
    Mat k1 = f(t, y);
    Mat k2 = f(t + c2 * h, y + h * (a21 * k1));
    Mat k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    Mat k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Mat k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Mat k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Mat y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Mat k7 = f(t + h, y5);
    Mat err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double sc = abs_tol + rel_tol * std::max(y.cwiseAbs().maxCoeff(), y5.cwiseAbs().maxCoeff());
    double e = err.cwiseAbs().maxCoeff() / sc;
    if (e <= 1.0) {
      t += h;
      y = std::move(y5);
    }
    double grow = 0.9 * std::pow(std::max(e, 1e-10), -0.2);
    h *= std::clamp(grow, 0.2, 5.0);
  }
  return y;
}

// Unvectorized Lindblad right-hand side, written directly from the master
// equation; the oracle counterpart of the superoperator route.
inline Mat lindblad_rhs(const Mat& h, const std::vector<Mat>& c_ops, const Mat& rho) {
  cxd im(0.0, 1.0);
  Mat out = -im * (h * rho - rho * h);
  for (const auto& l : c_ops) {
    Mat ld = l.adjoint();
    Mat ldl = ld * l;
    out += l * rho * ld - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  cxd complex_unit() { return {uniform(), uniform()}; }
  Mat matrix(int rows, int cols) {
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = complex_unit();
    return m;
  }
  Mat hermitian(int n) {
    Mat m = matrix(n, n);
    return 0.5 * (m + m.adjoint());
  }
  Mat density(int n) {
    Mat g = matrix(n, n);
    Mat rho = g * g.adjoint();
    return rho / rho.trace();
  }
  Mat unitary(int n) {
    Eigen::HouseholderQR<Mat> qr(matrix(n, n));
    Mat q = qr.householderQ();
    return q;
  }
};

}  // namespace oracles
