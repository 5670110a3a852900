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

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace spindle {

using cx = std::complex<double>;
using cx_mat = Eigen::MatrixXcd;
using cx_vec = Eigen::VectorXcd;
using sp_cx_mat = Eigen::SparseMatrix<std::complex<double>>;
using real_vec = Eigen::VectorXd;
using real_mat = Eigen::MatrixXd;

inline constexpr cx ci{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;

// Central numerical tolerances. Callers may override per call where an
// operation takes an explicit tolerance argument.
namespace tol {
inline constexpr double equality = 1e-12;
inline constexpr double hermiticity = 1e-10;
inline constexpr double unitarity = 1e-10;
}  // namespace tol

inline constexpr const char* version = "0.1.0";

}  // namespace spindle
