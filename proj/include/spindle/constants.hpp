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

#include <array>

#include "spindle/types.hpp"

namespace spindle::constants {

// SI defining constants (exact since the 2019 redefinition).
inline constexpr double k_B = 1.380649e-23;          // J/K
inline constexpr double h_planck = 6.62607015e-34;   // J s
inline constexpr double hbar = 1.054571817e-34;      // J s (h / 2 pi, rounded)

// CODATA 2018.
inline constexpr double mu_0 = 1.25663706212e-6;     // N / A^2

// Gyromagnetic ratios in rad s^-1 T^-1.
// Electron: CODATA 2018 value 1.76085963023e11, carried with its negative
// sign (moment antiparallel to spin).
inline constexpr double gamma_e = -1.76085963023e11;
// 1H: CODATA 2018 (shielded value not used).
inline constexpr double gamma_H1 = 2.6752218744e8;
// 13C, 19F, 14N, 15N: standard NMR tables (Harris et al., Pure Appl. Chem.
// 73, 1795 (2001)).
inline constexpr double gamma_C13 = 6.728284e7;
inline constexpr double gamma_F19 = 2.51815e8;
inline constexpr double gamma_N14 = 1.9337792e7;
inline constexpr double gamma_N15 = -2.71261804e7;

// NV center ground-state zero-field splitting, 2.87 GHz.
inline constexpr double nv_zfs_d = 2.0 * pi * 2.87e9;  // rad/s

// Magic angle: acos(1/sqrt(3)) = 54.7356 degrees.
inline const double magic_angle = std::acos(1.0 / std::sqrt(3.0));

// Unit vector of the magic-angle spinning axis in the lab frame (z along the
// static field).
inline const std::array<double, 3> mas_axis = {std::sin(magic_angle), 0.0,
                                               std::cos(magic_angle)};

}  // namespace spindle::constants
