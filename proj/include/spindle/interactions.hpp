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
#include <string>

#include "spindle/system.hpp"

namespace spindle {

using Vec3 = std::array<double, 3>;
using Tensor3 = Eigen::Matrix3d;

// All Hamiltonians are in angular-frequency units (rad/s, hbar = 1).

// Universal bilinear form H = sum_ab S_a A_ab X_b, with the partner X either
// a second spin or a static field vector in tesla.
QMatrix interaction_hamiltonian(const SpinSystem& sys, const std::string& spin_name,
                                const Tensor3& a, const std::string& partner_spin);
QMatrix interaction_hamiltonian(const SpinSystem& sys, const std::string& spin_name,
                                const Tensor3& a, const Vec3& field_tesla);

// H = gamma (Bx Sx + By Sy + Bz Sz).
QMatrix zeeman_interaction(const SpinSystem& sys, const std::string& spin_name, double gamma,
                           const Vec3& field_tesla);

enum class DipolarApprox { None, Secular, SecularHomo };
enum class PositionMode { Spherical, Cartesian };

// Point dipole-dipole coupling of two spins. Full form:
//   H = -(mu0 g1 g2 hbar / 4 pi r^3) [3 (S.r)(I.r)/r^2 - S.I],
// heteronuclear secular form:
//   H = -(mu0 g1 g2 hbar / 4 pi r^3) (3 cos^2 theta - 1) Sz Iz,
// homonuclear secular form keeps the flip-flop term
//   Sz Iz - (S+I- + S-I+)/4.
// The position is (r, theta, phi) in meters/radians or a cartesian vector in
// meters, selected by `mode`.
QMatrix dipolar_coupling(const SpinSystem& sys, const std::string& name1, const std::string& name2,
                         double gamma1, double gamma2, const Vec3& position,
                         PositionMode mode = PositionMode::Spherical,
                         DipolarApprox approx = DipolarApprox::None);

// H = D (Sz^2 - S(S+1)/3) + E (Sx^2 - Sy^2), spins with val >= 1 only.
QMatrix zfs_interaction(const SpinSystem& sys, const std::string& spin_name, double d, double e);
// Same bilinear same-spin form; the quadrupolar prefactor is the caller's.
QMatrix quad_interaction(const SpinSystem& sys, const std::string& spin_name, double d, double e);

// Physics convention: theta polar from z, phi azimuthal.
Vec3 spher2cart(const Vec3& spherical);

inline double f2w(double hz) { return 2.0 * pi * hz; }
inline double w2f(double rad_per_s) { return rad_per_s / (2.0 * pi); }

}  // namespace spindle
