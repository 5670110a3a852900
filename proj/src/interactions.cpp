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
#include "spindle/interactions.hpp"

#include <cmath>
#include <iostream>

#include "spindle/constants.hpp"

namespace spindle {

namespace {

std::array<QMatrix, 3> spin_vector(const SpinSystem& sys, const std::string& name) {
  if (!sys.member(name).is_spin())
    throw DomainError("interaction: member '" + name + "' is not a spin");
  return {sys.op(name + ".x"), sys.op(name + ".y"), sys.op(name + ".z")};
}

}  // namespace

QMatrix interaction_hamiltonian(const SpinSystem& sys, const std::string& spin_name,
                                const Tensor3& a, const std::string& partner_spin) {
  auto s = spin_vector(sys, spin_name);
  auto x = spin_vector(sys, partner_spin);
  if (spin_name == partner_spin && (a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    std::cerr << "warning: self-coupling of '" << spin_name
              << "' with a non-symmetric tensor is not Hermitian\n";
  QMatrix h = QMatrix::zero(sys.dim(), sys.dim());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (a(i, j) != 0.0) h = h + a(i, j) * (s[i] * x[j]);
  return h;
}

QMatrix interaction_hamiltonian(const SpinSystem& sys, const std::string& spin_name,
                                const Tensor3& a, const Vec3& field_tesla) {
  auto s = spin_vector(sys, spin_name);
  Eigen::Vector3d b(field_tesla[0], field_tesla[1], field_tesla[2]);
  Eigen::Vector3d ab = a * b;
  QMatrix h = QMatrix::zero(sys.dim(), sys.dim());
  for (int i = 0; i < 3; ++i)
    if (ab(i) != 0.0) h = h + ab(i) * s[i];
  return h;
}

QMatrix zeeman_interaction(const SpinSystem& sys, const std::string& spin_name, double gamma,
                           const Vec3& field_tesla) {
  return interaction_hamiltonian(sys, spin_name, Tensor3(gamma * Tensor3::Identity()),
                                 field_tesla);
}

QMatrix dipolar_coupling(const SpinSystem& sys, const std::string& name1, const std::string& name2,
                         double gamma1, double gamma2, const Vec3& position, PositionMode mode,
                         DipolarApprox approx) {
  Vec3 cart = mode == PositionMode::Spherical ? spher2cart(position) : position;
  double r = std::sqrt(cart[0] * cart[0] + cart[1] * cart[1] + cart[2] * cart[2]);
  if (r <= 0.0) throw DomainError("dipolar_coupling: zero inter-spin distance");
  double prefactor = -constants::mu_0 * gamma1 * gamma2 * constants::hbar / (4.0 * pi * r * r * r);

  auto s = spin_vector(sys, name1);
  auto i_ops = spin_vector(sys, name2);

  if (approx == DipolarApprox::None) {
    Vec3 n = {cart[0] / r, cart[1] / r, cart[2] / r};
    QMatrix s_n = n[0] * s[0] + n[1] * s[1] + n[2] * s[2];
    QMatrix i_n = n[0] * i_ops[0] + n[1] * i_ops[1] + n[2] * i_ops[2];
    QMatrix s_dot_i = s[0] * i_ops[0] + s[1] * i_ops[1] + s[2] * i_ops[2];
    return prefactor * (3.0 * (s_n * i_n) - s_dot_i);
  }

  double cos_theta = cart[2] / r;
  double angular = 3.0 * cos_theta * cos_theta - 1.0;
  QMatrix secular = s[2] * i_ops[2];
  if (approx == DipolarApprox::SecularHomo) {
    QMatrix flipflop = sys.op(name1 + ".plus") * sys.op(name2 + ".minus") +
                       sys.op(name1 + ".minus") * sys.op(name2 + ".plus");
    secular = secular - 0.25 * flipflop;
  }
  return (prefactor * angular) * secular;
}

QMatrix zfs_interaction(const SpinSystem& sys, const std::string& spin_name, double d, double e) {
  const Member& m = sys.member(spin_name);
  if (m.val < 1.0)
    throw DomainError("zfs_interaction: member '" + spin_name + "' must have spin >= 1");
  auto s = spin_vector(sys, spin_name);
  QMatrix sz2 = s[2] * s[2];
  QMatrix h = d * (sz2 - (m.val * (m.val + 1.0) / 3.0) * sys.op(spin_name + ".id"));
  if (e != 0.0) h = h + e * (s[0] * s[0] - s[1] * s[1]);
  return h;
}

QMatrix quad_interaction(const SpinSystem& sys, const std::string& spin_name, double d, double e) {
  return zfs_interaction(sys, spin_name, d, e);
}

Vec3 spher2cart(const Vec3& spherical) {
  double r = spherical[0], theta = spherical[1], phi = spherical[2];
  if (r < 0.0) throw ValueError("spher2cart: negative radius");
  return {r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
          r * std::cos(theta)};
}

}  // namespace spindle
