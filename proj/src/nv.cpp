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
#include "spindle/nv.hpp"

#include <algorithm>
#include <cmath>

namespace spindle::nv {

namespace {

SpaceLayout make_layout(const NVOptions& opt) {
  std::vector<SpaceLayout> factors;
  if (opt.optics) {
    SpaceLayout levels = SpaceLayout::sum(
        {SpaceLayout::leaf(level("GS")), SpaceLayout::leaf(level("ES"))});
    SpaceLayout nv_block = SpaceLayout::sum(
        {SpaceLayout::tensor({levels, SpaceLayout::leaf(spin("S", 1.0))}),
         SpaceLayout::leaf(level("SS"))});
    factors.push_back(nv_block);
  } else {
    factors.push_back(SpaceLayout::leaf(spin("S", opt.full_spin ? 1.0 : 0.5)));
  }
  for (const auto& m : opt.further_spins) factors.push_back(SpaceLayout::leaf(m));
  return SpaceLayout::tensor(std::move(factors));
}

// Two-level operators on the {m_S = 0, m_S = -1} subspace of the spin-1
// (local sublevels 1 and 2).
cx_mat reduced_local(int axis) {
  cx_mat m = cx_mat::Zero(3, 3);
  if (axis == 0) {
    m(1, 2) = 0.5;
    m(2, 1) = 0.5;
  } else if (axis == 1) {
    m(1, 2) = cx(0.0, -0.5);
    m(2, 1) = cx(0.0, 0.5);
  } else {
    m(1, 1) = 0.5;
    m(2, 2) = -0.5;
  }
  return m;
}

}  // namespace

NVSystem::NVSystem(NVOptions options)
    : options_(std::move(options)), sys_(make_layout(options_)) {
  if (options_.nitrogen)
    throw UnsupportedError("NVSystem: the nitrogen nuclear spin is not implemented");
  if (spin_half()) {
    sys_.register_op("S.x_red", sys_.op("S.x"));
    sys_.register_op("S.y_red", sys_.op("S.y"));
    sys_.register_op("S.z_red", sys_.op("S.z"));
  } else {
    const char* names[] = {"S.x_red", "S.y_red", "S.z_red"};
    for (int axis = 0; axis < 3; ++axis)
      sys_.register_op(names[axis],
                       embed_local(sys_.layout(), "S", QMatrix(reduced_local(axis))));
  }
}

QMatrix NVSystem::hamiltonian(const Vec3& b_field_tesla) const {
  if (spin_half())
    throw DomainError("NVSystem: the effective spin-1/2 system has no built-in Hamiltonian");
  QMatrix h = zfs_interaction(sys_, "S", options_.zfs_d, 0.0);
  return h + zeeman_interaction(sys_, "S", spindle::constants::gamma_e, b_field_tesla);
}

std::pair<std::vector<CollapseOperator>, std::vector<CollapseOperator>>
NVSystem::transition_operators(double temperature_kelvin, double beta) const {
  if (!options_.optics)
    throw DomainError("NVSystem: transition operators require the optical level structure");
  if (temperature_kelvin < 100.0)
    throw UnsupportedError(
        "NVSystem: below 100 K the orbital excited-state model with phonon-induced hopping "
        "is required, which is outside the implemented room-temperature model");
  if (beta < 0.0 || beta > 1.0) throw ValueError("NVSystem: beta must lie in [0, 1]");

  const NVRates& r = options_.rates;
  const auto& basis = sys_.basis_table();

  // Collapse operator for one transition channel: matrix units between all
  // basis-state pairs that satisfy the endpoint constraints and agree on
  // every other member (spin and further-spin conserving).
  auto channel = [&](const std::map<std::string, int>& src, const std::map<std::string, int>& tgt,
                     double rate) {
    cx_mat l = cx_mat::Zero(sys_.dim(), sys_.dim());
    for (long gs = 0; gs < sys_.dim(); ++gs) {
      const auto& s_state = basis[gs];
      bool s_ok = std::all_of(src.begin(), src.end(), [&](const auto& kv) {
        auto it = s_state.sub.find(kv.first);
        return it != s_state.sub.end() && it->second == kv.second;
      });
      if (!s_ok) continue;
      for (long gt = 0; gt < sys_.dim(); ++gt) {
        const auto& t_state = basis[gt];
        bool t_ok = std::all_of(tgt.begin(), tgt.end(), [&](const auto& kv) {
          auto it = t_state.sub.find(kv.first);
          return it != t_state.sub.end() && it->second == kv.second;
        });
        if (!t_ok) continue;
        bool companions_match = true;
        for (const auto& [name, idx] : s_state.sub) {
          if (src.count(name)) continue;
          auto it = t_state.sub.find(name);
          if (it != t_state.sub.end() && it->second != idx) {
            companions_match = false;
            break;
          }
        }
        if (companions_match) l(gt, gs) = std::sqrt(rate);
      }
    }
    return CollapseOperator{QMatrix(std::move(l))};
  };

  std::vector<CollapseOperator> decay;
  // radiative decay, spin conserving
  decay.push_back(spindle::transition_operators(sys_, {{"ES -> GS", r.k_rad}}).front());
  // spin-selective intersystem crossing ES(m) -> SS; spin-1 sublevel order is
  // m = +1, 0, -1
  decay.push_back(channel({{"ES", 0}, {"S", 1}}, {{"SS", 0}}, r.k_isc_ms0));
  decay.push_back(channel({{"ES", 0}, {"S", 0}}, {{"SS", 0}}, r.k_isc_ms1));
  decay.push_back(channel({{"ES", 0}, {"S", 2}}, {{"SS", 0}}, r.k_isc_ms1));
  // shelf depletion SS -> GS(m), branching favoring m = 0
  double unit = r.k_ss_total / (r.ss_branch_ms0 + 2.0);
  decay.push_back(channel({{"SS", 0}}, {{"GS", 0}, {"S", 1}}, r.ss_branch_ms0 * unit));
  decay.push_back(channel({{"SS", 0}}, {{"GS", 0}, {"S", 0}}, unit));
  decay.push_back(channel({{"SS", 0}}, {{"GS", 0}, {"S", 2}}, unit));

  std::vector<CollapseOperator> on = decay;
  if (beta > 0.0)
    on.push_back(
        spindle::transition_operators(sys_, {{"GS -> ES", beta * r.k_pump_sat}}).front());
  return {std::move(on), std::move(decay)};
}

const QMatrix& NVSystem::ms0_projector() const {
  return spin_half() ? sys_.op("S.p[0.5]") : sys_.op("S.p[0]");
}

QMatrix xy8(const QMatrix& h0, double tau, const SpinSystem& sys, const QMatrix& state,
            int n_pulses) {
  if (n_pulses <= 0 || n_pulses % 8 != 0)
    throw ValueError("xy8: pulse count must be a positive multiple of 8");
  if (tau <= 0.0) throw ValueError("xy8: tau must be positive");
  const QMatrix& sx = sys.has_op("S.x_red") ? sys.op("S.x_red") : sys.op("S.x");
  const QMatrix& sy = sys.has_op("S.y_red") ? sys.op("S.y_red") : sys.op("S.y");

  Propagator u_half = evol(h0, 0.5 * tau);
  Propagator u_full = evol(h0, tau);
  Propagator pi_x{PropKind::Unitary, rot_propagator(sx, pi), 0.0};
  Propagator pi_y{PropKind::Unitary, rot_propagator(sy, pi), 0.0};

  static const bool axis_is_x[8] = {true, false, true, false, false, true, false, true};
  QMatrix out = state;
  for (int block = 0; block < n_pulses / 8; ++block) {
    out = apply_superoperator(u_half, out);
    for (int p = 0; p < 8; ++p) {
      out = apply_superoperator(axis_is_x[p] ? pi_x : pi_y, out);
      if (p < 7) out = apply_superoperator(u_full, out);
    }
    out = apply_superoperator(u_half, out);
  }
  return out;
}

NVMeasurement meas_nv(const QMatrix& state, const NVSystem& nv) {
  const SpinSystem& sys = nv.sys();
  QMatrix rho = state.cols() == 1 ? ket2dm(state) : state;
  double signal = expect(nv.ms0_projector(), rho).real();

  // Fresh NV in m_S = 0 (ground state when optics are on).
  QMatrix reset;
  if (nv.optics()) {
    cx_mat r = cx_mat::Zero(7, 7);
    r(1, 1) = 1.0;  // |GS, m_S = 0>
    reset = QMatrix(std::move(r));
  } else if (nv.spin_half()) {
    cx_mat r = cx_mat::Zero(2, 2);
    r(0, 0) = 1.0;
    reset = QMatrix(std::move(r));
  } else {
    cx_mat r = cx_mat::Zero(3, 3);
    r(1, 1) = 1.0;
    reset = QMatrix(std::move(r));
  }

  std::set<std::string> nuclear;
  for (const auto& m : sys.members())
    if (m.name != "S" && m.name != "GS" && m.name != "ES" && m.name != "SS")
      nuclear.insert(m.name);
  if (nuclear.empty()) return {signal, reset};

  QMatrix rest = sys.subsystem(rho, nuclear).first;
  // NV factors are declared first, so the reset block is the slow factor.
  return {signal, kron(reset, rest)};
}

}  // namespace spindle::nv
