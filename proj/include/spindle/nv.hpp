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

#include "spindle/constants.hpp"
#include "spindle/interactions.hpp"
#include "spindle/propagation.hpp"

namespace spindle::nv {

// Room-temperature optical rate model. The paper-style three-level scheme
// (triplet ground and excited states, metastable singlet shelf) carries
// spin-dependent intersystem crossing. Values are a literature compilation
// (Robledo et al., New J. Phys. 13, 025013 (2011); Tetienne et al., New J.
// Phys. 14, 103033 (2012)); every rate can be overridden.
struct NVRates {
  double k_pump_sat = 6.5e7;     // GS->ES pumping rate at saturation (beta = 1), Hz
  double k_rad = 6.5e7;          // radiative ES->GS, Hz
  double k_isc_ms0 = 1.1e7;      // ES(m=0) -> SS, Hz
  double k_isc_ms1 = 8.0e7;      // ES(m=+-1) -> SS, Hz each
  double k_ss_total = 3.3e6;     // total SS depletion rate, Hz
  double ss_branch_ms0 = 1.15;   // SS->GS branching weight of m=0 vs each m=+-1
};

struct NVOptions {
  bool optics = true;
  bool nitrogen = false;  // the nitrogen nuclear spin is not implemented
  // With optics off the NV spin defaults to the effective spin-1/2 spanned by
  // {m_S = 0, m_S = -1}; full_spin keeps the spin-1 instead.
  bool full_spin = false;
  std::vector<Member> further_spins;
  NVRates rates{};
  double zfs_d = spindle::constants::nv_zfs_d;
};

// NV center system factory. Optics on builds the 7-level scheme
// ([(GS, ES), S], SS) tensored with any further spins; optics off builds the
// bare spin system. Reduced two-level operators "S.x_red", "S.y_red",
// "S.z_red" on the {m_S = 0, m_S = -1} subspace are always registered.
class NVSystem {
 public:
  explicit NVSystem(NVOptions options = NVOptions{});

  const SpinSystem& sys() const { return sys_; }
  SpinSystem& sys() { return sys_; }
  bool optics() const { return options_.optics; }
  bool spin_half() const { return !options_.optics && !options_.full_spin; }
  const NVRates& rates() const { return options_.rates; }

  // Ground-state spin Hamiltonian: zero-field splitting plus electron Zeeman
  // (spin-1 variants only).
  QMatrix hamiltonian(const Vec3& b_field_tesla = {0.0, 0.0, 0.0}) const;

  // Collapse operators of the optical cycle with the laser on and off. The
  // room-temperature model holds for T >= 100 K; below that the orbital
  // excited-state structure matters and the request is rejected.
  std::pair<std::vector<CollapseOperator>, std::vector<CollapseOperator>> transition_operators(
      double temperature_kelvin, double beta) const;

  // Projector on m_S = 0 (the bright state used for readout).
  const QMatrix& ms0_projector() const;

 private:
  NVOptions options_;
  SpinSystem sys_;
};

// XY8 dynamical decoupling with ideal instantaneous pi pulses on the NV spin:
// per 8-pulse repetition tau/2 - [pi pulses about X,Y,X,Y,Y,X,Y,X separated
// by tau] - tau/2, free evolution under h0. n_pulses must be a multiple of 8;
// total sequence time is n_pulses * tau.
QMatrix xy8(const QMatrix& h0, double tau, const SpinSystem& sys, const QMatrix& state,
            int n_pulses);

struct NVMeasurement {
  double signal;  // m_S = 0 population
  QMatrix rho;    // post-measurement state, NV reinitialized to m_S = 0
};

// Weak-measurement readout: records the m_S = 0 population and reinitializes
// the NV optically, discarding NV-nuclear coherence (the measurement
// back-action).
NVMeasurement meas_nv(const QMatrix& state, const NVSystem& nv);

}  // namespace spindle::nv
