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

#include <functional>

#include "spindle/propagation.hpp"

namespace spindle::scrp {

// Spin-correlated radical-pair initial state
//   |psi> = cos(alpha) |S> + e^{i beta} sin(alpha) |T0>
// built in the molecular frame (T0 quantized along the molecular axis),
// collectively rotated by (theta, phi) into the lab frame, embedded with
// maximally mixed companions, and mixed as
// rho = purity |psi><psi| + (1 - purity) 1/4 on the pair.
QMatrix initial_state(const SpinSystem& sys, const std::string& name_a, const std::string& name_b,
                      double alpha, double beta, double purity, double theta, double phi);

struct FieldSweep {
  std::vector<double> field_tesla;
  std::vector<double> intensity;  // normalized to max |value| = 1
};

// Continuous-wave EPR field sweep by per-field diagonalization: at every grid
// field the Hamiltonian B * h_field + h_rest is diagonalized, transition
// intensities are products of population differences of rho0 and transverse
// matrix elements |<i|Sx|j>|^2, and each resonance contributes a
// derivative-Lorentzian line whose field width is broadening_tesla (converted
// through the local dE/dB slope).
FieldSweep cw_epr_fieldsweep(const SpinSystem& sys, const std::vector<std::string>& spin_names,
                             const QMatrix& rho0, const QMatrix& h_field, const QMatrix& h_rest,
                             double omega_mw, double broadening_tesla,
                             const std::vector<double>& field_grid);

struct MaryTrace {
  std::vector<double> time;
  std::vector<std::vector<double>> luminescence;  // one trace per field
};

// Magnetic-field-effect fluorescence: evolves the ground-state ensemble with
// the laser collapse operators active inside the pulse window
// [pulse_start, pulse_stop) and the dark operators outside, recording the S1
// population each step.
MaryTrace mary_trace(const SpinSystem& sys, const RateTable& rates, const RateTable& rates_laser,
                     const std::function<QMatrix(double)>& h_of_b,
                     const std::vector<double>& b_fields, long pulse_start, long pulse_stop,
                     double dt, long steps);

}  // namespace spindle::scrp
