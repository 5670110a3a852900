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

#include <string>

#include "spindle/system.hpp"

namespace spindle {

// Builds the pure state selected by a spec string of comma-separated tokens
// "Name[m]", e.g. "S[0.5],I[-0.5]". m is a magnetic number of that member;
// when it is not a valid magnetic number it is read as a 0-based sublevel
// index instead ("S[0]" on a spin-1/2 selects the first sublevel). In ket
// mode every spin on the selected branch must be specified and every direct
// sum must be resolved by at least one token.
QMatrix state(const SpinSystem& sys, const std::string& spec);

// Density-matrix mode: unspecified spins are filled with maximally mixed
// identity/multiplicity factors. Direct sums still need resolution by a
// token.
QMatrix state_dm(const SpinSystem& sys, const std::string& spec);

QMatrix ket2dm(const QMatrix& psi);
// Rank-1 check: largest eigenvalue at least (1 - 1e-10) of the trace. The
// returned ket has its first nonzero entry rotated to the positive real axis.
QMatrix dm2ket(const QMatrix& rho);

// Column-stacking vectorization and its exact inverse.
QMatrix dm2vec(const QMatrix& rho);
QMatrix vec2dm(const QMatrix& vec);

// diag((1+p)/2, (1-p)/2) for a spin-1/2 with polarization p in [-1, 1].
QMatrix pol_spin(double p);

// exp(-hbar H / kT) / Z for an angular-frequency Hamiltonian (rad/s).
QMatrix thermal_state(const QMatrix& h, double temperature_kelvin);

// <psi|op|psi>, tr(op rho) or the vectorized equivalent; the state form is
// detected from its shape.
cx expect(const QMatrix& op, const QMatrix& state);

// U = exp(-i angle generator); kets map as U psi, density matrices as
// U rho U^dag (vectorized density matrices round-trip through their matrix
// form).
QMatrix rot(const QMatrix& generator, double angle, const QMatrix& state);
QMatrix rot_propagator(const QMatrix& generator, double angle);

}  // namespace spindle
