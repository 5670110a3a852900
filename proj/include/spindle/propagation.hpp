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

#include <optional>
#include <utility>
#include <vector>

#include "spindle/states.hpp"
#include "spindle/system.hpp"

namespace spindle {

// Elapsed-time accumulator for laboratory-frame simulations: pulse generators
// read it to keep the carrier phase continuous across segments, and evol/prop
// advance it by the propagated duration. Pass explicit instances for
// concurrent simulations; the global instance is a single-thread convenience.
struct Wallclock {
  double elapsed = 0.0;
  void advance(double t) { elapsed += t; }
  void reset() { elapsed = 0.0; }
};
Wallclock& global_wallclock();

// Jump operator with sqrt(rate) folded into the matrix.
struct CollapseOperator {
  QMatrix op;
};

// Ordered transition-rate table. Keys are "source -> target" with optional
// whitespace; "<-" swaps the roles. Endpoints are level names ("GS") or
// projector expressions "Name[m]" for native spins and ghost-spin sectors
// ("C_1[0]"). Rates are in Hz and must be non-negative; zero-rate entries are
// dropped.
using RateTable = std::vector<std::pair<std::string, double>>;

// Builds one or more collapse operators per rate entry. Companion factors
// present on both sides are conserved (summed over, spin-conserving); source
// states carry the full rate into each operator, and companions that exist
// only on the target side receive the rate uniformly across their states.
std::vector<CollapseOperator> transition_operators(const SpinSystem& sys, const RateTable& rates);

// Phenomenological relaxation from member T1/T2 attributes (seconds):
// sqrt(1/(2 T1)) S+ and S- pairs (infinite-temperature longitudinal), and a
// pure-dephasing operator sqrt(1/(2 T2')) 2 Sz with 1/T2' = 1/T2 - 1/(2 T1)
// clamped at zero. Throws DomainError when T2 > 2 T1.
std::vector<CollapseOperator> relaxation_operators(const SpinSystem& sys);

// Lindbladian superoperator in column-stacking convention:
//   -i (1 x H - H^T x 1)
//   + sum_k conj(L) x L - (1 x L^dag L + (L^dag L)^T x 1) / 2.
QMatrix liouvillian(const QMatrix& h, const std::vector<CollapseOperator>& c_ops);

enum class PropKind { Unitary, Superoperator };

struct Propagator {
  PropKind kind = PropKind::Unitary;
  QMatrix matrix;
  double dt = 0.0;
};

// Matrix product; rhs acts first. Durations add.
Propagator operator*(const Propagator& later, const Propagator& earlier);

// exp(-i H t), or exp(L t) in Liouville space when collapse operators are
// given. States go in and come out in their Hilbert-space form; the
// vectorization is internal.
Propagator evol(const QMatrix& h, double t, const std::vector<CollapseOperator>& c_ops = {},
                Wallclock* wallclock = nullptr);
QMatrix evol(const QMatrix& h, double t, const QMatrix& state,
             const std::vector<CollapseOperator>& c_ops = {}, Wallclock* wallclock = nullptr);

// Applies a cached propagator: U psi / U rho U^dag for the unitary kind,
// unvec(M vec(rho)) for the superoperator kind. Kets passed to a
// superoperator are promoted to density matrices.
QMatrix apply_superoperator(const Propagator& p, const QMatrix& state);

// Piecewise-constant control amplitudes on a uniform grid: c_i(t) =
// amplitudes[i][k] for t in [k dt, (k+1) dt).
struct ControlSequence {
  double dt = 0.0;
  std::vector<std::vector<double>> amplitudes;
  size_t steps() const;
};

enum class Engine { Cpu, Rk45 };

struct PropOptions {
  Engine engine = Engine::Cpu;
  bool magnus = true;
  double rk_rel_tol = 1e-8;
};

// Experimental: time-dependent collapse operators
// L_k(t) = base + sum_i amplitudes[term.first][k] * term.second.
struct TimeDependentCollapse {
  QMatrix base;
  std::vector<std::pair<size_t, QMatrix>> terms;
};

// Propagation under H(t) = H0 + sum_i c_i(t) H_i. The cpu engine
// exponentiates per step; with magnus=true the exponent uses the averaged
// generator plus the second-order commutator correction. The rk45 engine
// integrates the same piecewise-constant generator adaptively. The cumulative
// propagator is the ordered product P_{K-1} ... P_0.
Propagator prop(const QMatrix& h0, const std::vector<QMatrix>& h_controls,
                const ControlSequence& controls, const std::vector<CollapseOperator>& c_ops = {},
                const PropOptions& options = {}, Wallclock* wallclock = nullptr,
                const std::vector<TimeDependentCollapse>& td_c_ops = {});
QMatrix prop(const QMatrix& h0, const std::vector<QMatrix>& h_controls,
             const ControlSequence& controls, const QMatrix& state,
             const std::vector<CollapseOperator>& c_ops = {}, const PropOptions& options = {},
             Wallclock* wallclock = nullptr, const std::vector<TimeDependentCollapse>& td_c_ops = {});

// Carrier pulse on one spin: returns ([Sx, Sy], amplitudes) with
// c_x[k] = A cos(w (t0 + k dt + dt/2) + phase) and the sine quadrature on Sy,
// t0 taken from the wallclock for lab-frame phase continuity. The wallclock
// is not advanced here; prop does that.
std::pair<std::vector<QMatrix>, ControlSequence> square_pulse(
    const SpinSystem& sys, const std::string& spin_name, double amplitude, double frequency,
    double phase, double duration, double dt, const Wallclock* wallclock = nullptr);

// Same with a per-sample amplitude envelope.
std::pair<std::vector<QMatrix>, ControlSequence> arb_pulse(
    const SpinSystem& sys, const std::string& spin_name, const std::vector<double>& envelope,
    double frequency, double phase, double dt, const Wallclock* wallclock = nullptr);

}  // namespace spindle
