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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spindle/propagation.hpp"

namespace spindle {

// One discretized classical coordinate: a value grid (spanning the full
// period for coordinates with dynamics), optional weights (uniform when
// absent, normalized internally), and exchange dynamics as a map from
// derivative order n in {1, 2} to a frequency in rad/s.
struct StochasticCoordinate {
  std::vector<double> values;
  std::optional<std::vector<double>> weights;
  std::map<int, double> dynamics;
  bool periodic = true;
};

// Ordered set of named classical coordinates; the grid is their cartesian
// product flattened in row-major declaration order.
class StochasticParameterSet {
 public:
  StochasticCoordinate& operator[](const std::string& name);
  const StochasticCoordinate& at(const std::string& name) const;
  const std::vector<std::string>& names() const { return order_; }
  std::vector<int> dof() const;  // grid shape
  long grid_size() const;
  // Normalized weight of one flattened grid point.
  double weight(long flat_index) const;
  // Coordinate values of one flattened grid point.
  std::vector<double> values_at(long flat_index) const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, StochasticCoordinate> coords_;
};

enum class FpSpace { Hilbert, Liouville };

// Concatenated per-grid-point quantum states (kets or vectorized density
// matrices) as a single vector.
struct FPState {
  cx_vec data;
  std::vector<int> grid;
  long qdim = 0;  // length of one quantum block
  FpSpace space = FpSpace::Liouville;
  long blocks() const;
};

// Spectral differentiation matrix on a uniform periodic grid over [0, 2 pi),
// built directly in Fourier space with eigenvalues (i k)^n; the odd Nyquist
// mode is dropped for n = 1.
QMatrix fourier_diff_matrix(int n_points, int order);

using HamiltonianFun = std::function<QMatrix(const std::vector<double>&)>;

// Fokker-Planck generator: block diagonal per-grid-point generators (-iH or
// the Lindbladian, by space) plus, per coordinate with dynamics, the exchange
// term omega (D^n x 1) lifted over the other coordinates.
QMatrix fp_superoperator(const HamiltonianFun& h_fun, const StochasticParameterSet& params,
                         FpSpace space, const std::vector<CollapseOperator>& c_ops = {});

// Cached propagator over Fokker-Planck space for one time step; block
// diagonal (and exponentiated blockwise) when no coordinate has dynamics.
struct FPPropagator {
  double dt = 0.0;
  FpSpace space = FpSpace::Liouville;
  std::vector<int> grid;
  long qdim = 0;
  bool blockwise = false;
  std::vector<cx_mat> blocks;  // per grid point when blockwise
  cx_mat full;                 // otherwise
};

FPPropagator stochastic_evol(const HamiltonianFun& h_fun, const StochasticParameterSet& params,
                             double dt, FpSpace space,
                             const std::vector<CollapseOperator>& c_ops = {});

FPState apply(const FPPropagator& p, const FPState& state);

// Replicates a density matrix across the grid scaled by the normalized
// weights, so that summing grid blocks recovers the weighted ensemble
// average.
FPState dm2fp(const QMatrix& rho, const StochasticParameterSet& params);
// Ket variant (Hilbert-space Fokker-Planck): blocks scaled by sqrt(weight).
FPState ket2fp(const QMatrix& psi, const StochasticParameterSet& params);
// Sums grid blocks back to a single density matrix.
QMatrix fp2dm(const FPState& state);

// Sum over grid blocks of tr(op block) (or <psi|op|psi> in Hilbert space).
cx fp_expect(const QMatrix& op, const FPState& state);

}  // namespace spindle
