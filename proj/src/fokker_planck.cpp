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
#include "spindle/fokker_planck.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace spindle {

StochasticCoordinate& StochasticParameterSet::operator[](const std::string& name) {
  auto it = coords_.find(name);
  if (it == coords_.end()) {
    order_.push_back(name);
    it = coords_.emplace(name, StochasticCoordinate{}).first;
  }
  return it->second;
}

const StochasticCoordinate& StochasticParameterSet::at(const std::string& name) const {
  auto it = coords_.find(name);
  if (it == coords_.end()) throw ValueError("unknown stochastic coordinate '" + name + "'");
  return it->second;
}

std::vector<int> StochasticParameterSet::dof() const {
  std::vector<int> shape;
  for (const auto& n : order_) {
    const auto& c = coords_.at(n);
    if (c.values.empty()) throw ValueError("stochastic coordinate '" + n + "' has no grid values");
    bool has_dynamics = false;
    for (const auto& [order, w] : c.dynamics)
      if (w != 0.0) has_dynamics = true;
    if (has_dynamics && c.values.size() < 2)
      throw DomainError("stochastic coordinate '" + n + "' has dynamics on a one-point grid");
    if (c.weights && c.weights->size() != c.values.size())
      throw DimensionError("stochastic coordinate '" + n + "': weights/values length mismatch");
    shape.push_back(static_cast<int>(c.values.size()));
  }
  if (shape.empty()) throw ValueError("empty stochastic parameter set");
  return shape;
}

long StochasticParameterSet::grid_size() const {
  long n = 1;
  for (int d : dof()) n *= d;
  return n;
}

double StochasticParameterSet::weight(long flat_index) const {
  double w = 1.0;
  auto shape = dof();
  for (size_t c = order_.size(); c-- > 0;) {
    const auto& coord = coords_.at(order_[c]);
    long idx = flat_index % shape[c];
    flat_index /= shape[c];
    if (coord.weights) {
      double total = 0.0;
      for (double x : *coord.weights) {
        if (x < 0.0) throw ValueError("stochastic weights must be non-negative");
        total += x;
      }
      if (total <= 0.0) throw ValueError("stochastic weights sum to zero");
      w *= (*coord.weights)[idx] / total;
    } else {
      w /= static_cast<double>(shape[c]);
    }
  }
  return w;
}

std::vector<double> StochasticParameterSet::values_at(long flat_index) const {
  auto shape = dof();
  std::vector<double> vals(order_.size());
  for (size_t c = order_.size(); c-- > 0;) {
    const auto& coord = coords_.at(order_[c]);
    vals[c] = coord.values[flat_index % shape[c]];
    flat_index /= shape[c];
  }
  return vals;
}

long FPState::blocks() const {
  long n = 1;
  for (int d : grid) n *= d;
  return n;
}

QMatrix fourier_diff_matrix(int n_points, int order) {
  if (n_points < 2) throw ValueError("fourier_diff_matrix: need at least two grid points");
  if (order != 1 && order != 2) throw ValueError("fourier_diff_matrix: order must be 1 or 2");
  const int n = n_points;
  // Circulant built from the spectral symbol (i k)^order; for odd derivative
  // orders the even-N Nyquist mode has no consistent real representation and
  // is set to zero.
  std::vector<cx> symbol(n);
  for (int k = 0; k < n; ++k) {
    int k_signed = k <= n / 2 ? k : k - n;
    if (order == 1) {
      bool nyquist = (n % 2 == 0) && (k == n / 2);
      symbol[k] = nyquist ? cx(0.0, 0.0) : cx(0.0, static_cast<double>(k_signed));
    } else {
      symbol[k] = cx(-static_cast<double>(k_signed) * k_signed, 0.0);
    }
  }
  // first column of the circulant: c_j = (1/N) sum_k symbol_k e^{2 pi i k j / N}
  std::vector<cx> col(n);
  for (int j = 0; j < n; ++j) {
    cx acc = 0.0;
    for (int k = 0; k < n; ++k)
      acc += symbol[k] * std::exp(cx(0.0, 2.0 * pi * k * j / n));
    col[j] = acc / static_cast<double>(n);
  }
  cx_mat d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cx v = col[(i - j + n) % n];
      // the symbol is conjugation-symmetric, so the matrix is real
      d(i, j) = cx(v.real(), 0.0);
    }
  return QMatrix(std::move(d));
}

namespace {

struct GridGenerators {
  std::vector<cx_mat> blocks;
  long qdim;
  bool has_dynamics;
};

GridGenerators per_point_generators(const HamiltonianFun& h_fun,
                                    const StochasticParameterSet& params, FpSpace space,
                                    const std::vector<CollapseOperator>& c_ops) {
  GridGenerators out;
  const long grid = params.grid_size();
  out.has_dynamics = false;
  for (const auto& name : params.names())
    for (const auto& [order, w] : params.at(name).dynamics)
      if (w != 0.0) out.has_dynamics = true;

  out.qdim = 0;
  for (long g = 0; g < grid; ++g) {
    QMatrix h = h_fun(params.values_at(g));
    if (!h.is_square()) throw DimensionError("fp_superoperator: generator is not square");
    QMatrix gen = space == FpSpace::Hilbert
                      ? QMatrix(cx_mat(cx(0.0, -1.0) * h.to_dense()))
                      : liouvillian(h, c_ops);
    if (out.qdim == 0)
      out.qdim = gen.rows();
    else if (gen.rows() != out.qdim)
      throw DimensionError("fp_superoperator: generator dimension varies over the grid");
    out.blocks.push_back(gen.to_dense());
  }
  if (space == FpSpace::Hilbert && !c_ops.empty())
    throw DomainError("fp_superoperator: collapse operators require Liouville space");
  return out;
}

}  // namespace

QMatrix fp_superoperator(const HamiltonianFun& h_fun, const StochasticParameterSet& params,
                         FpSpace space, const std::vector<CollapseOperator>& c_ops) {
  auto shape = params.dof();
  GridGenerators gen = per_point_generators(h_fun, params, space, c_ops);
  const long grid = params.grid_size();
  const long q = gen.qdim;
  cx_mat f = cx_mat::Zero(grid * q, grid * q);
  for (long g = 0; g < grid; ++g) f.block(g * q, g * q, q, q) = gen.blocks[g];

  // Exchange terms: per coordinate, omega D^n acting on that grid axis,
  // identity on the other axes and on the quantum block.
  long stride_after = 1;  // product of grid dims after coordinate c, times nothing yet
  for (size_t c = params.names().size(); c-- > 0;) {
    const auto& coord = params.at(params.names()[c]);
    const int nc = shape[c];
    for (const auto& [order, omega] : coord.dynamics) {
      if (omega == 0.0) continue;
      cx_mat d = fourier_diff_matrix(nc, order).to_dense();
      // flat grid index = (... pre) * nc * stride_after + a * stride_after + post
      long pre_count = grid / (nc * stride_after);
      for (long pre = 0; pre < pre_count; ++pre)
        for (int a = 0; a < nc; ++a)
          for (int b = 0; b < nc; ++b) {
            if (d(a, b) == cx(0.0, 0.0)) continue;
            for (long post = 0; post < stride_after; ++post) {
              long ga = (pre * nc + a) * stride_after + post;
              long gb = (pre * nc + b) * stride_after + post;
              for (long i = 0; i < q; ++i) f(ga * q + i, gb * q + i) += omega * d(a, b);
            }
          }
    }
    stride_after *= nc;
  }
  return QMatrix(std::move(f), Kind::Superoperator);
}

FPPropagator stochastic_evol(const HamiltonianFun& h_fun, const StochasticParameterSet& params,
                             double dt, FpSpace space,
                             const std::vector<CollapseOperator>& c_ops) {
  if (dt <= 0.0) throw ValueError("stochastic_evol: dt must be positive");
  auto shape = params.dof();
  FPPropagator p;
  p.dt = dt;
  p.space = space;
  p.grid = shape;

  GridGenerators gen = per_point_generators(h_fun, params, space, c_ops);
  p.qdim = gen.qdim;
  if (!gen.has_dynamics) {
    // Static ensemble: the generator is block diagonal and each grid point
    // evolves independently.
    p.blockwise = true;
    for (const auto& block : gen.blocks) p.blocks.push_back(cx_mat((dt * block).exp()));
    return p;
  }
  p.blockwise = false;
  p.full = (dt * fp_superoperator(h_fun, params, space, c_ops).to_dense()).exp();
  return p;
}

FPState apply(const FPPropagator& p, const FPState& state) {
  if (state.grid != p.grid || state.qdim != p.qdim || state.space != p.space)
    throw DimensionError("apply: propagator and state layouts differ");
  FPState out = state;
  if (p.blockwise) {
    for (long g = 0; g < state.blocks(); ++g)
      out.data.segment(g * p.qdim, p.qdim) = p.blocks[g] * state.data.segment(g * p.qdim, p.qdim);
  } else {
    out.data = p.full * state.data;
  }
  return out;
}

FPState dm2fp(const QMatrix& rho, const StochasticParameterSet& params) {
  if (!rho.is_square()) throw DimensionError("dm2fp: state is not square");
  QMatrix v = dm2vec(rho);
  const long grid = params.grid_size();
  FPState out;
  out.grid = params.dof();
  out.qdim = v.rows();
  out.space = FpSpace::Liouville;
  out.data.resize(grid * out.qdim);
  for (long g = 0; g < grid; ++g)
    out.data.segment(g * out.qdim, out.qdim) = params.weight(g) * v.to_dense().col(0);
  return out;
}

FPState ket2fp(const QMatrix& psi, const StochasticParameterSet& params) {
  if (psi.cols() != 1) throw DimensionError("ket2fp: state is not a ket");
  const long grid = params.grid_size();
  FPState out;
  out.grid = params.dof();
  out.qdim = psi.rows();
  out.space = FpSpace::Hilbert;
  out.data.resize(grid * out.qdim);
  for (long g = 0; g < grid; ++g)
    out.data.segment(g * out.qdim, out.qdim) =
        std::sqrt(params.weight(g)) * psi.to_dense().col(0);
  return out;
}

QMatrix fp2dm(const FPState& state) {
  if (state.space == FpSpace::Hilbert) {
    long d = state.qdim;
    cx_mat rho = cx_mat::Zero(d, d);
    for (long g = 0; g < state.blocks(); ++g) {
      cx_vec psi = state.data.segment(g * d, d);
      rho += psi * psi.adjoint();
    }
    return QMatrix(std::move(rho));
  }
  cx_vec sum = cx_vec::Zero(state.qdim);
  for (long g = 0; g < state.blocks(); ++g) sum += state.data.segment(g * state.qdim, state.qdim);
  return vec2dm(QMatrix(cx_mat(sum)));
}

cx fp_expect(const QMatrix& op, const FPState& state) {
  if (state.space == FpSpace::Hilbert) {
    if (op.rows() != state.qdim) throw DimensionError("fp_expect: operator dimension mismatch");
    cx acc = 0.0;
    cx_mat o = op.to_dense();
    for (long g = 0; g < state.blocks(); ++g) {
      cx_vec psi = state.data.segment(g * state.qdim, state.qdim);
      acc += (psi.adjoint() * o * psi)(0, 0);
    }
    return acc;
  }
  long d = op.rows();
  if (d * d != state.qdim) throw DimensionError("fp_expect: operator dimension mismatch");
  cx acc = 0.0;
  for (long g = 0; g < state.blocks(); ++g) {
    QMatrix rho = vec2dm(QMatrix(cx_mat(state.data.segment(g * state.qdim, state.qdim))));
    acc += (op * rho).trace();
  }
  return acc;
}

}  // namespace spindle
