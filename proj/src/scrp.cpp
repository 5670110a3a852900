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
#include "spindle/scrp.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "spindle/system.hpp"

namespace spindle::scrp {

QMatrix initial_state(const SpinSystem& sys, const std::string& name_a, const std::string& name_b,
                      double alpha, double beta, double purity, double theta, double phi) {
  if (sys.member(name_a).val != 0.5 || sys.member(name_b).val != 0.5)
    throw DomainError("scrp::initial_state: pair members must be spin-1/2");
  if (purity < 0.0 || purity > 1.0)
    throw ValueError("scrp::initial_state: purity must lie in [0, 1]");

  // Pair space basis |m_a m_b>: uu, ud, du, dd.
  cx_vec singlet = cx_vec::Zero(4), t0 = cx_vec::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  t0(1) = 1.0 / std::sqrt(2.0);
  t0(2) = 1.0 / std::sqrt(2.0);
  cx_vec psi = std::cos(alpha) * singlet + std::exp(cx(0.0, beta)) * std::sin(alpha) * t0;

  // Collective rotation taking the molecular quantization axis to (theta,
  // phi) in the lab frame.
  LocalSpinOps half = local_spin_ops(0.5);
  auto lift = [](const cx_mat& a, const cx_mat& b) {
    cx_mat out(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
    return out;
  };
  cx_mat id2 = cx_mat::Identity(2, 2);
  cx_mat jy = lift(half.y, id2) + lift(id2, half.y);
  cx_mat jz = lift(half.z, id2) + lift(id2, half.z);
  cx_mat r = (cx(0.0, -phi) * jz).exp() * (cx(0.0, -theta) * jy).exp();
  psi = r * psi;

  cx_mat rho_pair = purity * (psi * psi.adjoint()).eval() +
                    (1.0 - purity) * 0.25 * cx_mat::Identity(4, 4);
  QMatrix embedded = embed_on_members(sys.layout(), {name_a, name_b}, QMatrix(rho_pair));
  return embedded.unit();
}

FieldSweep cw_epr_fieldsweep(const SpinSystem& sys, const std::vector<std::string>& spin_names,
                             const QMatrix& rho0, const QMatrix& h_field, const QMatrix& h_rest,
                             double omega_mw, double broadening_tesla,
                             const std::vector<double>& field_grid) {
  if (field_grid.empty()) throw ValueError("cw_epr_fieldsweep: empty field grid");
  if (omega_mw <= 0.0) throw ValueError("cw_epr_fieldsweep: microwave frequency must be positive");
  if (hermiticity_defect(h_field) > tol::hermiticity ||
      hermiticity_defect(h_rest) > tol::hermiticity)
    throw DomainError("cw_epr_fieldsweep: Hamiltonian parts must be Hermitian");

  QMatrix sx_total = QMatrix::zero(sys.dim(), sys.dim());
  for (const auto& name : spin_names) sx_total = sx_total + sys.op(name + ".x");

  FieldSweep out;
  out.field_tesla = field_grid;
  out.intensity.assign(field_grid.size(), 0.0);

  for (size_t b_idx = 0; b_idx < field_grid.size(); ++b_idx) {
    double b = field_grid[b_idx];
    auto eig = eig_hermitian(b * h_field + h_rest);
    cx_mat v = eig.vectors.to_dense();
    cx_mat sx_eig = v.adjoint() * sx_total.to_dense() * v;
    cx_mat rho_eig = v.adjoint() * rho0.to_dense() * v;
    cx_mat hf_eig = v.adjoint() * h_field.to_dense() * v;

    double acc = 0.0;
    for (long i = 0; i < sys.dim(); ++i) {
      for (long j = i + 1; j < sys.dim(); ++j) {
        double w = std::norm(sx_eig(i, j));
        if (w < 1e-18) continue;
        double delta = (eig.values(j) - eig.values(i)) - omega_mw;
        // field-to-frequency slope of this transition (Hellmann-Feynman)
        double slope = std::abs(hf_eig(j, j).real() - hf_eig(i, i).real());
        double width = slope * broadening_tesla + 1e-9 * omega_mw;
        double x = delta / width;
        double shape = -2.0 * x / ((1.0 + x * x) * (1.0 + x * x));
        double dp = rho_eig(i, i).real() - rho_eig(j, j).real();
        acc += w * dp * shape;
      }
    }
    out.intensity[b_idx] = acc;
  }

  double peak = 0.0;
  for (double v : out.intensity) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : out.intensity) v /= peak;
  return out;
}

MaryTrace mary_trace(const SpinSystem& sys, const RateTable& rates, const RateTable& rates_laser,
                     const std::function<QMatrix(double)>& h_of_b,
                     const std::vector<double>& b_fields, long pulse_start, long pulse_stop,
                     double dt, long steps) {
  if (dt <= 0.0 || steps < 1) throw ValueError("mary_trace: need positive dt and steps");
  for (const char* required : {"GS.id", "S1.id"})
    if (!sys.has_op(required))
      throw ValueError(std::string("mary_trace: system lacks the level operator ") + required);

  std::vector<CollapseOperator> c_dark = transition_operators(sys, rates);
  std::vector<CollapseOperator> c_bright = c_dark;
  for (auto& op : transition_operators(sys, rates_laser)) c_bright.push_back(std::move(op));

  QMatrix rho0 = sys.op("GS.id").unit();
  const QMatrix& pl_op = sys.op("S1.id");

  MaryTrace out;
  for (long i = 0; i < steps; ++i) out.time.push_back(static_cast<double>(i) * dt);
  for (double b : b_fields) {
    QMatrix h = h_of_b(b);
    Propagator u_bright = evol(h, dt, c_bright);
    Propagator u_dark = evol(h, dt, c_dark);
    QMatrix rho = rho0;
    std::vector<double> trace;
    trace.reserve(steps);
    for (long i = 0; i < steps; ++i) {
      trace.push_back(expect(pl_op, rho).real());
      bool bright = i >= pulse_start && i < pulse_stop;
      rho = apply_superoperator(bright ? u_bright : u_dark, rho);
    }
    out.luminescence.push_back(std::move(trace));
  }
  return out;
}

}  // namespace spindle::scrp
