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
#include "spindle/states.hpp"

#include <algorithm>
#include <cmath>

#include "spindle/constants.hpp"

namespace spindle {

namespace {

struct Token {
  std::string name;
  double value;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<Token> parse_spec(const std::string& spec) {
  std::vector<Token> tokens;
  if (trim(spec).empty()) return tokens;
  size_t pos = 0;
  while (pos <= spec.size()) {
    size_t comma = spec.find(',', pos);
    size_t len = comma == std::string::npos ? std::string::npos : comma - pos;
    std::string tok = trim(spec.substr(pos, len));
    if (tok.empty()) throw ValueError("state spec: empty token in '" + spec + "'");
    size_t lb = tok.find('[');
    size_t rb = tok.find(']');
    if (lb == std::string::npos || lb == 0 || rb != tok.size() - 1 || rb <= lb + 1)
      throw ValueError("state spec: token '" + tok + "' is not of the form Name[m]");
    std::string mstr = tok.substr(lb + 1, rb - lb - 1);
    char* end = nullptr;
    double m = std::strtod(mstr.c_str(), &end);
    if (end == mstr.c_str() || *end != '\0')
      throw ValueError("state spec: cannot parse magnetic number '" + mstr + "'");
    tokens.push_back({tok.substr(0, lb), m});
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return tokens;
}

// Magnetic number if valid for the member, otherwise a 0-based sublevel
// index.
int resolve_sublevel(const Member& member, double value) {
  try {
    return sublevel_from_m(member.val, value);
  } catch (const ValueError&) {
  }
  long idx = std::lround(value);
  if (std::abs(value - idx) < 1e-9 && idx >= 0 && idx < member.multiplicity())
    return static_cast<int>(idx);
  throw ValueError("state spec: '" + member.name + "[" + std::to_string(value) +
                   "]' is neither a magnetic number nor a sublevel index");
}

std::map<std::string, int> resolve_tokens(const SpinSystem& sys, const std::string& spec) {
  std::map<std::string, int> constraints;
  for (const auto& tok : parse_spec(spec)) {
    const Member& m = sys.member(tok.name);  // throws on unknown member
    if (constraints.count(tok.name))
      throw ValueError("state spec: member '" + tok.name + "' appears twice");
    constraints[tok.name] = resolve_sublevel(m, tok.value);
  }
  return constraints;
}

std::vector<long> matching_states(const SpinSystem& sys,
                                  const std::map<std::string, int>& constraints) {
  std::vector<long> matches;
  const auto& basis = sys.basis_table();
  for (long g = 0; g < sys.dim(); ++g) {
    bool ok = true;
    for (const auto& [name, idx] : constraints) {
      auto it = basis[g].sub.find(name);
      if (it == basis[g].sub.end() || it->second != idx) {
        ok = false;
        break;
      }
    }
    if (ok) matches.push_back(g);
  }
  return matches;
}

}  // namespace

QMatrix state(const SpinSystem& sys, const std::string& spec) {
  auto constraints = resolve_tokens(sys, spec);
  auto matches = matching_states(sys, constraints);
  if (matches.empty()) throw ValueError("state: no basis state satisfies '" + spec + "'");
  if (matches.size() > 1) {
    std::string missing;
    const auto& basis = sys.basis_table();
    for (const auto& m : sys.members())
      if (!constraints.count(m.name) && basis[matches[0]].sub.count(m.name))
        missing += missing.empty() ? m.name : ", " + m.name;
    throw ValueError("state: underspecified ket '" + spec + "' (unresolved: " + missing + ")");
  }
  cx_mat psi = cx_mat::Zero(sys.dim(), 1);
  psi(matches[0], 0) = 1.0;
  return QMatrix(std::move(psi), Kind::Ket);
}

QMatrix state_dm(const SpinSystem& sys, const std::string& spec) {
  auto constraints = resolve_tokens(sys, spec);
  auto matches = matching_states(sys, constraints);
  if (matches.empty()) throw ValueError("state_dm: no basis state satisfies '" + spec + "'");
  const auto& basis = sys.basis_table();
  for (size_t k = 1; k < matches.size(); ++k)
    if (basis[matches[k]].branch_path != basis[matches[0]].branch_path)
      throw DomainError("state_dm: '" + spec + "' does not resolve a direct-sum branch");
  cx_mat rho = cx_mat::Zero(sys.dim(), sys.dim());
  double total = 0;
  for (long g : matches) {
    double w = 1.0;
    for (const auto& [name, idx] : basis[g].sub) {
      (void)idx;
      if (!constraints.count(name)) w /= sys.member(name).multiplicity();
    }
    rho(g, g) = w;
    total += w;
  }
  rho /= total;
  return QMatrix(std::move(rho));
}

QMatrix ket2dm(const QMatrix& psi) {
  if (psi.cols() != 1) throw DimensionError("ket2dm: input is not a column vector");
  if (std::abs(psi.norm() - 1.0) > 1e-8) throw DomainError("ket2dm: ket is not normalized");
  cx_mat v = psi.to_dense();
  return QMatrix(cx_mat(v * v.adjoint()));
}

QMatrix dm2ket(const QMatrix& rho) {
  if (!rho.is_square()) throw DimensionError("dm2ket: input is not square");
  auto eig = eig_hermitian(rho);
  long n = rho.rows();
  double lmax = eig.values(n - 1);
  double tr = rho.trace().real();
  if (lmax < (1.0 - 1e-10) * tr)
    throw DomainError("dm2ket: density matrix is not rank one (mixed state)");
  cx_vec v = eig.vectors.to_dense().col(n - 1);
  for (long i = 0; i < n; ++i)
    if (std::abs(v(i)) > 1e-8) {
      v *= std::conj(v(i)) / std::abs(v(i));
      break;
    }
  return QMatrix(cx_mat(v), Kind::Ket);
}

QMatrix dm2vec(const QMatrix& rho) {
  if (!rho.is_square()) throw DimensionError("dm2vec: input is not square");
  cx_mat d = rho.to_dense();
  // Eigen matrices are column-major, so reshaping is column stacking.
  cx_mat v = Eigen::Map<cx_mat>(d.data(), d.size(), 1);
  return QMatrix(std::move(v), Kind::Ket);
}

QMatrix vec2dm(const QMatrix& vec) {
  if (vec.cols() != 1) throw DimensionError("vec2dm: input is not a column vector");
  long n = static_cast<long>(std::lround(std::sqrt(static_cast<double>(vec.rows()))));
  if (n * n != vec.rows()) throw DimensionError("vec2dm: length is not a perfect square");
  cx_mat v = vec.to_dense();
  cx_mat rho = Eigen::Map<cx_mat>(v.data(), n, n);
  return QMatrix(std::move(rho));
}

QMatrix pol_spin(double p) {
  if (p < -1.0 || p > 1.0) throw ValueError("pol_spin: polarization outside [-1, 1]");
  cx_mat rho = cx_mat::Zero(2, 2);
  rho(0, 0) = 0.5 * (1.0 + p);
  rho(1, 1) = 0.5 * (1.0 - p);
  return QMatrix(std::move(rho));
}

QMatrix thermal_state(const QMatrix& h, double temperature_kelvin) {
  if (temperature_kelvin <= 0.0) throw DomainError("thermal_state: temperature must be positive");
  auto eig = eig_hermitian(h);
  long n = h.rows();
  double beta = constants::hbar / (constants::k_B * temperature_kelvin);
  Eigen::VectorXd w(n);
  double emin = eig.values(0);
  for (long i = 0; i < n; ++i) w(i) = std::exp(-beta * (eig.values(i) - emin));
  w /= w.sum();
  cx_mat v = eig.vectors.to_dense();
  return QMatrix(cx_mat(v * w.asDiagonal() * v.adjoint()));
}

cx expect(const QMatrix& op, const QMatrix& state) {
  if (!op.is_square()) throw DimensionError("expect: operator is not square");
  if (state.cols() == 1 && state.rows() == op.rows() && op.rows() > 1) {
    cx_mat psi = state.to_dense();
    return (psi.adjoint() * op.to_dense() * psi)(0, 0);
  }
  if (state.cols() == 1 && state.rows() == op.rows() * op.rows())
    return (op * vec2dm(state)).trace();
  if (state.rows() == op.rows() && state.cols() == op.cols()) return (op * state).trace();
  throw DimensionError("expect: state shape does not match operator");
}

QMatrix rot_propagator(const QMatrix& generator, double angle) {
  if (hermiticity_defect(generator) > tol::hermiticity)
    throw DomainError("rot: generator is not Hermitian");
  return expm(cx(0.0, -angle) * generator);
}

QMatrix rot(const QMatrix& generator, double angle, const QMatrix& state) {
  QMatrix u = rot_propagator(generator, angle);
  if (state.cols() == 1 && state.rows() == generator.rows()) return u * state;
  if (state.cols() == 1 && state.rows() == generator.rows() * generator.rows())
    return dm2vec(u * vec2dm(state) * u.adjoint());
  if (state.rows() == generator.rows() && state.cols() == generator.cols())
    return u * state * u.adjoint();
  throw DimensionError("rot: state shape does not match generator");
}

}  // namespace spindle
