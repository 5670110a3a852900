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
#include "spindle/propagation.hpp"

#include <algorithm>
#include <cmath>

namespace spindle {

Wallclock& global_wallclock() {
  static Wallclock clock;
  return clock;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

struct Endpoint {
  std::string name;
  std::optional<double> m;
};

Endpoint parse_endpoint(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) throw ValueError("transition: empty endpoint");
  size_t lb = s.find('[');
  if (lb == std::string::npos) return {s, std::nullopt};
  if (s.back() != ']' || lb == 0) throw ValueError("transition: malformed endpoint '" + s + "'");
  std::string mstr = s.substr(lb + 1, s.size() - lb - 2);
  char* end = nullptr;
  double m = std::strtod(mstr.c_str(), &end);
  if (end == mstr.c_str() || *end != '\0')
    throw ValueError("transition: cannot parse projector index '" + mstr + "'");
  return {s.substr(0, lb), m};
}

std::pair<Endpoint, Endpoint> parse_transition(const std::string& key) {
  size_t fwd = key.find("->");
  size_t rev = key.find("<-");
  if (fwd != std::string::npos && rev == std::string::npos)
    return {parse_endpoint(key.substr(0, fwd)), parse_endpoint(key.substr(fwd + 2))};
  if (rev != std::string::npos && fwd == std::string::npos)
    return {parse_endpoint(key.substr(rev + 2)), parse_endpoint(key.substr(0, rev))};
  throw ValueError("transition '" + key + "' needs exactly one arrow");
}

using CompanionKey = std::map<std::string, int>;

// The manifold of an endpoint, one global-space vector per companion
// assignment.
struct ResolvedEndpoint {
  std::vector<std::pair<CompanionKey, cx_vec>> states;
};

ResolvedEndpoint resolve_endpoint(const SpinSystem& sys, const Endpoint& ep) {
  const auto& basis = sys.basis_table();
  ResolvedEndpoint out;

  if (const auto* sector = sys.ghost_sector(ep.name)) {
    if (!ep.m) throw ValueError("transition: ghost endpoint '" + ep.name + "' needs [m]");
    int col = sublevel_from_m(sector->total_spin, *ep.m);
    cx_vec v = sector->vectors.col(col);
    const auto& names = sector->members;
    std::map<CompanionKey, cx_vec> grouped;
    for (long g = 0; g < sys.dim(); ++g) {
      const auto& st = basis[g];
      bool on_span = std::all_of(names.begin(), names.end(),
                                 [&](const std::string& n) { return st.sub.count(n) > 0; });
      if (!on_span) continue;
      long packed = 0;
      for (const auto& n : names) packed = packed * sys.member(n).multiplicity() + st.sub.at(n);
      CompanionKey key = st.sub;
      for (const auto& n : names) key.erase(n);
      auto [it, inserted] = grouped.try_emplace(key, cx_vec::Zero(sys.dim()));
      it->second(g) = v(packed);
      (void)inserted;
    }
    for (auto& [key, vec] : grouped) out.states.emplace_back(key, std::move(vec));
    return out;
  }

  const Member& mem = sys.member(ep.name);
  std::optional<int> sublevel;
  if (ep.m)
    sublevel = sublevel_from_m(mem.val, *ep.m);
  else if (mem.is_spin())
    throw ValueError("transition: spin endpoint '" + ep.name + "' needs a projector [m]");
  for (long g = 0; g < sys.dim(); ++g) {
    const auto& st = basis[g];
    auto it = st.sub.find(ep.name);
    if (it == st.sub.end()) continue;
    if (sublevel && it->second != *sublevel) continue;
    CompanionKey key = st.sub;
    key.erase(ep.name);
    cx_vec v = cx_vec::Zero(sys.dim());
    v(g) = 1.0;
    out.states.emplace_back(std::move(key), std::move(v));
  }
  return out;
}

std::set<std::string> key_members(const ResolvedEndpoint& ep) {
  std::set<std::string> common;
  bool first = true;
  for (const auto& [key, v] : ep.states) {
    (void)v;
    std::set<std::string> names;
    for (const auto& [n, idx] : key) {
      (void)idx;
      names.insert(n);
    }
    if (first) {
      common = std::move(names);
      first = false;
    } else {
      std::set<std::string> inter;
      std::set_intersection(common.begin(), common.end(), names.begin(), names.end(),
                            std::inserter(inter, inter.begin()));
      common = std::move(inter);
    }
  }
  return common;
}

}  // namespace

std::vector<CollapseOperator> transition_operators(const SpinSystem& sys, const RateTable& rates) {
  std::vector<CollapseOperator> ops;
  for (const auto& [key, rate] : rates) {
    if (rate < 0.0 || !std::isfinite(rate))
      throw ValueError("transition '" + key + "': rate must be finite and non-negative");
    if (rate == 0.0) continue;
    auto [src_ep, tgt_ep] = parse_transition(key);
    ResolvedEndpoint src = resolve_endpoint(sys, src_ep);
    ResolvedEndpoint tgt = resolve_endpoint(sys, tgt_ep);
    if (src.states.empty() || tgt.states.empty())
      throw ValueError("transition '" + key + "': endpoint resolves to no states");

    // Companions present on both sides are conserved and summed inside one
    // operator; leftover source/target companion assignments enumerate
    // separate operators.
    std::set<std::string> src_members = key_members(src), tgt_members = key_members(tgt);
    std::set<std::string> shared;
    std::set_intersection(src_members.begin(), src_members.end(), tgt_members.begin(),
                          tgt_members.end(), std::inserter(shared, shared.begin()));

    auto split = [&](const ResolvedEndpoint& ep) {
      std::map<CompanionKey, std::map<CompanionKey, cx_vec>> groups;  // residual -> shared -> vec
      for (const auto& [ckey, vec] : ep.states) {
        CompanionKey shared_key, residual_key;
        for (const auto& [n, idx] : ckey)
          (shared.count(n) ? shared_key : residual_key)[n] = idx;
        groups[residual_key][shared_key] = vec;
      }
      return groups;
    };
    auto src_groups = split(src);
    auto tgt_groups = split(tgt);

    double scale = std::sqrt(rate / static_cast<double>(tgt_groups.size()));
    for (const auto& [rs, smap] : src_groups) {
      (void)rs;
      for (const auto& [rt, tmap] : tgt_groups) {
        (void)rt;
        cx_mat l = cx_mat::Zero(sys.dim(), sys.dim());
        for (const auto& [ck, svec] : smap) {
          auto it = tmap.find(ck);
          if (it == tmap.end())
            throw DomainError("transition '" + key +
                              "': no spin-conserving identification between source and target "
                              "manifolds");
          l += it->second * svec.adjoint();
        }
        ops.push_back({QMatrix(cx_mat(scale * l))});
      }
    }
  }
  return ops;
}

std::vector<CollapseOperator> relaxation_operators(const SpinSystem& sys) {
  std::vector<CollapseOperator> ops;
  for (const auto& m : sys.members()) {
    auto t1_it = m.attributes.find("T1");
    auto t2_it = m.attributes.find("T2");
    bool has_t1 = t1_it != m.attributes.end();
    bool has_t2 = t2_it != m.attributes.end();
    if (!m.is_spin() || (!has_t1 && !has_t2)) continue;
    if (has_t1 && t1_it->second <= 0.0)
      throw ValueError("relaxation: member '" + m.name + "' has non-positive T1");
    if (has_t2 && t2_it->second <= 0.0)
      throw ValueError("relaxation: member '" + m.name + "' has non-positive T2");
    if (has_t1 && has_t2 && t2_it->second > 2.0 * t1_it->second)
      throw DomainError("relaxation: member '" + m.name + "' violates T2 <= 2 T1");
    if (has_t1) {
      double k = 1.0 / (2.0 * t1_it->second);
      ops.push_back({std::sqrt(k) * sys.op(m.name + ".plus")});
      ops.push_back({std::sqrt(k) * sys.op(m.name + ".minus")});
    }
    if (has_t2) {
      double inv_t2p = 1.0 / t2_it->second - (has_t1 ? 1.0 / (2.0 * t1_it->second) : 0.0);
      if (inv_t2p > 0.0)
        ops.push_back({std::sqrt(0.5 * inv_t2p) * (2.0 * sys.op(m.name + ".z"))});
    }
  }
  return ops;
}

QMatrix liouvillian(const QMatrix& h, const std::vector<CollapseOperator>& c_ops) {
  if (!h.is_square()) throw DimensionError("liouvillian: Hamiltonian must be square");
  if (hermiticity_defect(h) > tol::hermiticity)
    throw DomainError("liouvillian: Hamiltonian is not Hermitian");
  const long n = h.rows();
  QMatrix id = QMatrix::identity(n);
  QMatrix l = cx(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& c : c_ops) {
    if (c.op.rows() != n || c.op.cols() != n)
      throw DimensionError("liouvillian: collapse operator dimension mismatch");
    QMatrix ldl = c.op.adjoint() * c.op;
    l = l + kron(c.op.conj(), c.op) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
  }
  return l.with_kind(Kind::Superoperator);
}

Propagator operator*(const Propagator& later, const Propagator& earlier) {
  if (later.kind != earlier.kind) throw DomainError("propagator composition: kinds differ");
  return {later.kind, later.matrix * earlier.matrix, later.dt + earlier.dt};
}

Propagator evol(const QMatrix& h, double t, const std::vector<CollapseOperator>& c_ops,
                Wallclock* wallclock) {
  if (t < 0.0) throw ValueError("evol: negative duration");
  Propagator p;
  if (c_ops.empty()) {
    p = {PropKind::Unitary, expm(cx(0.0, -t) * h), t};
  } else {
    p = {PropKind::Superoperator, expm(t * liouvillian(h, c_ops)).with_kind(Kind::Superoperator),
         t};
  }
  if (wallclock) wallclock->advance(t);
  return p;
}

QMatrix evol(const QMatrix& h, double t, const QMatrix& state,
             const std::vector<CollapseOperator>& c_ops, Wallclock* wallclock) {
  bool is_ket = state.cols() == 1 && state.rows() == h.rows();
  if (is_ket && !c_ops.empty())
    throw DomainError("evol: kets cannot undergo dissipative evolution; use a density matrix");
  return apply_superoperator(evol(h, t, c_ops, wallclock), state);
}

QMatrix apply_superoperator(const Propagator& p, const QMatrix& state) {
  const long n = p.matrix.rows();
  if (p.kind == PropKind::Unitary) {
    if (state.cols() == 1 && state.rows() == n) return p.matrix * state;
    if (state.rows() == n && state.cols() == n)
      return p.matrix * state * p.matrix.adjoint();
    throw DimensionError("apply_superoperator: state does not match unitary propagator");
  }
  long d = static_cast<long>(std::lround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) throw DimensionError("apply_superoperator: superoperator is not n^2 x n^2");
  QMatrix rho = state;
  if (state.cols() == 1 && state.rows() == d) rho = ket2dm(state);
  if (rho.rows() == d && rho.cols() == d) return vec2dm(p.matrix * dm2vec(rho));
  if (rho.cols() == 1 && rho.rows() == n) return p.matrix * rho;
  throw DimensionError("apply_superoperator: state does not match superoperator");
}

size_t ControlSequence::steps() const {
  if (amplitudes.empty()) return 0;
  size_t k = amplitudes.front().size();
  for (const auto& arr : amplitudes)
    if (arr.size() != k) throw DimensionError("ControlSequence: amplitude arrays differ in length");
  return k;
}

namespace {

// Adaptive RK45 (Dormand-Prince) for the propagator ODE U' = A U on one
// piecewise-constant interval.
cx_mat rk45_interval(const cx_mat& a, cx_mat u, double t_span, double rel_tol) {
  double t = 0.0;
  double h = t_span;
  int guard = 0;
  while (t < t_span && guard++ < 1000000) {
    h = std::min(h, t_span - t);
    cx_mat k1 = a * u;
    cx_mat k2 = a * (u + h * 0.2 * k1);
    cx_mat k3 = a * (u + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
    cx_mat k4 = a * (u + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
    cx_mat k5 =
        a * (u + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 + 64448.0 / 6561 * k3 -
                      212.0 / 729 * k4));
    cx_mat k6 = a * (u + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                              49.0 / 176 * k4 - 5103.0 / 18656 * k5));
    cx_mat u5 = u + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                         2187.0 / 6784 * k5 + 11.0 / 84 * k6);
    cx_mat k7 = a * u5;
    cx_mat err = h * (71.0 / 57600 * k1 - 71.0 / 16695 * k3 + 71.0 / 1920 * k4 -
                      17253.0 / 339200 * k5 + 22.0 / 525 * k6 - 1.0 / 40 * k7);
    double sc = 1e-14 + rel_tol * std::max(u.cwiseAbs().maxCoeff(), u5.cwiseAbs().maxCoeff());
    double e = err.cwiseAbs().maxCoeff() / sc;
    if (e <= 1.0) {
      t += h;
      u = std::move(u5);
    }
    h *= std::clamp(0.9 * std::pow(std::max(e, 1e-12), -0.2), 0.2, 5.0);
  }
  return u;
}

}  // namespace

Propagator prop(const QMatrix& h0, const std::vector<QMatrix>& h_controls,
                const ControlSequence& controls, const std::vector<CollapseOperator>& c_ops,
                const PropOptions& options, Wallclock* wallclock,
                const std::vector<TimeDependentCollapse>& td_c_ops) {
  if (controls.dt <= 0.0) throw ValueError("prop: control dt must be positive");
  if (controls.amplitudes.size() != h_controls.size())
    throw DimensionError("prop: control amplitude count does not match operator count");
  const size_t steps = controls.steps();
  if (steps == 0) throw ValueError("prop: empty control sequence");
  const double dt = controls.dt;
  const bool liouville = !c_ops.empty() || !td_c_ops.empty();

  // Sample index clamped at the last value: the Magnus average of the final
  // step reuses it, keeping the constant-amplitude case exact.
  auto amp = [&](size_t i, size_t k) { return controls.amplitudes[i][std::min(k, steps - 1)]; };
  auto hamiltonian = [&](size_t k) {
    QMatrix h = h0;
    for (size_t i = 0; i < h_controls.size(); ++i) {
      double c = amp(i, k);
      if (c != 0.0) h = h + c * h_controls[i];
    }
    return h;
  };
  auto generator = [&](size_t k) {
    if (!liouville) return QMatrix(cx_mat(cx(0.0, -1.0) * hamiltonian(k).to_dense()));
    std::vector<CollapseOperator> cops = c_ops;
    for (const auto& td : td_c_ops) {
      QMatrix l = td.base;
      for (const auto& [ctrl, op] : td.terms) {
        if (ctrl >= controls.amplitudes.size())
          throw DimensionError("prop: time-dependent collapse references unknown control index");
        l = l + amp(ctrl, k) * op;
      }
      cops.push_back({l});
    }
    return liouvillian(hamiltonian(k), cops);
  };

  const long n = liouville ? h0.rows() * h0.rows() : h0.rows();
  cx_mat total = cx_mat::Identity(n, n);
  QMatrix gen_k = generator(0);
  for (size_t k = 0; k < steps; ++k) {
    cx_mat step;
    if (options.engine == Engine::Rk45) {
      step = rk45_interval(gen_k.to_dense(), cx_mat::Identity(n, n), dt, options.rk_rel_tol);
      if (k + 1 < steps) gen_k = generator(k + 1);
    } else if (options.magnus) {
      QMatrix gen_next = generator(k + 1);
      QMatrix omega =
          (0.5 * dt) * (gen_k + gen_next) + (dt * dt / 12.0) * commutator(gen_next, gen_k);
      step = expm(omega).to_dense();
      gen_k = std::move(gen_next);
    } else {
      step = expm(dt * gen_k).to_dense();
      if (k + 1 < steps) gen_k = generator(k + 1);
    }
    total = step * total;
  }
  if (wallclock) wallclock->advance(static_cast<double>(steps) * dt);
  PropKind kind = liouville ? PropKind::Superoperator : PropKind::Unitary;
  return {kind, QMatrix(std::move(total)), static_cast<double>(steps) * dt};
}

QMatrix prop(const QMatrix& h0, const std::vector<QMatrix>& h_controls,
             const ControlSequence& controls, const QMatrix& state,
             const std::vector<CollapseOperator>& c_ops, const PropOptions& options,
             Wallclock* wallclock, const std::vector<TimeDependentCollapse>& td_c_ops) {
  bool is_ket = state.cols() == 1 && state.rows() == h0.rows();
  if (is_ket && (!c_ops.empty() || !td_c_ops.empty()))
    throw DomainError("prop: kets cannot undergo dissipative evolution; use a density matrix");
  return apply_superoperator(prop(h0, h_controls, controls, c_ops, options, wallclock, td_c_ops),
                             state);
}

std::pair<std::vector<QMatrix>, ControlSequence> square_pulse(
    const SpinSystem& sys, const std::string& spin_name, double amplitude, double frequency,
    double phase, double duration, double dt, const Wallclock* wallclock) {
  if (dt <= 0.0) throw ValueError("square_pulse: non-positive dt");
  if (amplitude < 0.0) throw ValueError("square_pulse: negative amplitude");
  double steps_real = duration / dt;
  long steps = std::lround(steps_real);
  if (steps < 1 || std::abs(steps_real - steps) > 1e-6)
    throw ValueError("square_pulse: dt does not divide the duration");
  std::vector<double> envelope(static_cast<size_t>(steps), amplitude);
  return arb_pulse(sys, spin_name, envelope, frequency, phase, dt, wallclock);
}

std::pair<std::vector<QMatrix>, ControlSequence> arb_pulse(
    const SpinSystem& sys, const std::string& spin_name, const std::vector<double>& envelope,
    double frequency, double phase, double dt, const Wallclock* wallclock) {
  if (dt <= 0.0) throw ValueError("arb_pulse: non-positive dt");
  if (envelope.empty()) throw ValueError("arb_pulse: empty envelope");
  double t0 = wallclock ? wallclock->elapsed : 0.0;
  ControlSequence seq;
  seq.dt = dt;
  seq.amplitudes.resize(2);
  for (size_t k = 0; k < envelope.size(); ++k) {
    // Carrier sampled at interval midpoints to halve the discretization bias.
    double t = t0 + static_cast<double>(k) * dt + 0.5 * dt;
    seq.amplitudes[0].push_back(envelope[k] * std::cos(frequency * t + phase));
    seq.amplitudes[1].push_back(envelope[k] * std::sin(frequency * t + phase));
  }
  std::vector<QMatrix> ops{sys.op(spin_name + ".x"), sys.op(spin_name + ".y")};
  return {std::move(ops), std::move(seq)};
}

}  // namespace spindle
