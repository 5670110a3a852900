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
#include "spindle/run_commands.hpp"

#include <cmath>

#include "spindle/fokker_planck.hpp"
#include "spindle/nv.hpp"
#include "spindle/scrp.hpp"
#include "spindle/signal.hpp"

namespace spindle::cli {

namespace {

// Resolves numeric parameters against per-command defaults and records every
// resolved value for the output metadata. Unknown override keys are errors.
class Params {
 public:
  explicit Params(const RunConfig& cfg) : cfg_(cfg) {
    meta_.emplace_back("version", version);
    meta_.emplace_back("command", cfg.command);
  }

  double get(const std::string& key, double fallback) {
    auto it = cfg_.params.find(key);
    double v = it != cfg_.params.end() ? it->second : fallback;
    if (it != cfg_.params.end()) consumed_.insert(key);
    meta_.emplace_back(key, format_double(v));
    return v;
  }

  double dt(double fallback) {
    double v = cfg_.dt > 0.0 ? cfg_.dt : fallback;
    meta_.emplace_back("dt", format_double(v));
    return v;
  }

  long steps(long fallback) {
    long v = cfg_.steps > 0 ? cfg_.steps : fallback;
    meta_.emplace_back("steps", std::to_string(v));
    return v;
  }

  void note(const std::string& key, double value) { meta_.emplace_back(key, format_double(value)); }

  std::vector<std::pair<std::string, std::string>> finish() {
    for (const auto& [key, value] : cfg_.params) {
      (void)value;
      if (!consumed_.count(key))
        throw ValueError("command '" + cfg_.command + "' has no parameter '" + key + "'");
    }
    meta_.emplace_back("seed", std::to_string(cfg_.seed));
    return meta_;
  }

 private:
  const RunConfig& cfg_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::set<std::string> consumed_;
};

Table spectrum_table(const std::vector<cx>& fid, double dt, bool remove_dc) {
  Spectrum spec = amplitude_spectrum(fid, dt, remove_dc);
  Table t;
  t.name = "spectrum";
  t.columns = {"f_hz", "amplitude"};
  for (size_t i = 0; i < spec.freq_hz.size(); ++i)
    t.rows.push_back({spec.freq_hz[i], spec.amplitude[i]});
  return t;
}

}  // namespace

std::vector<Table> run_deer(const RunConfig& cfg) {
  Params p(cfg);
  double r = p.get("r", 1.0);
  double theta = p.get("theta-deg", 60.0) * pi / 180.0;
  double gamma1 = p.get("gamma1", 1.0);
  double gamma2 = p.get("gamma2", 1.0);
  double dt = p.dt(16.0);
  long steps = p.steps(100);
  if (r <= 0.0) throw ValueError("deer: r must be positive");

  SpinSystem sys({spin("S", 0.5), spin("I", 0.5)});
  // secular dipolar coupling in reduced units (mu0 hbar / 4 pi -> 1)
  double omega_d = -gamma1 * gamma2 * (3.0 * std::cos(theta) * std::cos(theta) - 1.0) /
                   (4.0 * pi * r * r * r);
  p.note("omega_d", omega_d);
  QMatrix h0 = omega_d * sys.op("S.z") * sys.op("I.z");
  QMatrix psi0 = state(sys, "S[-0.5],I[-0.5]");

  Table t;
  t.name = "trace";
  t.columns = {"t", "sz"};
  for (long i = 0; i < steps; ++i) {
    double tau = static_cast<double>(i) * dt;
    QMatrix psi = rot(sys.op("S.x"), 0.5 * pi, psi0);
    psi = evol(h0, 0.5 * tau, psi);
    psi = rot(sys.op("S.y"), pi, psi);
    psi = rot(sys.op("I.y"), pi, psi);
    psi = evol(h0, 0.5 * tau, psi);
    psi = rot(sys.op("S.x"), -0.5 * pi, psi);
    t.rows.push_back({tau, expect(sys.op("S.z"), psi).real()});
  }
  t.meta = p.finish();
  return {t};
}

std::vector<Table> run_nv_pl(const RunConfig& cfg) {
  Params p(cfg);
  double temperature = p.get("temperature", 300.0);
  double beta = p.get("beta", 0.2);
  double dt = p.dt(2e-9);
  long steps = p.steps(250);

  nv::NVSystem nv_sys{};
  const SpinSystem& s = nv_sys.sys();
  auto [c_on, c_off] = nv_sys.transition_operators(temperature, beta);
  (void)c_off;
  Propagator u = evol(nv_sys.hamiltonian(), dt, c_on);

  QMatrix rho0 = ket2dm(state(s, "GS[0],S[0]"));
  QMatrix rho1 = ket2dm(state(s, "GS[0],S[1]"));
  const QMatrix& pl_op = s.op("ES.id");

  Table t;
  t.name = "trace";
  t.columns = {"t", "pl0", "pl1"};
  for (long i = 0; i < steps; ++i) {
    t.rows.push_back({static_cast<double>(i) * dt, expect(pl_op, rho0).real(),
                      expect(pl_op, rho1).real()});
    rho0 = apply_superoperator(u, rho0);
    rho1 = apply_superoperator(u, rho1);
  }
  t.meta = p.finish();
  return {t};
}

std::vector<Table> run_nv_weak(const RunConfig& cfg) {
  Params p(cfg);
  double b0 = p.get("b0", 0.05);
  double apara = p.get("apara", f2w(20e3));
  double aperp = p.get("aperp", f2w(2e3));
  long blocks = std::lround(p.get("blocks", 500));
  int pulses = static_cast<int>(std::lround(p.get("pulses", 16)));
  if (blocks < 2) throw ValueError("nv-weak: need at least two measurement blocks");

  nv::NVOptions opt;
  opt.optics = false;
  opt.further_spins = {spin("C", 0.5)};
  nv::NVSystem nv_sys(opt);
  const SpinSystem& s = nv_sys.sys();

  double frf = w2f(b0 * constants::gamma_C13);
  double twait = 0.125 / frf;
  double tau = 1.0 / frf / 2.0;
  double t_sample = pulses * tau + twait;
  double f_offset = std::round(t_sample * frf) / t_sample;
  p.note("frf", frf);
  p.note("tau", tau);
  p.note("twait", twait);
  p.note("t_sample", t_sample);
  p.note("f_offset", f_offset);
  p.note("f_alias", std::abs(frf - f_offset));

  // Hyperfine of the {m_S = 0, m_S = -1} manifold: no field in m_S = 0, so
  // the secular part couples through Sz_red - 1/2 (the spin-1 Sz truncated).
  QMatrix h0 = constants::gamma_C13 * b0 * s.op("C.z") +
               apara * ((s.op("S.z_red") - 0.5 * s.op("S.id")) * s.op("C.z")) +
               aperp * (s.op("S.x_red") * s.op("C.x"));

  QMatrix rho = rot(s.op("C.x"), 0.5 * pi, state(s, "S[0],C[0.5]"));

  Table trace;
  trace.name = "trace";
  trace.columns = {"block", "t", "signal"};
  std::vector<cx> store;
  for (long i = 0; i < blocks; ++i) {
    rho = rot(s.op("S.y_red"), 0.5 * pi, rho);
    rho = nv::xy8(h0, tau, s, rho, pulses);
    rho = rot(s.op("S.x_red"), 0.5 * pi, rho);
    auto meas = nv::meas_nv(rho, nv_sys);
    rho = meas.rho;
    store.emplace_back(meas.signal, 0.0);
    trace.rows.push_back({static_cast<double>(i), static_cast<double>(i) * t_sample,
                          meas.signal});
    rho = evol(h0, twait, rho);
  }
  trace.meta = p.finish();

  Table spec = spectrum_table(store, t_sample, /*remove_dc=*/true);
  spec.meta = trace.meta;
  return {trace, spec};
}

std::vector<Table> run_scrp_cwepr(const RunConfig& cfg) {
  Params p(cfg);
  double theta = p.get("theta-deg", 90.0) * pi / 180.0;
  double broadening = p.get("broadening", 0.5e-3);
  double f_mw = p.get("f-mw", 9.67e9);
  double dg = p.get("dg", 2e-3);
  double j_ex = p.get("j", f2w(5e6));
  double d_dip = p.get("d", f2w(3e6));
  double azz_a = p.get("azz-a", f2w(20e6));
  double azz_b = p.get("azz-b", f2w(12e6));
  double b_span = p.get("b-span", 15e-3);
  long grid_n = p.steps(300);

  SpinSystem sys({spin("A", 0.5), spin("B", 0.5), spin("HA", 0.5), spin("HB", 0.5)});
  sys.add_ghostspin("C", {"A", "B"});

  double ge = constants::gamma_e;
  double omega_mw = f2w(f_mw);
  double b_res = omega_mw / std::abs(ge);
  p.note("b_res", b_res);

  QMatrix h_field = ge * (sys.op("A.z") + (1.0 + dg) * sys.op("B.z"));
  QMatrix a_dot_b = sys.op("A.x") * sys.op("B.x") + sys.op("A.y") * sys.op("B.y") +
                    sys.op("A.z") * sys.op("B.z");
  QMatrix h_rest = -2.0 * j_ex * a_dot_b -
                   d_dip * (3.0 * sys.op("A.z") * sys.op("B.z") - a_dot_b) +
                   azz_a * sys.op("A.z") * sys.op("HA.z") +
                   azz_b * sys.op("B.z") * sys.op("HB.z");

  std::vector<double> grid;
  for (long i = 0; i < grid_n; ++i)
    grid.push_back(b_res - 0.5 * b_span + b_span * static_cast<double>(i) / (grid_n - 1));

  Table t;
  t.name = "trace";
  t.columns = {"b_tesla"};
  t.rows.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) t.rows[i].push_back(grid[i]);

  for (double alpha_deg : {0.0, 20.0, 90.0}) {
    QMatrix rho0 = scrp::initial_state(sys, "A", "B", alpha_deg * pi / 180.0, 0.0, 1.0, theta, 0.0);
    auto sweep = scrp::cw_epr_fieldsweep(sys, {"A", "B"}, rho0, h_field, h_rest, omega_mw,
                                         broadening, grid);
    t.columns.push_back("intensity_alpha" + std::to_string(static_cast<int>(alpha_deg)));
    for (size_t i = 0; i < grid.size(); ++i) t.rows[i].push_back(sweep.intensity[i]);
  }
  t.meta = p.finish();
  return {t};
}

std::vector<Table> run_scrp_mary(const RunConfig& cfg) {
  Params p(cfg);
  double b_off = p.get("b-off", 0.5e-3);
  double b_on = p.get("b-on", 100e-3);
  double kfl = p.get("kfl", 1e8);
  double kcs = p.get("kcs", 1e9);
  double kbcr = p.get("kbcr", 5e7);
  double kcrs = p.get("kcrs", 5e6);
  double kcrt = p.get("kcrt", 1e7);
  double kcrtt = p.get("kcrtt", 1e8);
  double beta = p.get("beta", 1.0);
  double a_hfi = p.get("a-hfi", f2w(10e6));
  // exchange coupling placing the 2J resonance at b_on
  double j_ex = p.get("j", std::abs(constants::gamma_e) * b_on / 2.0);
  long pulse_steps = std::lround(p.get("pulse-steps", 50));
  double dt = p.dt(2e-9);
  long steps = p.steps(500);

  SpinSystem sys(SpaceLayout::sum(
      {SpaceLayout::leaf(level("GS")), SpaceLayout::leaf(level("S1")),
       SpaceLayout::tensor({SpaceLayout::leaf(spin("A", 0.5)), SpaceLayout::leaf(spin("B", 0.5)),
                            SpaceLayout::leaf(spin("H", 0.5))}),
       SpaceLayout::leaf(level("T1"))}));
  sys.add_ghostspin("C", {"A", "B"});

  RateTable rates{{"S1->GS", kfl},        {"S1->C_1[0]", kcs},    {"S1<-C_1[0]", kbcr},
                  {"C_1[0] -> GS", kcrs}, {"C_3[-1]-> T1", kcrt}, {"C_3[0] -> T1", kcrt},
                  {"C_3[1] -> T1", kcrt}, {"T1 -> GS", kcrtt}};
  RateTable rates_laser{{"GS->S1", beta * kfl}};

  auto h_of_b = [&](double b) {
    QMatrix a_dot_b = sys.op("A.x") * sys.op("B.x") + sys.op("A.y") * sys.op("B.y") +
                      sys.op("A.z") * sys.op("B.z");
    QMatrix h_hfi = a_hfi * (sys.op("A.x") * sys.op("H.x") + sys.op("A.y") * sys.op("H.y") +
                             sys.op("A.z") * sys.op("H.z"));
    return -2.0 * j_ex * a_dot_b + constants::gamma_e * b * (sys.op("A.z") + sys.op("B.z")) +
           h_hfi;
  };

  auto result =
      scrp::mary_trace(sys, rates, rates_laser, h_of_b, {b_off, b_on}, 0, pulse_steps, dt, steps);

  Table t;
  t.name = "trace";
  t.columns = {"t", "pl_off_resonance", "pl_on_resonance"};
  for (long i = 0; i < steps; ++i)
    t.rows.push_back({result.time[i], result.luminescence[0][i], result.luminescence[1][i]});
  t.meta = p.finish();
  return {t};
}

namespace {

// Shared ssNMR pair: 1H detected, 19F coupled, r in meters. Returns the FID
// of <Ix + i Iy> sampled every dt under the given per-grid-point secular
// dipolar Hamiltonian, plus the final global trace for drift checks.
struct PairFid {
  std::vector<cx> fid;
  double final_trace;
};

PairFid pair_fid(const SpinSystem& sys, const HamiltonianFun& h_fun,
                 const StochasticParameterSet& params, double dt, long steps) {
  QMatrix rho0 = kron(pol_spin(1.0), pol_spin(0.0));
  QMatrix rho = rot(sys.op("I.x"), 0.5 * pi, rho0);
  FPState state = dm2fp(rho, params);
  FPPropagator u = stochastic_evol(h_fun, params, dt, FpSpace::Liouville);
  QMatrix detect = sys.op("I.x") + ci * sys.op("I.y");
  PairFid out;
  out.fid.reserve(steps);
  for (long k = 0; k < steps; ++k) {
    out.fid.push_back(fp_expect(detect, state));
    state = apply(u, state);
  }
  out.final_trace = fp2dm(state).trace().real();
  return out;
}

void apodize(std::vector<cx>& fid, double dt, double lb_tau) {
  for (size_t k = 0; k < fid.size(); ++k) fid[k] *= std::exp(-static_cast<double>(k) * dt / lb_tau);
}

}  // namespace

std::vector<Table> run_pake(const RunConfig& cfg) {
  Params p(cfg);
  double r = p.get("r", 3e-10);
  long grid_n = std::lround(p.get("grid", 100));
  double dt = p.dt(5e-5);
  long steps = p.steps(512);
  if (grid_n < 2) throw ValueError("pake: need at least two orientations");

  SpinSystem sys({spin("I", 0.5), spin("J", 0.5)});
  double d_rad = constants::mu_0 * constants::gamma_H1 * constants::gamma_F19 * constants::hbar /
                 (4.0 * pi * r * r * r);
  p.note("d_rad_per_s", d_rad);
  p.note("d_hz", d_rad / (2.0 * pi));

  StochasticParameterSet params;
  for (long i = 0; i < grid_n; ++i) {
    double theta = pi * static_cast<double>(i) / (grid_n - 1);
    params["theta"].values.push_back(theta);
  }
  std::vector<double> weights;
  for (double theta : params["theta"].values) weights.push_back(std::sin(theta));
  params["theta"].weights = weights;

  auto h_fun = [&](const std::vector<double>& v) {
    return dipolar_coupling(sys, "I", "J", constants::gamma_H1, constants::gamma_F19,
                            {r, v[0], 0.0}, PositionMode::Spherical, DipolarApprox::Secular);
  };

  PairFid result = pair_fid(sys, h_fun, params, dt, steps);
  p.note("final_trace", result.final_trace);
  apodize(result.fid, dt, steps * dt / 3.0);
  Table spec = spectrum_table(result.fid, dt, /*remove_dc=*/false);
  spec.meta = p.finish();
  return {spec};
}

std::vector<Table> run_mas(const RunConfig& cfg) {
  Params p(cfg);
  double r = p.get("r", 3e-10);
  double rotor_khz = p.get("rotor-khz", 100.0);
  long grid_n = std::lround(p.get("grid", 100));
  double rotor_period = 1.0 / (rotor_khz * 1e3);
  // rotor-synchronized sampling: one sample per full rotor turn
  double dt = p.dt(rotor_period);
  long steps = p.steps(512);
  if (grid_n < 2) throw ValueError("mas: need at least two rotor phases");

  SpinSystem sys({spin("I", 0.5), spin("J", 0.5)});
  double omega_r = f2w(rotor_khz * 1e3);
  p.note("omega_r", omega_r);

  StochasticParameterSet params;
  for (long i = 0; i < grid_n; ++i)
    params["phi"].values.push_back(2.0 * pi * static_cast<double>(i) / grid_n);
  params["phi"].dynamics = {{1, omega_r}};

  Eigen::Vector3d axis(constants::mas_axis[0], constants::mas_axis[1], constants::mas_axis[2]);
  Eigen::Vector3d m0(0.0, 0.0, r);  // internuclear vector along the field at phase 0
  auto h_fun = [&](const std::vector<double>& v) {
    Eigen::Vector3d rotated = Eigen::AngleAxisd(v[0], axis) * m0;
    return dipolar_coupling(sys, "I", "J", constants::gamma_H1, constants::gamma_F19,
                            {rotated(0), rotated(1), rotated(2)}, PositionMode::Cartesian,
                            DipolarApprox::Secular);
  };

  PairFid result = pair_fid(sys, h_fun, params, dt, steps);
  p.note("final_trace", result.final_trace);
  apodize(result.fid, dt, steps * dt / 3.0);
  Table spec = spectrum_table(result.fid, dt, /*remove_dc=*/false);
  spec.meta = p.finish();
  return {spec};
}

std::vector<Table> run_command(const RunConfig& cfg) {
  if (cfg.command == "deer") return run_deer(cfg);
  if (cfg.command == "nv-pl") return run_nv_pl(cfg);
  if (cfg.command == "nv-weak") return run_nv_weak(cfg);
  if (cfg.command == "scrp-cwepr") return run_scrp_cwepr(cfg);
  if (cfg.command == "scrp-mary") return run_scrp_mary(cfg);
  if (cfg.command == "pake") return run_pake(cfg);
  if (cfg.command == "mas") return run_mas(cfg);
  throw ValueError("unknown command '" + cfg.command + "'");
}

}  // namespace spindle::cli
