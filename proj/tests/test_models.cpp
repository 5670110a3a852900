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
#include <doctest.h>

#include "oracles.hpp"
#include "spindle/constants.hpp"
#include "spindle/nv.hpp"
#include "spindle/scrp.hpp"

using namespace spindle;

TEST_CASE("nv system layouts") {
  nv::NVSystem optics{};
  CHECK(optics.sys().dim() == 7);

  nv::NVOptions sensing;
  sensing.optics = false;
  sensing.further_spins = {spin("C", 0.5)};
  nv::NVSystem weak(sensing);
  CHECK(weak.sys().dim() == 4);
  CHECK(weak.spin_half());
  CHECK(approx_eq(weak.sys().op("S.x_red"), weak.sys().op("S.x"), 0.0));

  nv::NVOptions spin1;
  spin1.optics = false;
  spin1.full_spin = true;
  nv::NVSystem bare(spin1);
  CHECK(bare.sys().dim() == 3);
  // reduced operators act on the {0, -1} subspace
  QMatrix zr = bare.sys().op("S.z_red");
  CHECK(zr(1, 1) == cx(0.5, 0.0));
  CHECK(zr(2, 2) == cx(-0.5, 0.0));
  CHECK(zr(0, 0) == cx(0.0, 0.0));

  nv::NVOptions with_n;
  with_n.nitrogen = true;
  CHECK_THROWS_AS(nv::NVSystem{with_n}, UnsupportedError);
}

TEST_CASE("nv transition operators and optical polarization") {
  nv::NVSystem nv_sys{};
  const SpinSystem& s = nv_sys.sys();

  auto [on, off] = nv_sys.transition_operators(300.0, 0.2);
  CHECK(on.size() == off.size() + 1);

  auto [on0, off0] = nv_sys.transition_operators(300.0, 0.0);
  CHECK(on0.size() == off0.size());

  CHECK_THROWS_AS(nv_sys.transition_operators(10.0, 0.2), UnsupportedError);
  CHECK_THROWS_AS(nv_sys.transition_operators(300.0, 1.5), ValueError);

  // all population dynamics conserve the trace
  QMatrix rho = ket2dm(state(s, "GS[0],S[0]"));
  QMatrix h = nv_sys.hamiltonian();
  Propagator u = evol(h, 5e-9, on);
  for (int i = 0; i < 200; ++i) rho = apply_superoperator(u, rho);
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-10);

  // optical cycling polarizes the ground state into m_S = 0
  double p_ms0 = expect(s.op("GS.id") * s.op("S.p[0]"), rho).real();
  double p_gs = expect(s.op("GS.id"), rho).real();
  CHECK(p_ms0 / p_gs > 1.0 / 3.0);

  // PL transient: m_S = 0 fluoresces brighter than m_S = +-1 and the
  // contrast shrinks when the ISC selectivity is removed
  auto pl_curves = [&](const nv::NVRates& rates) {
    nv::NVOptions opt;
    opt.rates = rates;
    nv::NVSystem sys2(opt);
    auto [c_on, c_off] = sys2.transition_operators(300.0, 0.2);
    (void)c_off;
    QMatrix rho0 = ket2dm(state(sys2.sys(), "GS[0],S[0]"));
    QMatrix rho1 = ket2dm(state(sys2.sys(), "GS[0],S[1]"));
    Propagator step = evol(sys2.hamiltonian(), 2e-9, c_on);
    double contrast = 0.0;
    bool ordered = true;
    for (int i = 0; i < 150; ++i) {
      rho0 = apply_superoperator(step, rho0);
      rho1 = apply_superoperator(step, rho1);
      double pl0 = expect(sys2.sys().op("ES.id"), rho0).real();
      double pl1 = expect(sys2.sys().op("ES.id"), rho1).real();
      contrast += (pl0 - pl1) * 2e-9;
      if (pl0 < pl1) ordered = false;
    }
    return std::make_pair(contrast, ordered);
  };
  nv::NVRates defaults{};
  auto [c_default, ordered_default] = pl_curves(defaults);
  CHECK(ordered_default);
  CHECK(c_default > 0.0);
  nv::NVRates flat = defaults;
  flat.k_isc_ms1 = 2e7;  // closer to k_isc_ms0
  auto [c_flat, ordered_flat] = pl_curves(flat);
  (void)ordered_flat;
  CHECK(c_flat < c_default);
}

TEST_CASE("xy8 refocuses static NV detunings") {
  nv::NVOptions opt;
  opt.optics = false;
  nv::NVSystem nv_sys(opt);
  const SpinSystem& s = nv_sys.sys();

  // H0 = 0: the 8k pi pulses compose to the identity up to a global phase
  QMatrix psi0 = rot(s.op("S.y_red"), 0.5 * pi, state(s, "S[0]"));
  QMatrix out = nv::xy8(QMatrix::zero(2, 2), 1e-6, s, psi0, 8);
  cx overlap = (psi0.adjoint() * out)(0, 0);
  CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-12);

  // a pure Sz offset is refocused: the coherence phase returns to zero
  QMatrix h0 = 2.0 * pi * 3e5 * s.op("S.z");
  QMatrix rho = ket2dm(psi0);
  QMatrix echo = nv::xy8(h0, 1e-6, s, rho, 8);
  // up to the net pulse rotation, <Sx> is restored
  CHECK(std::abs(expect(s.op("S.x"), echo).real() - expect(s.op("S.x"), rho).real()) < 1e-10);

  CHECK_THROWS_AS(nv::xy8(h0, 1e-6, s, rho, 7), ValueError);
  CHECK_THROWS_AS(nv::xy8(h0, -1e-6, s, rho, 8), ValueError);
}

TEST_CASE("meas_nv reads out and reinitializes") {
  nv::NVOptions opt;
  opt.optics = false;
  opt.further_spins = {spin("C", 0.5)};
  nv::NVSystem nv_sys(opt);
  const SpinSystem& s = nv_sys.sys();

  oracles::Rng rng(121);
  QMatrix rho_c(rng.density(2));
  cx_mat up = cx_mat::Zero(2, 2), down = cx_mat::Zero(2, 2);
  up(0, 0) = 1.0;
  down(1, 1) = 1.0;

  auto m0 = nv::meas_nv(kron(QMatrix(up), rho_c), nv_sys);
  CHECK(m0.signal == doctest::Approx(1.0));
  CHECK(approx_eq(m0.rho, kron(QMatrix(up), rho_c), 1e-12));  // nuclear state untouched

  auto m1 = nv::meas_nv(kron(QMatrix(down), rho_c), nv_sys);
  CHECK(m1.signal == doctest::Approx(0.0));
  // NV reset to m_S = 0
  CHECK(expect(s.op("S.p[0.5]"), m1.rho).real() == doctest::Approx(1.0));

  // repeated measurement without evolution is idempotent in the signal
  auto m2 = nv::meas_nv(m1.rho, nv_sys);
  CHECK(m2.signal == doctest::Approx(1.0));
  CHECK(m1.signal >= 0.0);
  CHECK(m1.signal <= 1.0);
}

TEST_CASE("scrp initial state parametrization") {
  SpinSystem sys({spin("A", 0.5), spin("B", 0.5)});
  sys.add_ghostspin("C", {"A", "B"});

  // alpha = 0: pure singlet, rotation invariant
  QMatrix rho_s = scrp::initial_state(sys, "A", "B", 0.0, 0.0, 1.0, 0.0, 0.0);
  CHECK(approx_eq(rho_s, scrp::initial_state(sys, "A", "B", 0.0, 0.3, 1.0, 1.1, 0.7), 1e-12));
  CHECK(expect(sys.op("C_1.p[0]"), rho_s).real() == doctest::Approx(1.0).epsilon(1e-12));

  // alpha = pi/2: pure T0 at theta = 0
  QMatrix rho_t = scrp::initial_state(sys, "A", "B", 0.5 * pi, 0.0, 1.0, 0.0, 0.0);
  CHECK(expect(sys.op("C_3.p[0]"), rho_t).real() == doctest::Approx(1.0).epsilon(1e-12));

  // singlet population follows cos^2(alpha) at theta = 0
  for (double alpha : {0.0, 0.2, 0.7, 1.1, 0.5 * pi}) {
    QMatrix rho = scrp::initial_state(sys, "A", "B", alpha, 0.4, 1.0, 0.0, 0.0);
    CHECK(std::abs(expect(sys.op("C_1.p[0]"), rho).real() -
                   std::cos(alpha) * std::cos(alpha)) < 1e-12);
  }

  // valid density matrix across the parameter grid
  for (double alpha : {0.0, 0.8, 1.6, 2.4, 3.1})
    for (double beta : {0.0, 1.6, 3.1, 4.7, 6.2})
      for (double theta : {0.0, 0.8, 1.6, 2.4, 3.1})
        for (double purity : {0.0, 0.3, 0.6, 0.9, 1.0}) {
          QMatrix rho = scrp::initial_state(sys, "A", "B", alpha, beta, purity, theta, 0.9);
          CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
          CHECK(hermiticity_defect(rho) < 1e-12);
          CHECK(eig_hermitian(rho).values(0) > -1e-10);
        }

  // companions are filled maximally mixed
  SpinSystem with_nuc({spin("A", 0.5), spin("B", 0.5), spin("H", 0.5)});
  QMatrix rho_n = scrp::initial_state(with_nuc, "A", "B", 0.0, 0.0, 1.0, 0.0, 0.0);
  auto [h_red, rem] = with_nuc.subsystem(rho_n, {"H"});
  CHECK(!rem.has_value());
  CHECK(approx_eq(h_red, 0.5 * QMatrix::identity(2), 1e-12));

  SpinSystem bad({spin("A", 1.0), spin("B", 0.5)});
  CHECK_THROWS_AS(scrp::initial_state(bad, "A", "B", 0.0, 0.0, 1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("cw-EPR of a free electron resonates at omega/gamma") {
  SpinSystem sys({spin("A", 0.5)});
  QMatrix h_field = std::abs(constants::gamma_e) * sys.op("A.z");
  QMatrix h_rest = QMatrix::zero(2, 2);
  double omega_mw = f2w(9.67e9);
  double b_res = omega_mw / std::abs(constants::gamma_e);

  std::vector<double> grid;
  for (int i = 0; i < 201; ++i) grid.push_back(b_res * (0.97 + 0.03 * i / 100.0));
  QMatrix rho0 = thermal_state(h_field * 0.345, 1.0);  // strongly polarized
  auto sweep = scrp::cw_epr_fieldsweep(sys, {"A"}, rho0, h_field, h_rest, omega_mw, 0.5e-3, grid);

  // the derivative line crosses zero at the resonance field
  size_t best = 0;
  double best_gap = 1e9;
  for (size_t i = 1; i < grid.size(); ++i) {
    if (sweep.intensity[i - 1] * sweep.intensity[i] <= 0.0 &&
        std::abs(sweep.intensity[i - 1]) > 0.1) {
      double mid = 0.5 * (grid[i - 1] + grid[i]);
      if (std::abs(mid - b_res) < best_gap) {
        best_gap = std::abs(mid - b_res);
        best = i;
      }
    }
  }
  REQUIRE(best > 0);
  CHECK(best_gap < 2.0 * (grid[1] - grid[0]));

  // thermal state: absorption has a single sign (cumulative integral does
  // not change sign beyond noise)
  double cumulative = 0.0, min_c = 0.0, max_c = 0.0;
  for (double v : sweep.intensity) {
    cumulative += v;
    min_c = std::min(min_c, cumulative);
    max_c = std::max(max_c, cumulative);
  }
  CHECK((min_c == 0.0 || max_c == 0.0 || std::abs(min_c) < 0.02 * std::abs(max_c) ||
         std::abs(max_c) < 0.02 * std::abs(min_c)));

  CHECK_THROWS_AS(
      scrp::cw_epr_fieldsweep(sys, {"A"}, rho0, h_field, h_rest, omega_mw, 0.5e-3, {}),
      ValueError);
}

TEST_CASE("cw-EPR distinguishes singlet from partially polarized initial states") {
  SpinSystem sys({spin("A", 0.5), spin("B", 0.5)});
  sys.add_ghostspin("C", {"A", "B"});

  double ge = constants::gamma_e;
  QMatrix h_field = ge * (sys.op("A.z") + 1.002 * sys.op("B.z"));
  QMatrix h_rest = 2.0 * pi * 5e6 *
                       (sys.op("A.x") * sys.op("B.x") + sys.op("A.y") * sys.op("B.y") +
                        sys.op("A.z") * sys.op("B.z")) -
                   2.0 * pi * 3e6 * (3.0 * sys.op("A.z") * sys.op("B.z") -
                                     (sys.op("A.x") * sys.op("B.x") +
                                      sys.op("A.y") * sys.op("B.y") +
                                      sys.op("A.z") * sys.op("B.z")));
  double omega_mw = f2w(9.67e9);
  double b_res = omega_mw / std::abs(ge);
  std::vector<double> grid;
  for (int i = 0; i < 150; ++i) grid.push_back(b_res + (i - 75) * 4e-5);

  auto sweep_for = [&](double alpha) {
    QMatrix rho0 = scrp::initial_state(sys, "A", "B", alpha, 0.0, 1.0, 0.5 * pi, 0.0);
    return scrp::cw_epr_fieldsweep(sys, {"A", "B"}, rho0, h_field, h_rest, omega_mw, 0.3e-3,
                                   grid);
  };
  auto s0 = sweep_for(0.0);
  auto s20 = sweep_for(20.0 * pi / 180.0);
  double l2 = 0.0, norm = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    l2 += (s0.intensity[i] - s20.intensity[i]) * (s0.intensity[i] - s20.intensity[i]);
    norm += s0.intensity[i] * s0.intensity[i];
  }
  CHECK(std::sqrt(l2 / norm) > 0.05);

  // entangled singlet initial state produces emissive and absorptive lines
  double min_v = 0.0, max_v = 0.0;
  for (double v : s0.intensity) {
    min_v = std::min(min_v, v);
    max_v = std::max(max_v, v);
  }
  CHECK(min_v < -0.1);
  CHECK(max_v > 0.1);
}

TEST_CASE("mary trace: fluorescence network") {
  SpinSystem sys(SpaceLayout::sum(
      {SpaceLayout::leaf(level("GS")), SpaceLayout::leaf(level("S1")),
       SpaceLayout::tensor({SpaceLayout::leaf(spin("A", 0.5)), SpaceLayout::leaf(spin("B", 0.5)),
                            SpaceLayout::leaf(spin("H", 0.5))}),
       SpaceLayout::leaf(level("T1"))}));
  sys.add_ghostspin("C", {"A", "B"});

  double kfl = 1e8, kcs = 1e9, kbcr = 5e7, kcrs = 5e6, kcrt = 1e7, kcrtt = 1e8;
  double j_ex = std::abs(constants::gamma_e) * 100e-3 / 2.0;
  double a_hfi = 2.0 * pi * 10e6;

  RateTable rates{{"S1->GS", kfl},         {"S1->C_1[0]", kcs},  {"S1<-C_1[0]", kbcr},
                  {"C_1[0] -> GS", kcrs},  {"C_3[-1]-> T1", kcrt}, {"C_3[0] -> T1", kcrt},
                  {"C_3[1] -> T1", kcrt},  {"T1 -> GS", kcrtt}};
  RateTable rates_laser{{"GS->S1", 1.0 * kfl}};

  auto h_of_b = [&](double b) {
    QMatrix hj = -2.0 * j_ex *
                 (sys.op("A.x") * sys.op("B.x") + sys.op("A.y") * sys.op("B.y") +
                  sys.op("A.z") * sys.op("B.z"));
    QMatrix hz = constants::gamma_e * b * (sys.op("A.z") + sys.op("B.z"));
    QMatrix hhfi = a_hfi * (sys.op("A.x") * sys.op("H.x") + sys.op("A.y") * sys.op("H.y") +
                            sys.op("A.z") * sys.op("H.z"));
    return hj + hz + hhfi;
  };

  long steps = 500, pulse_start = 0, pulse_stop = 50;
  double dt = 2e-9;
  auto result = scrp::mary_trace(sys, rates, rates_laser, h_of_b, {0.5e-3, 100e-3}, pulse_start,
                                 pulse_stop, dt, steps);
  REQUIRE(result.luminescence.size() == 2);

  // traces are physical
  for (const auto& trace : result.luminescence)
    for (double v : trace) {
      CHECK(v >= -1e-12);
      CHECK(v <= 1.0 + 1e-12);
    }

  // post-pulse tail: on the 2J resonance (100 mT) the singlet drains into
  // the triplet channel and the delayed fluorescence dies faster
  double tail_off = 0.0, tail_on = 0.0;
  for (long i = pulse_stop + 25; i < steps; ++i) {
    tail_off += result.luminescence[0][i];
    tail_on += result.luminescence[1][i];
  }
  CHECK(tail_on < tail_off);

  // kcs = 0 decouples the radical pair: no field effect at all
  RateTable rates_nocs = rates;
  rates_nocs[1].second = 0.0;
  rates_nocs[2].second = 0.0;
  auto flat = scrp::mary_trace(sys, rates_nocs, rates_laser, h_of_b, {0.5e-3, 100e-3}, pulse_start,
                               pulse_stop, dt, steps);
  for (long i = 0; i < steps; ++i)
    CHECK(std::abs(flat.luminescence[0][i] - flat.luminescence[1][i]) < 1e-10);
}
