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
#include "spindle/fokker_planck.hpp"

using namespace spindle;

TEST_CASE("fourier differentiation is spectrally exact on band-limited input") {
  const int n = 32;
  cx_mat d1 = fourier_diff_matrix(n, 1).to_dense();
  cx_mat d2 = fourier_diff_matrix(n, 2).to_dense();
  cx_vec f(n), df(n), ddf(n);
  for (int j = 0; j < n; ++j) {
    double z = 2.0 * pi * j / n;
    f(j) = std::sin(z);
    df(j) = std::cos(z);
    ddf(j) = -std::sin(z);
  }
  CHECK(((d1 * f) - df).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(((d2 * f) - ddf).cwiseAbs().maxCoeff() < 1e-10);

  // constants are annihilated: row sums vanish
  cx_vec ones = cx_vec::Ones(n);
  CHECK((d1 * ones).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((d2 * ones).cwiseAbs().maxCoeff() < 1e-12);

  // matrices are real
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) CHECK(std::abs(d1(i, j).imag()) < 1e-12);

  CHECK_THROWS_AS(fourier_diff_matrix(8, 3), ValueError);
  CHECK_THROWS_AS(fourier_diff_matrix(1, 1), ValueError);
}

TEST_CASE("two-point grids: first-order spectral matrix vanishes, second order exchanges") {
  // On a two-point periodic grid the only oscillating mode is the Nyquist
  // mode, which has no real first-derivative representation, so D1 is
  // identically zero; diffusive exchange (order 2) remains.
  CHECK(fourier_diff_matrix(2, 1).max_abs() == 0.0);
  cx_mat d2 = fourier_diff_matrix(2, 2).to_dense();
  CHECK(d2(0, 0).real() == doctest::Approx(-0.5));
  CHECK(d2(0, 1).real() == doctest::Approx(0.5));

  // hand oracle: population difference decays at the exchange frequency
  StochasticParameterSet params;
  params["zeta"].values = {0.0, pi};
  double omega = 3.0;
  params["zeta"].dynamics = {{2, omega}};
  auto h_fun = [](const std::vector<double>&) { return QMatrix::zero(2, 2); };
  double t = 0.37;
  FPPropagator u = stochastic_evol(h_fun, params, t, FpSpace::Liouville);

  FPState s = dm2fp(QMatrix::identity(2).unit(), params);
  // move all weight to the first cell
  s.data.segment(4, 4).setZero();
  s.data.segment(0, 4) *= 2.0;
  FPState evolved = apply(u, s);
  auto block_trace = [&](const FPState& st, long g) {
    return (st.data(g * 4 + 0) + st.data(g * 4 + 3)).real();
  };
  double diff0 = block_trace(s, 0) - block_trace(s, 1);
  double diff_t = block_trace(evolved, 0) - block_trace(evolved, 1);
  CHECK(diff_t == doctest::Approx(diff0 * std::exp(-omega * t)).epsilon(1e-10));
  // global trace conserved
  CHECK(block_trace(evolved, 0) + block_trace(evolved, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("linear exchange on a four-point grid against an independent integrator") {
  // H = 0, so block traces evolve by the exchange generator alone.
  const int n = 4;
  StochasticParameterSet params;
  for (int j = 0; j < n; ++j) params["phi"].values.push_back(2.0 * pi * j / n);
  double omega = 2.0;
  params["phi"].dynamics = {{1, omega}};
  auto h_fun = [](const std::vector<double>&) { return QMatrix::zero(2, 2); };

  double t = 0.29;
  FPPropagator u = stochastic_evol(h_fun, params, t, FpSpace::Liouville);
  FPState s = dm2fp(QMatrix::identity(2).unit(), params);
  // non-uniform initial distribution over the grid cells
  Eigen::Vector4d w(0.7, 0.1, 0.15, 0.05);
  for (int g = 0; g < n; ++g) s.data.segment(g * 4, 4) *= 4.0 * w(g);
  FPState evolved = apply(u, s);

  // oracle: integrate dw/dt = omega D1 w with the independent RK45
  cx_mat d1 = fourier_diff_matrix(n, 1).to_dense();
  oracles::Mat w0 = w.cast<oracles::cxd>();
  oracles::Mat w_t = oracles::rk45(
      [&](double, const oracles::Mat& y) { return oracles::Mat(omega * d1 * y); }, w0, 0.0, t);

  double total = 0.0;
  for (int g = 0; g < n; ++g) {
    double tr = (evolved.data(g * 4 + 0) + evolved.data(g * 4 + 3)).real();
    CHECK(tr == doctest::Approx(w_t(g, 0).real()).epsilon(1e-8));
    total += tr;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single grid point reduces to the plain Liouvillian") {
  StochasticParameterSet params;
  params["theta"].values = {0.4};
  oracles::Rng rng(101);
  QMatrix h(rng.hermitian(2));
  std::vector<CollapseOperator> c_ops{{QMatrix(cx_mat(0.3 * rng.matrix(2, 2)))}};
  auto h_fun = [&](const std::vector<double>&) { return h; };
  QMatrix f = fp_superoperator(h_fun, params, FpSpace::Liouville, c_ops);
  CHECK(approx_eq(f, liouvillian(h, c_ops), 1e-13));
}

TEST_CASE("zero exchange frequency equals omitting dynamics") {
  StochasticParameterSet with, without;
  for (int j = 0; j < 6; ++j) {
    with["x"].values.push_back(j * pi / 3.0);
    without["x"].values.push_back(j * pi / 3.0);
  }
  with["x"].dynamics = {{1, 0.0}};
  auto h_fun = [](const std::vector<double>& v) {
    cx_mat h = cx_mat::Zero(2, 2);
    h(0, 0) = std::cos(v[0]);
    h(1, 1) = -std::cos(v[0]);
    return QMatrix(h);
  };
  CHECK(approx_eq(fp_superoperator(h_fun, with, FpSpace::Liouville),
                  fp_superoperator(h_fun, without, FpSpace::Liouville), 0.0));
}

TEST_CASE("static ensembles decouple into independent evolutions") {
  SpinSystem sys({spin("S", 0.5)});
  StochasticParameterSet params;
  params["theta"].values = {0.3, 1.2};
  params["theta"].weights = std::vector<double>{0.25, 0.75};
  auto h_fun = [&](const std::vector<double>& v) {
    return QMatrix(2.0 * pi * 1e6 * std::cos(v[0]) * sys.op("S.z"));
  };
  double dt = 1e-7;
  FPPropagator u = stochastic_evol(h_fun, params, dt, FpSpace::Liouville);
  CHECK(u.blockwise);

  QMatrix rho0 = rot(sys.op("S.y"), 0.5 * pi, ket2dm(state(sys, "S[0.5]")));
  FPState s = dm2fp(rho0, params);
  for (int step = 0; step < 5; ++step) s = apply(u, s);

  // block g equals weight * independently evolved state
  for (int g = 0; g < 2; ++g) {
    QMatrix block = vec2dm(QMatrix(cx_mat(s.data.segment(g * 4, 4))));
    QMatrix ref = evol(h_fun({params.at("theta").values[g]}), 5 * dt, rho0);
    double w = g == 0 ? 0.25 : 0.75;
    CHECK(approx_eq(block, w * ref, 1e-10));
  }

  // weighted static expectation identity
  cx direct = fp_expect(sys.op("S.x"), s);
  cx by_hand = 0.25 * expect(sys.op("S.x"), evol(h_fun({0.3}), 5 * dt, rho0)) +
               0.75 * expect(sys.op("S.x"), evol(h_fun({1.2}), 5 * dt, rho0));
  CHECK(std::abs(direct - by_hand) < 1e-10);
}

TEST_CASE("dm2fp and fp2dm round trip and block structure") {
  StochasticParameterSet params;
  params["x"].values = {0.0, 1.0, 2.0, 3.0};
  oracles::Rng rng(111);
  QMatrix rho(rng.density(3));
  FPState s = dm2fp(rho, params);
  CHECK(s.blocks() == 4);
  CHECK(approx_eq(fp2dm(s), rho, 1e-12));
  // uniform weights: each block is rho / N
  QMatrix block0 = vec2dm(QMatrix(cx_mat(s.data.segment(0, 9))));
  CHECK(approx_eq(block0, 0.25 * rho, 1e-14));

  CHECK(std::abs(fp_expect(QMatrix::identity(3), s) - cx(1.0, 0.0)) < 1e-13);
  QMatrix op(rng.hermitian(3));
  CHECK(std::abs(fp_expect(op, s) - expect(op, fp2dm(s))) < 1e-12);
}

TEST_CASE("hilbert-space Fokker-Planck evolves kets") {
  SpinSystem sys({spin("S", 0.5)});
  StochasticParameterSet params;
  params["theta"].values = {0.2, 0.9, 1.7};
  auto h_fun = [&](const std::vector<double>& v) {
    return QMatrix(2.0 * pi * 1e6 * std::cos(v[0]) * sys.op("S.z"));
  };
  QMatrix psi0 = rot(sys.op("S.y"), 0.5 * pi, state(sys, "S[0.5]"));
  FPState s = ket2fp(psi0, params);
  double dt = 3e-8;
  FPPropagator u = stochastic_evol(h_fun, params, dt, FpSpace::Hilbert);
  for (int step = 0; step < 4; ++step) s = apply(u, s);
  cx direct = fp_expect(sys.op("S.x"), s);
  cx by_hand = 0.0;
  for (double th : params.at("theta").values)
    by_hand += expect(sys.op("S.x"), evol(h_fun({th}), 4 * dt, psi0)) / 3.0;
  CHECK(std::abs(direct - by_hand) < 1e-10);
  CHECK(std::abs(fp2dm(s).trace() - cx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("global trace is conserved under exchange dynamics over many steps") {
  SpinSystem sys({spin("S", 0.5)});
  StochasticParameterSet params;
  const int n = 8;
  for (int j = 0; j < n; ++j) params["phi"].values.push_back(2.0 * pi * j / n);
  params["phi"].dynamics = {{1, 2.0 * pi * 1e5}, {2, 2.0 * pi * 1e3}};
  auto h_fun = [&](const std::vector<double>& v) {
    return QMatrix(2.0 * pi * 2e4 * std::cos(v[0]) * sys.op("S.z") +
                   2.0 * pi * 1e4 * sys.op("S.x"));
  };
  FPPropagator u = stochastic_evol(h_fun, params, 1e-6, FpSpace::Liouville);
  FPState s = dm2fp(ket2dm(state(sys, "S[0.5]")), params);
  for (int step = 0; step < 1000; ++step) s = apply(u, s);
  CHECK(std::abs(fp2dm(s).trace().real() - 1.0) < 1e-8);
}

TEST_CASE("fokker-planck error paths") {
  StochasticParameterSet params;
  params["x"].values = {1.0};
  params["x"].dynamics = {{1, 5.0}};
  auto h_fun = [](const std::vector<double>&) { return QMatrix::zero(2, 2); };
  CHECK_THROWS_AS(fp_superoperator(h_fun, params, FpSpace::Liouville), DomainError);

  StochasticParameterSet empty;
  CHECK_THROWS_AS(dm2fp(QMatrix::identity(2).unit(), empty), ValueError);

  StochasticParameterSet two;
  two["x"].values = {0.0, 1.0};
  int call = 0;
  auto bad_fun = [&](const std::vector<double>&) {
    return QMatrix::identity(call++ == 0 ? 2 : 3);
  };
  CHECK_THROWS_AS(fp_superoperator(bad_fun, two, FpSpace::Liouville), DimensionError);
}
