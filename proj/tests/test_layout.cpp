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
#include "spindle/layout.hpp"

using namespace spindle;

namespace {

SpaceLayout nv_layout() {
  // ([(GS, ES), S], SS) with S spin 1
  return SpaceLayout::sum(
      {SpaceLayout::tensor({SpaceLayout::sum({SpaceLayout::leaf(level("GS")),
                                              SpaceLayout::leaf(level("ES"))}),
                            SpaceLayout::leaf(spin("S", 1.0))}),
       SpaceLayout::leaf(level("SS"))});
}

QMatrix sigma_z() {
  cx_mat m(2, 2);
  m << 1, 0, 0, -1;
  return QMatrix(m);
}

}  // namespace

TEST_CASE("layout dimensions") {
  CHECK(SpaceLayout::tensor({spin("S", 0.5), spin("I", 0.5)}).dim() == 4);
  CHECK(SpaceLayout::sum({SpaceLayout::leaf(level("GS")), SpaceLayout::leaf(level("ES"))}).dim() ==
        2);
  CHECK(nv_layout().dim() == 7);
}

TEST_CASE("member validation") {
  CHECK_THROWS_AS(validate_member(Member{"bad name", 0.5, {}}), ValueError);
  CHECK_THROWS_AS(validate_member(Member{"a[b]", 0.5, {}}), ValueError);
  CHECK_THROWS_AS(validate_member(Member{"S", 0.3, {}}), ValueError);
  CHECK_THROWS_AS(validate_member(Member{"S", -0.5, {}}), ValueError);
  CHECK_NOTHROW(validate_member(Member{"C_1", 1.5, {}}));
}

TEST_CASE("ptrace of a product state returns the factors") {
  auto layout = SpaceLayout::tensor({spin("A", 0.5), spin("B", 0.5)});
  oracles::Rng rng(5);
  QMatrix rho_a(rng.density(2)), rho_b(rng.density(2));
  QMatrix rho = kron(rho_a, rho_b);
  CHECK(approx_eq(ptrace(rho, layout, {"A"}), rho_a, 1e-13));
  CHECK(approx_eq(ptrace(rho, layout, {"B"}), rho_b, 1e-13));
  // trace is preserved
  CHECK(std::abs(ptrace(rho, layout, {"A"}).trace() - rho.trace()) < 1e-13);
}

TEST_CASE("ptrace of the Bell state is maximally mixed") {
  auto layout = SpaceLayout::tensor({spin("A", 0.5), spin("B", 0.5)});
  cx_vec bell(4);
  bell << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
  QMatrix rho(cx_mat(bell * bell.adjoint()));
  CHECK(approx_eq(ptrace(rho, layout, {"A"}), 0.5 * QMatrix::identity(2), 1e-13));
}

TEST_CASE("ptrace of kron(sz, sz) over one spin vanishes") {
  auto layout = SpaceLayout::tensor({spin("A", 0.5), spin("B", 0.5)});
  QMatrix op = kron(sigma_z(), sigma_z());
  CHECK(approx_eq(ptrace(op, layout, {"A"}), QMatrix::zero(2, 2), 1e-14));
}

TEST_CASE("ptrace equals a tr(b) for random factors") {
  oracles::Rng rng(7);
  for (int da : {2, 3}) {
    auto layout = SpaceLayout::tensor({spin("A", (da - 1) / 2.0), spin("B", 1.0)});
    QMatrix a(rng.matrix(da, da)), b(rng.matrix(3, 3));
    QMatrix red = ptrace(kron(a, b), layout, {"A"});
    CHECK(approx_eq(red, b.trace() * a, 1e-12));
  }
}

TEST_CASE("ptrace over non-adjacent factors") {
  auto layout = SpaceLayout::tensor({spin("A", 0.5), spin("B", 1.0), spin("C", 0.5)});
  oracles::Rng rng(9);
  QMatrix a(rng.matrix(2, 2)), b(rng.matrix(3, 3)), c(rng.matrix(2, 2));
  QMatrix op = kron(kron(a, b), c);
  QMatrix red = ptrace(op, layout, {"A", "C"});
  CHECK(approx_eq(red, b.trace() * kron(a, c), 1e-12));
}

TEST_CASE("ptrace error paths") {
  auto layout = SpaceLayout::tensor(
      {SpaceLayout::sum({SpaceLayout::leaf(level("GS")), SpaceLayout::leaf(level("ES"))}),
       SpaceLayout::leaf(spin("S", 1.0))});
  QMatrix op = QMatrix::identity(6);
  CHECK_THROWS_AS(ptrace(op, layout, {"GS"}), DomainError);  // partial factor group
  CHECK_THROWS_AS(ptrace(op, layout, {"nope"}), ValueError);
  CHECK_THROWS_AS(ptrace(QMatrix::identity(5), layout, {"S"}), DimensionError);
  // tracing the level pair as one factor works
  CHECK(approx_eq(ptrace(op, layout, {"S"}), 2.0 * QMatrix::identity(3), 1e-14));
}

TEST_CASE("project_block examples") {
  auto two_level = SpaceLayout::sum({SpaceLayout::leaf(level("GS")), SpaceLayout::leaf(level("ES"))});
  cx_mat rho(2, 2);
  rho << 0.75, 0.1, 0.1, 0.25;
  QMatrix r(rho);
  CHECK(project_block(r, two_level, "GS")(0, 0) == cx(0.75, 0.0));
  CHECK(project_block(r, two_level, "ES")(0, 0) == cx(0.25, 0.0));

  // direct_sum then project_block round-trips exactly
  oracles::Rng rng(13);
  QMatrix a(rng.matrix(2, 2)), b(rng.matrix(3, 3));
  auto layout = SpaceLayout::sum(
      {SpaceLayout::leaf(level("a")), SpaceLayout::leaf(spin("b", 1.0))});
  QMatrix stacked = direct_sum(QMatrix(cx_mat(a.to_dense().block(0, 0, 1, 1))), b);
  CHECK(approx_eq(project_block(stacked, layout, "b"), b, 0.0));

  // NV: SS is the bottom-right 1x1 block
  auto nv = nv_layout();
  cx_mat op = cx_mat::Zero(7, 7);
  op(6, 6) = cx(0.125, 0.0);
  CHECK(project_block(QMatrix(op), nv, "SS")(0, 0) == cx(0.125, 0.0));

  CHECK_THROWS_AS(project_block(QMatrix::identity(7), nv, "missing"), ValueError);
  auto flat = SpaceLayout::tensor({spin("A", 0.5), spin("B", 0.5)});
  CHECK_THROWS_AS(project_block(QMatrix::identity(4), flat, "A"), DomainError);
}

TEST_CASE("span indices on the NV layout") {
  auto nv = nv_layout();
  CHECK(span_indices(nv, "S") == std::vector<long>{0, 1, 2, 3, 4, 5});
  CHECK(span_indices(nv, "GS") == std::vector<long>{0, 1, 2});
  CHECK(span_indices(nv, "ES") == std::vector<long>{3, 4, 5});
  CHECK(span_indices(nv, "SS") == std::vector<long>{6});
}

TEST_CASE("embed_local places operators with identity companions and zero foreign branches") {
  auto nv = nv_layout();
  QMatrix gs_id = embed_local(nv, "GS", QMatrix::identity(1));
  cx_mat expected = cx_mat::Zero(7, 7);
  expected(0, 0) = expected(1, 1) = expected(2, 2) = 1;
  CHECK(approx_eq(gs_id, QMatrix(expected), 0.0));

  cx_mat sz_local(3, 3);
  sz_local.setZero();
  sz_local(0, 0) = 1;
  sz_local(2, 2) = -1;
  QMatrix sz = embed_local(nv, "S", QMatrix(sz_local));
  CHECK(sz(6, 6) == cx(0.0, 0.0));  // vanishes on SS
  CHECK(sz(0, 0) == cx(1.0, 0.0));  // GS branch
  CHECK(sz(3, 3) == cx(1.0, 0.0));  // ES branch
}
