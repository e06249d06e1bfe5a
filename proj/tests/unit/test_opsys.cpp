// Copyright 2026 The ncbase Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch.hpp>

#include "ncbase/opsys.hpp"
#include "ncbase/random.hpp"
#include "support/oracles.hpp"

using namespace ncbase;
using Catch::Matchers::WithinAbs;

TEST_CASE("make completes generators with adjoints", "[opsys]") {
  Mat e01 = Mat::Zero(2, 2);
  e01(0, 1) = 1.0;
  const OperatorSystem s = OperatorSystem::make({Mat::Identity(2, 2), e01}, Field::Complex);
  CHECK(s.dim() == 3);
  Mat e10 = Mat::Zero(2, 2);
  e10(1, 0) = 1.0;
  CHECK(s.span_residual(e10) < 1e-12);
  Mat e00 = Mat::Zero(2, 2);
  e00(0, 0) = 1.0;
  CHECK(s.span_residual(e00) > 0.1);
  // unit coordinates reproduce the identity
  CHECK((s.combine(s.unit_coords()) - Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("make rejects bad generating sets", "[opsys]") {
  CHECK_THROWS_AS(OperatorSystem::make({}, Field::Complex), std::invalid_argument);
  Mat e00 = Mat::Zero(2, 2);
  e00(0, 0) = 1.0;
  CHECK_THROWS_AS(OperatorSystem::make({e00}, Field::Complex), std::invalid_argument);
  CHECK_THROWS_AS(OperatorSystem::make({Mat::Identity(2, 2), Mat::Identity(3, 3)}, Field::Complex),
                  std::invalid_argument);
  Mat c = Mat::Identity(2, 2);
  c(0, 1) = cplx(0, 1);
  CHECK_THROWS_AS(OperatorSystem::make({Mat::Identity(2, 2), c}, Field::Real), std::invalid_argument);
  // dependent generators are dropped
  CHECK(OperatorSystem::make({Mat::Identity(2, 2), 2.0 * Mat::Identity(2, 2)}, Field::Complex).dim() == 1);
}

TEST_CASE("orthonormal basis and adjoint map", "[opsys]") {
  Rng rng(31);
  for (Field field : {Field::Real, Field::Complex}) {
    const OperatorSystem s = random_system(rng, 3, 5, field);
    const auto& q = s.orthonormal_basis();
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < q.size(); ++j) {
        const cplx g = (q[i].adjoint() * q[j]).trace();
        CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
    for (int r = 0; r < s.dim(); ++r) {
      Mat back = Mat::Zero(3, 3);
      for (int t = 0; t < s.dim(); ++t) back += s.adjoint_map()(t, r) * s.basis()[t];
      CHECK((back - s.basis()[r].adjoint()).norm() < 1e-10);
    }
  }
}

TEST_CASE("projection is idempotent and orthogonal", "[opsys]") {
  Rng rng(32);
  const OperatorSystem s = random_system(rng, 3, 4, Field::Complex);
  const Mat a = gaussian_mat(rng, 3, 3, Field::Complex);
  const Mat p = s.project(a);
  CHECK((s.project(p) - p).norm() < 1e-12);
  for (const Mat& b : s.basis()) CHECK(std::abs((b.adjoint() * (a - p)).trace()) < 1e-10);
  CHECK_THAT(s.span_residual(a), WithinAbs((a - p).norm(), 1e-12));
}

TEST_CASE("herm bases span the selfadjoint matrices", "[opsys]") {
  Rng rng(33);
  for (Field field : {Field::Real, Field::Complex}) {
    const OperatorSystem s = random_system(rng, 3, 4, field);
    for (int n = 1; n <= 2; ++n) {
      const auto& h = s.herm_basis(n);
      const auto& c = s.herm_complement_basis(n);
      const int nd = 3 * n;
      const int full = field == Field::Real ? nd * (nd + 1) / 2 : nd * nd;
      CHECK(static_cast<int>(h.size() + c.size()) == full);
      // M_n(S)_sa has real dimension n^2 dim S
      if (field == Field::Complex) CHECK(static_cast<int>(h.size()) == n * n * s.dim());
      for (const Mat& a : h) {
        CHECK(is_hermitian(a, 1e-12));
        CHECK((s.project_level(a) - a).norm() < 1e-10);
        for (const Mat& b : c) CHECK(std::abs(real_inner(a, b)) < 1e-10);
      }
      const Mat x = random_selfadjoint(rng, s, n);
      CHECK((s.from_herm_coords(s.herm_coords(x), n) - x).norm() < 1e-10);
    }
  }
}

TEST_CASE("SysElement round trips and level checks", "[opsys]") {
  Rng rng(34);
  const OperatorSystem s = random_system(rng, 2, 3, Field::Complex);
  const Mat x = random_element(rng, s, 3);
  const SysElement e = SysElement::from_ambient(s, x);
  CHECK(e.level() == 3);
  CHECK((e.ambient() - x).norm() < 1e-10);
  const SysElement back(s, e.coefficients());
  CHECK((back.ambient() - x).norm() < 1e-10);
  CHECK((e.adjoint().ambient() - x.adjoint()).norm() < 1e-10);
  CHECK_THROWS_AS(SysElement::from_ambient(s, Mat::Identity(3, 3)), std::invalid_argument);
  CHECK_THROWS_AS(SysElement::from_ambient(s, gaussian_mat(rng, 4, 4, Field::Complex) * 10.0),
                  std::invalid_argument);
  CHECK(SysElement::unit(s, 2).ambient().isApprox(Mat::Identity(4, 4)));
}

TEST_CASE("order unit norm is the spectral norm", "[opsys]") {
  Rng rng(35);
  const OperatorSystem s = random_system(rng, 3, 4, Field::Complex);
  for (int t = 0; t < 10; ++t) {
    const SysElement h = SysElement::from_ambient(s, random_selfadjoint(rng, s, 2));
    CHECK_THAT(order_unit_norm(h), WithinAbs(oracle::spectral_norm(h.ambient()), 1e-8));
    const SysElement g = SysElement::from_ambient(s, random_element(rng, s, 2));
    CHECK_THAT(matrix_norm(g), WithinAbs(oracle::spectral_norm(g.ambient()), 1e-8));
  }
}

TEST_CASE("positivity in the inherited cone", "[opsys]") {
  const OperatorSystem s = diagonal_system(3);
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 1, 0, 2;
  CHECK(is_positive(SysElement::from_ambient(s, d)));
  d(1, 1) = -1e-3;
  CHECK_FALSE(is_positive(SysElement::from_ambient(s, d)));
  CHECK_THROWS_AS(is_positive(SysElement::from_ambient(s, Mat::Zero(3, 3) + cplx(0, 1) * Mat::Identity(3, 3))),
                  std::invalid_argument);
}

TEST_CASE("states on the diagonal system are probability vectors", "[opsys]") {
  const OperatorSystem s = diagonal_system(3);
  auto values = [&](Eigen::Vector3d p) {
    // phi(b_r) = sum_i p_i (b_r)_ii
    Vec v(s.dim());
    for (int r = 0; r < s.dim(); ++r) {
      cplx acc = 0;
      for (int i = 0; i < 3; ++i) acc += p(i) * s.basis()[r](i, i);
      v(r) = acc;
    }
    return v;
  };
  CHECK(is_state(s, values({0.2, 0.3, 0.5})));
  CHECK(is_state(s, values({1, 0, 0})));
  CHECK_FALSE(is_state(s, values({0.6, 0.6, -0.2})));
  CHECK_FALSE(is_state(s, values({0.5, 0.5, 0.5})));
}
