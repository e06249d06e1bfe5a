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

#include <cmath>

#include "ncbase/conic.hpp"
#include "ncbase/random.hpp"
#include "support/oracles.hpp"

using namespace ncbase;
using namespace ncbase::conic;
using Catch::Matchers::WithinAbs;

namespace {

// min t subject to t I - h = Y >= 0, for Hermitian h; the optimum is lambda_max(h).
Problem lambda_max_problem(const Mat& h, Field field) {
  const int n = static_cast<int>(h.rows());
  Problem p;
  const HermVar y = HermVar::create(p, n, field);
  const int t = p.add_free(1);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int part = 0; part < (field == Field::Complex && j > i ? 2 : 1); ++part) {
        LinearForm f;
        Mat e = Mat::Zero(n, n);
        e(i, j) = part == 0 ? cplx(1, 0) : cplx(0, -1);
        y.add_to(f, e);
        if (i == j) f.add_scalar(t, 0, -1.0);
        p.add_equality(std::move(f), part == 0 ? -h(i, j).real() : -h(i, j).imag());
      }
  LinearForm obj;
  obj.add_scalar(t, 0, 1.0);
  p.set_objective(std::move(obj));
  return p;
}

}  // namespace

TEST_CASE("lambda_max as an SDP matches eigenvalues", "[conic]") {
  Rng rng(21);
  for (Field field : {Field::Real, Field::Complex}) {
    for (int s = 0; s < 10; ++s) {
      const Mat h = random_hermitian(rng, 4, field).mat();
      const Solution sol = solve(lambda_max_problem(h, field));
      REQUIRE(sol.status == Status::Optimal);
      const auto ev = oracle::eigenvalues(h);
      const double lmax = *std::max_element(ev.begin(), ev.end());
      CHECK_THAT(sol.primal_objective, WithinAbs(lmax, 1e-7));
      CHECK(sol.gap < 1e-8);
    }
  }
}

TEST_CASE("2x2 complex lambda_max closed form", "[conic]") {
  Mat h(2, 2);
  h << 0, cplx(0, 2), cplx(0, -2), 1;
  const Solution s = solve(lambda_max_problem(h, Field::Complex));
  REQUIRE(s.status == Status::Optimal);
  CHECK_THAT(s.primal_objective, WithinAbs((1.0 + std::sqrt(17.0)) / 2.0, 1e-8));
}

TEST_CASE("LP over the simplex with a duplicated row", "[conic]") {
  Problem p;
  const int x = p.add_nonneg(3);
  LinearForm f;
  for (int i = 0; i < 3; ++i) f.add_scalar(x, i, 1.0);
  p.add_equality(f, 1.0);
  p.add_equality(f, 1.0);
  LinearForm o;
  o.add_scalar(x, 0, 3.0);
  o.add_scalar(x, 1, 1.0);
  o.add_scalar(x, 2, 2.0);
  p.set_objective(std::move(o));
  const Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK_THAT(s.primal_objective, WithinAbs(1.0, 1e-8));
  CHECK_THAT(s.primal[x](1), WithinAbs(1.0, 1e-7));
}

TEST_CASE("primal infeasibility comes with a Farkas ray", "[conic]") {
  Problem p;
  const int x = p.add_nonneg(2);
  LinearForm f;
  f.add_scalar(x, 0, 1.0);
  f.add_scalar(x, 1, 1.0);
  p.add_equality(f, -1.0);
  const Solution s = solve(p);
  REQUIRE(s.status == Status::PrimalInfeasible);
  // b^T y = 1 and A^T y <= 0 on the nonnegative cone.
  CHECK_THAT(-1.0 * s.multipliers(0), WithinAbs(1.0, 1e-8));
}

TEST_CASE("inconsistent equalities are infeasible", "[conic]") {
  Problem p;
  const int x = p.add_free(1);
  LinearForm f;
  f.add_scalar(x, 0, 1.0);
  p.add_equality(f, 1.0);
  p.add_equality(f, 2.0);
  CHECK(solve(p).status == Status::PrimalInfeasible);
}

TEST_CASE("unbounded objective is dual infeasible", "[conic]") {
  Problem p;
  const int x = p.add_nonneg(2);
  LinearForm f;
  f.add_scalar(x, 0, 1.0);
  f.add_scalar(x, 1, -1.0);
  p.add_equality(f, 0.0);
  LinearForm o;
  o.add_scalar(x, 0, -1.0);
  p.set_objective(std::move(o));
  CHECK(solve(p).status == Status::DualInfeasible);
}

TEST_CASE("tolerance bounds and the process-wide override", "[conic]") {
  Problem p;
  const int x = p.add_nonneg(1);
  LinearForm f;
  f.add_scalar(x, 0, 1.0);
  p.add_equality(f, 2.0);
  p.set_objective(f);
  CHECK_THROWS_AS(solve(p, 1e-12), std::invalid_argument);
  CHECK_THROWS_AS(solve(p, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(set_tolerance_override(1.0), std::invalid_argument);
  set_tolerance_override(1e-6);
  CHECK(tolerance_override() == 1e-6);
  const Solution s = solve(p, 1e-12);  // overridden
  CHECK_THAT(s.primal_objective, WithinAbs(2.0, 1e-5));
  set_tolerance_override(0.0);
  CHECK(tolerance_override() == 0.0);
}

TEST_CASE("malformed forms are rejected", "[conic]") {
  Problem p;
  p.add_psd(2);
  LinearForm f;
  f.add_scalar(5, 0, 1.0);
  CHECK_THROWS_AS(p.add_equality(f, 0.0), std::invalid_argument);
  LinearForm g;
  g.add_psd(0, RMat::Identity(3, 3));
  CHECK_THROWS_AS(p.add_equality(g, 0.0), std::invalid_argument);
}

TEST_CASE("HermVar embedding round trips", "[conic]") {
  Rng rng(22);
  const HermMat h = random_hermitian(rng, 3, Field::Complex);
  const RMat e = complex_embed(h);
  CHECK(e.rows() == 6);
  // Same spectrum, each eigenvalue twice.
  const auto ev = oracle::eigenvalues(h.mat());
  Eigen::SelfAdjointEigenSolver<RMat> es(e);
  for (double v : ev) {
    int hits = 0;
    for (Eigen::Index i = 0; i < 6; ++i) hits += std::abs(es.eigenvalues()(i) - v) < 1e-10;
    CHECK(hits >= 2);
  }
}
