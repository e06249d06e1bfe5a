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

#include "ncbase/cones.hpp"
#include "ncbase/random.hpp"
#include "support/oracles.hpp"

using namespace ncbase;
using Catch::Matchers::WithinAbs;

namespace {

// Choi matrix of the map with the given representer, built entrywise from
// phi(E_ij) so that it never touches the library's own reshaping.
Mat choi_of(const DualElement& phi, int d) {
  return oracle::choi(d, phi.level(), [&](const Mat& e) { return phi.apply(e); });
}

}  // namespace

TEST_CASE("representer and values describe the same map", "[cones]") {
  Rng rng(41);
  const OperatorSystem s = random_system(rng, 3, 4, Field::Complex);
  const Mat r = random_selfadjoint(rng, s, 2);
  const DualElement phi = DualElement::from_representer(s, r);
  const DualElement again(s, phi.values());
  CHECK((again.representer() - r).norm() < 1e-10);
  for (int b = 0; b < s.dim(); ++b) {
    const Mat a = s.basis()[b];
    Mat direct(2, 2);
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) direct(k, l) = (block_of(r, 3, k, l).adjoint() * a).trace();
    CHECK((phi.apply(a) - direct).norm() < 1e-10);
  }
}

TEST_CASE("DualCP membership on M_d matches the Choi matrix", "[cones]") {
  Rng rng(42);
  for (int d : {2, 3}) {
    const OperatorSystem s = full_matrix_system(d);
    const ConeProvider cone(ConeKind::DualCP, s);
    int yes = 0, no = 0;
    for (int t = 0; t < 30; ++t) {
      const int n = 1 + t % 2;
      Mat r = random_selfadjoint(rng, s, n);
      // shift toward the boundary so both answers occur
      r += (-oracle::min_eigenvalue(r) + uniform(rng, -0.5, 0.5)) * Mat::Identity(n * d, n * d);
      const DualElement phi = DualElement::from_representer(s, r);
      const double lam = oracle::min_eigenvalue(choi_of(phi, d));
      if (std::abs(lam) < 1e-5) continue;
      const MemberResult m = cone.is_member(r);
      REQUIRE(m.verdict != Verdict::Indeterminate);
      CHECK((m.verdict == Verdict::Yes) == (lam > 0));
      (lam > 0 ? yes : no)++;
    }
    CHECK(yes > 3);
    CHECK(no > 3);
  }
}

TEST_CASE("DualCP on the diagonal system is blockwise positivity", "[cones]") {
  Rng rng(43);
  const OperatorSystem s = diagonal_system(3);
  const ConeProvider cone(ConeKind::DualCP, s);
  for (int t = 0; t < 20; ++t) {
    std::vector<Mat> vals;
    double worst = INFINITY;
    for (int i = 0; i < 3; ++i) {
      Mat v = random_hermitian(rng, 2, Field::Complex).mat() + 1.5 * Mat::Identity(2, 2);
      worst = std::min(worst, oracle::min_eigenvalue(v));
      vals.push_back(v);
    }
    if (std::abs(worst) < 1e-5) continue;
    // diagonal_system's basis is e_0, e_1, e_2, so values are phi(e_i)
    const DualElement phi(s, vals);
    const MemberResult m = cone.is_member(phi.representer());
    CHECK((m.verdict == Verdict::Yes) == (worst > 0));
  }
}

TEST_CASE("inherited margin is minus the least eigenvalue", "[cones]") {
  Rng rng(44);
  for (Field field : {Field::Real, Field::Complex}) {
    const OperatorSystem s = random_system(rng, 3, 4, field);
    const ConeProvider cone(ConeKind::Inherited, s);
    for (int n = 1; n <= 2; ++n) {
      const Mat x = random_selfadjoint(rng, s, n);
      const MemberResult m = cone.is_member(x);
      REQUIRE(m.status == conic::Status::Optimal);
      CHECK_THAT(m.margin, WithinAbs(-oracle::min_eigenvalue(x), 1e-6));
      CHECK((m.verdict == Verdict::Yes) == (oracle::min_eigenvalue(x) > 0));
    }
  }
}

TEST_CASE("CP maps pair nonnegatively with positive elements", "[cones]") {
  Rng rng(45);
  const OperatorSystem s = random_system(rng, 3, 5, Field::Complex);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 3;
    const DualElement phi = DualElement::from_representer(s, random_cp_representer(rng, s, n, 2, n));
    Mat x = random_selfadjoint(rng, s, n);
    x -= oracle::min_eigenvalue(x) * Mat::Identity(x.rows(), x.cols());
    CHECK(pairing(phi, x).real() >= -1e-9);
    // phi^(k) of a positive element is positive
    CHECK(oracle::min_eigenvalue(phi.amplify(x)) > -1e-9);
  }
}

TEST_CASE("random CP representers are members", "[cones]") {
  Rng rng(46);
  const OperatorSystem s = random_system(rng, 3, 4, Field::Real);
  const ConeProvider cone(ConeKind::DualCP, s);
  for (int n = 1; n <= 3; ++n) {
    const MemberResult m = cone.is_member(random_cp_representer(rng, s, n, 2, n));
    CHECK(m.verdict == Verdict::Yes);
    CHECK(m.margin <= 1e-7);
  }
}

TEST_CASE("compression preserves both cones", "[cones]") {
  Rng rng(47);
  const OperatorSystem s = random_system(rng, 2, 3, Field::Complex);
  for (ConeKind kind : {ConeKind::Inherited, ConeKind::DualCP}) {
    const ConeProvider cone(kind, s);
    const Mat x = kind == ConeKind::DualCP ? random_cp_representer(rng, s, 2, 2, 2)
                                           : [&] {
                                               Mat y = random_selfadjoint(rng, s, 2);
                                               return Mat(y - oracle::min_eigenvalue(y) * Mat::Identity(4, 4));
                                             }();
    const Mat alpha = gaussian_mat(rng, 2, 3, Field::Complex);
    const Mat c = cone.compress(alpha, x);
    CHECK(c.rows() == 6);
    CHECK(cone.is_member(c).verdict == Verdict::Yes);
  }
}

TEST_CASE("bipolar check finds no disagreements", "[cones]") {
  Rng rng(48);
  for (Field field : {Field::Real, Field::Complex}) {
    const OperatorSystem s = random_system(rng, 3, 4, field);
    for (int n = 1; n <= 2; ++n) {
      const BipolarReport r = bipolar_check(s, n, 10, 1e-7, rng);
      CHECK(r.samples == 10);
      CHECK(r.disagreements.empty());
    }
  }
}

TEST_CASE("strict positivity margins of the standard bases", "[cones]") {
  for (int d : {2, 3}) {
    const OperatorSystem s = full_matrix_system(d);
    CHECK_THAT(BaseSpec::inherited_trace(s).strict_positivity_margin(), WithinAbs(1.0 / d, 1e-7));
    CHECK_THAT(BaseSpec::dual_cp(s).strict_positivity_margin(), WithinAbs(1.0, 1e-7));
  }
}

TEST_CASE("reference points lie in the base", "[cones]") {
  Rng rng(49);
  const OperatorSystem s = random_system(rng, 3, 4, Field::Complex);
  for (const BaseSpec& b : {BaseSpec::inherited_trace(s), BaseSpec::dual_cp(s)}) {
    for (int n = 1; n <= 2; ++n) {
      CHECK(b.in_base(b.reference_point(n)));
      CHECK_FALSE(b.in_base(2.0 * b.reference_point(n)));
    }
  }
}

TEST_CASE("level cap and shape errors", "[cones]") {
  const OperatorSystem s = diagonal_system(2);
  const ConeProvider cone(ConeKind::Inherited, s, 2);
  CHECK_THROWS_AS(cone.check_level(3), std::invalid_argument);
  CHECK_THROWS_AS(cone.is_member(Mat::Identity(3, 3)), std::invalid_argument);
  Mat e = Mat::Zero(2, 2);
  e(0, 1) = 1.0;
  CHECK_THROWS_AS(cone.is_member(e), std::invalid_argument);
}
