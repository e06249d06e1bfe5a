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

#include "ncbase/ncnorm.hpp"
#include "ncbase/paulsen.hpp"
#include "support/oracles.hpp"

using namespace ncbase;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PaulsenSystem make_ps(Rng& rng, int d1 = 2, int d2 = 2, int dim = 2) {
  return build_paulsen(random_operator_space(rng, d1, d2, dim, Field::Complex));
}

// sum_i c_i (x) v_i for n x n coefficient matrices c_i: an element of M_n(V).
Mat corner(Rng& rng, const PaulsenSystem& ps, int n) {
  Mat x = Mat::Zero(n * ps.v.rows(), n * ps.v.cols());
  for (const Mat& v : ps.v.basis()) x += kron(gaussian_mat(rng, n, n, Field::Complex), v);
  return x;
}

}  // namespace

TEST_CASE("Paulsen system dimensions and the unit", "[paulsen]") {
  Rng rng(81);
  const PaulsenSystem ps = make_ps(rng, 2, 3, 2);
  CHECK(ps.sys.ambient_dim() == 5);
  CHECK(ps.sys.dim() == 2 + 2 * 2);
  CHECK_THAT(ps.base.f1(Mat::Identity(5, 5))(0, 0).real(), WithinAbs(1.0, 1e-12));
  CHECK_THROWS_AS(OperatorSpaceRep::make(2, 2, {Mat::Identity(2, 3)}, Field::Complex), std::invalid_argument);
  CHECK_THROWS_AS(OperatorSpaceRep::make(2, 2, {Mat::Identity(2, 2), Mat::Identity(2, 2)}, Field::Complex),
                  std::invalid_argument);
}

TEST_CASE("tau is the average of the diagonal scalars", "[paulsen]") {
  Rng rng(82);
  const PaulsenSystem ps = make_ps(rng, 2, 3, 1);
  const Mat lam = Mat::Constant(1, 1, 0.7), mu = Mat::Constant(1, 1, 2.1);
  const Mat p = paulsen_element(ps, lam, mu, corner(rng, ps, 1), corner(rng, ps, 1));
  CHECK_THAT(ps.base.f1(p)(0, 0).real(), WithinAbs(1.4, 1e-12));
}

TEST_CASE("parts and corner form round trip", "[paulsen]") {
  Rng rng(83);
  const PaulsenSystem ps = make_ps(rng, 2, 3, 2);
  for (int n = 1; n <= 3; ++n) {
    const Mat lam = gaussian_mat(rng, n, n, Field::Complex), mu = gaussian_mat(rng, n, n, Field::Complex);
    const Mat x = corner(rng, ps, n), y = corner(rng, ps, n);
    const Mat p = paulsen_element(ps, lam, mu, x, y);
    CHECK(ps.sys.span_residual(block_of(p, 5, 0, n - 1)) < 1e-10);
    const PaulsenParts parts = paulsen_parts(ps, p);
    CHECK((parts.lambda - lam).norm() < 1e-10);
    CHECK((parts.mu - mu).norm() < 1e-10);
    CHECK((parts.x - x).norm() < 1e-10);
    CHECK((parts.y - y).norm() < 1e-10);
    const Mat c = to_corner_form(ps, p);
    CHECK((c.topLeftCorner(2 * n, 2 * n) - kron(lam, Mat::Identity(2, 2))).norm() < 1e-12);
    CHECK((c.topRightCorner(2 * n, 3 * n) - x).norm() < 1e-12);
    CHECK((c.bottomLeftCorner(3 * n, 2 * n) - y.adjoint()).norm() < 1e-12);
    CHECK((from_corner_form(ps, c) - p).norm() < 1e-12);
    // permutation similarity keeps the spectrum
    CHECK_THAT(oracle::spectral_norm(c), WithinRel(oracle::spectral_norm(p), 1e-9));
  }
  Mat bad = paulsen_element(ps, Mat::Identity(1, 1), Mat::Identity(1, 1), corner(rng, ps, 1));
  bad(0, 0) += 0.5;
  CHECK_THROWS_AS(paulsen_parts(ps, bad), std::invalid_argument);
}

TEST_CASE("positivity criterion agrees with the ambient test", "[paulsen]") {
  Rng rng(84);
  const PaulsenSystem ps = make_ps(rng);
  int pos = 0, neg = 0;
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 2;
    Mat a = gaussian_mat(rng, n, n, Field::Complex), b = gaussian_mat(rng, n, n, Field::Complex);
    if (t % 5 == 0) a.col(0).setZero();  // singular lambda
    const Mat lam = a * a.adjoint(), mu = b * b.adjoint();
    const Mat x = uniform(rng, 0.05, 1.0) * corner(rng, ps, n);
    const PositivityCheck c = positivity_formula_check(ps, lam, mu, x, rng, 100);
    CHECK(c.agree);
    CHECK(c.norm_bound_consistent);
    const bool psd = oracle::min_eigenvalue(paulsen_element(ps, lam, mu, x)) >= -1e-9;
    CHECK(c.ambient_psd == psd);
    (psd ? pos : neg)++;
  }
  CHECK(neg > 0);
}

TEST_CASE("positive elements decompose through a contraction", "[paulsen]") {
  Rng rng(85);
  const PaulsenSystem ps = make_ps(rng);
  for (int n = 1; n <= 2; ++n) {
    const Mat p = random_base_element(ps, n, rng);
    const PaulsenDecomposition dec = positive_decompose(ps, p);
    CHECK(oracle::spectral_norm(dec.z) <= 1.0 + 1e-7);
    CHECK((dec.reconstruct(ps) - p).norm() < 1e-7);
  }
  const Mat neg = paulsen_element(ps, Mat::Identity(1, 1), -Mat::Identity(1, 1), Mat::Zero(2, 2));
  CHECK_THROWS_AS(positive_decompose(ps, neg), std::invalid_argument);
}

TEST_CASE("K1 closed form against the eigenvalue test", "[paulsen]") {
  Rng rng(86);
  const PaulsenSystem ps = make_ps(rng);
  int in = 0;
  for (int t = 0; t < 100; ++t) {
    const double lam = uniform(rng, -0.2, 2.2);
    Mat x = corner(rng, ps, 1);
    x *= uniform(rng, 0.0, 1.2) / oracle::spectral_norm(x);
    const Mat cand = k1_candidate(ps, lam, x);
    const double m = oracle::min_eigenvalue(cand);
    if (std::abs(m) < 1e-6) continue;
    CHECK(k1_membership(ps, lam, x) == (m > 0));
    in += m > 0;
  }
  CHECK(in > 5);
}

TEST_CASE("tau norm of diagonal and unit-corner elements", "[paulsen]") {
  Rng rng(87);
  const PaulsenSystem ps = make_ps(rng);
  for (int t = 0; t < 3; ++t) {
    const double lam = uniform(rng, 0, 3), mu = uniform(rng, 0, 3);
    const Mat p = paulsen_element(ps, Mat::Constant(1, 1, lam), Mat::Constant(1, 1, mu), Mat::Zero(2, 2));
    CHECK_THAT(nc_base_norm_sa(ps.base, p).value, WithinAbs(0.5 * (lam + mu), 1e-7));
    Mat x = corner(rng, ps, 1);
    x /= oracle::spectral_norm(x);
    const Mat q = paulsen_element(ps, Mat::Identity(1, 1), Mat::Identity(1, 1), x);
    CHECK_THAT(nc_base_norm_sa(ps.base, q).value, WithinAbs(1.0, 1e-6));
  }
}

TEST_CASE("base elements have norm at most four", "[paulsen]") {
  Rng rng(88);
  const PaulsenSystem ps = make_ps(rng);
  for (int n = 1; n <= 2; ++n)
    for (int t = 0; t < 5; ++t) {
      const Mat k = random_base_element(ps, n, rng);
      CHECK(ps.base.in_base(k, 1e-6));
      CHECK(oracle::spectral_norm(k) <= 4.0 + 1e-6);
    }
  const WitnessResult w = search_norm_witness(ps, 2, 2, 4.0 - 1e-4, rng);
  CHECK(w.norm <= 4.0 + 1e-6);
  CHECK(w.norm >= 2.0);
  CHECK(ps.base.in_base(w.element, 1e-6));
}

TEST_CASE("verify_equivalence on a small run", "[paulsen]") {
  Rng rng(89);
  const PaulsenSystem ps = make_ps(rng);
  EquivalenceOptions opt;
  opt.samples = 3;
  opt.witness_restarts = 20;
  const Report r = verify_equivalence(ps, opt, rng);
  CHECK(r.overall() == CheckStatus::Pass);
}
