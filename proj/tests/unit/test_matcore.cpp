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

#include "ncbase/matcore.hpp"
#include "ncbase/random.hpp"
#include "support/oracles.hpp"

using namespace ncbase;
using Catch::Matchers::WithinAbs;

TEST_CASE("herm_eig matches the closed form on 2x2", "[matcore]") {
  Rng rng(11);
  for (int s = 0; s < 50; ++s) {
    const HermMat h = random_hermitian(rng, 2, Field::Complex);
    const auto [lo, hi] = oracle::eig2(h.mat());
    const EigenDecomposition e = herm_eig(h);
    CHECK_THAT(e.values(0), WithinAbs(lo, 1e-12));
    CHECK_THAT(e.values(1), WithinAbs(hi, 1e-12));
    const Mat back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    CHECK((back - h.mat()).norm() < 1e-12);
  }
}

TEST_CASE("HermMat rejects non-Hermitian input", "[matcore]") {
  Mat a(2, 2);
  a << 1, 2, 3, 4;
  CHECK_THROWS_AS(HermMat(a), std::invalid_argument);
  CHECK_NOTHROW(HermMat::symmetrized(a));
}

TEST_CASE("norms agree with independent oracles", "[matcore]") {
  Rng rng(12);
  for (int s = 0; s < 30; ++s) {
    const Mat a = gaussian_mat(rng, 4, 3, Field::Complex);
    CHECK_THAT(spectral_norm(a), WithinAbs(oracle::spectral_norm(a), 1e-9));
    const Mat h = random_hermitian(rng, 5, Field::Complex).mat();
    CHECK_THAT(trace_norm(h), WithinAbs(oracle::trace_norm(h), 1e-9));
    CHECK_THAT(min_eigenvalue(HermMat(h)), WithinAbs(oracle::min_eigenvalue(h), 1e-9));
  }
}

TEST_CASE("tilde has the norm of its corner", "[matcore]") {
  Rng rng(13);
  for (int s = 0; s < 20; ++s) {
    const Mat x = gaussian_mat(rng, 3, 2, Field::Complex);
    const HermMat t = tilde(x);
    CHECK(t.size() == 5);
    CHECK_THAT(spectral_norm(t.mat()), WithinAbs(spectral_norm(x), 1e-12));
    // The spectrum of the dilation is symmetric.
    const EigenDecomposition e = herm_eig(t);
    CHECK_THAT(e.values(0), WithinAbs(-e.values(4), 1e-12));
  }
}

TEST_CASE("support projection and restricted inverse square root", "[matcore]") {
  Rng rng(14);
  const Mat v = gaussian_mat(rng, 4, 2, Field::Complex);
  const HermMat a = HermMat::symmetrized(v * v.adjoint());
  const Mat e = support_projection(a).mat();
  CHECK((e * e - e).norm() < 1e-10);
  CHECK(std::abs(e.trace().real() - 2.0) < 1e-10);
  CHECK((e * a.mat() - a.mat()).norm() < 1e-10);

  const Mat m = restricted_inv_sqrt(a).mat();
  const Mat eperp = Mat::Identity(4, 4) - e;
  // m a m = e on the support, and m acts as the identity off it.
  CHECK((m * a.mat() * m - e).norm() < 1e-9);
  CHECK((m * eperp - eperp).norm() < 1e-9);

  const Mat p = pinv_sqrt(a).mat();
  CHECK((p * a.mat() * p - e).norm() < 1e-9);
  CHECK((p * eperp).norm() < 1e-9);

  const Mat r = psd_sqrt(a).mat();
  CHECK((r * r - a.mat()).norm() < 1e-10);
}

TEST_CASE("restricted_inv_sqrt rejects indefinite input", "[matcore]") {
  Mat a = Mat::Identity(2, 2);
  a(1, 1) = -1.0;
  CHECK_THROWS_AS(restricted_inv_sqrt(HermMat(a)), NumericalError);
}

TEST_CASE("kron, direct_sum and blocks", "[matcore]") {
  Rng rng(15);
  const Mat a = gaussian_mat(rng, 2, 2, Field::Complex), b = gaussian_mat(rng, 3, 3, Field::Complex);
  const Mat k = kron(a, b);
  CHECK((block_of(k, 3, 1, 0) - a(1, 0) * b).norm() < 1e-14);
  const Mat s = direct_sum(a, b);
  CHECK(s.rows() == 5);
  CHECK_THAT(spectral_norm(s), WithinAbs(std::max(spectral_norm(a), spectral_norm(b)), 1e-12));
  CHECK_THAT(spectral_norm(k), WithinAbs(spectral_norm(a) * spectral_norm(b), 1e-10));
}

TEST_CASE("canonical_shuffle swaps tensor factors", "[matcore]") {
  Rng rng(16);
  const Mat a = gaussian_mat(rng, 2, 2, Field::Complex), b = gaussian_mat(rng, 3, 3, Field::Complex);
  CHECK((canonical_shuffle(kron(a, b), 2, 3) - kron(b, a)).norm() < 1e-13);
  const Mat x = gaussian_mat(rng, 6, 6, Field::Complex);
  CHECK((canonical_shuffle(canonical_shuffle(x, 2, 3), 3, 2) - x).norm() < 1e-13);
}

TEST_CASE("field tags round trip", "[matcore]") {
  CHECK(parse_field(field_tag(Field::Real)) == Field::Real);
  CHECK(parse_field(field_tag(Field::Complex)) == Field::Complex);
  CHECK_THROWS_AS(parse_field("H"), std::invalid_argument);
}

TEST_CASE("real_inner is the real Frobenius pairing", "[matcore]") {
  Mat a(1, 2), b(1, 2);
  a << cplx(1, 1), 2;
  b << cplx(0, 1), 3;
  CHECK_THAT(real_inner(a, b), WithinAbs(1.0 + 6.0, 1e-15));
  CHECK(is_real(Mat::Identity(2, 2)));
  CHECK_FALSE(is_real(a));
}
