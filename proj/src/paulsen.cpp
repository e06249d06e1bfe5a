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

#include "ncbase/paulsen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncbase/ncnorm.hpp"

namespace ncbase {

namespace {

constexpr double kSolverTol = 1e-9;

// Position of each level-layout index in the corner layout.
std::vector<int> corner_permutation(int n, int d1, int d2) {
  const int d = d1 + d2;
  std::vector<int> perm(n * d);
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < d; ++a) perm[k * d + a] = a < d1 ? k * d1 + a : n * d1 + k * d2 + (a - d1);
  return perm;
}

int level_of(const PaulsenSystem& ps, const Mat& p) { return ps.sys.level_of(p); }

Mat random_corner(const PaulsenSystem& ps, int n, Rng& rng) {
  Mat x = Mat::Zero(n * ps.v.rows(), n * ps.v.cols());
  for (const Mat& b : ps.v.basis()) x += kron(gaussian_mat(rng, n, n, ps.v.field()), b);
  return x;
}

// Random PSD n x n matrix of the given rank.
Mat random_psd(Rng& rng, int n, int rank, Field field) {
  const Mat g = gaussian_mat(rng, n, rank, field);
  return g * g.adjoint() / std::max(1, rank);
}

}  // namespace

OperatorSpaceRep OperatorSpaceRep::make(int rows, int cols, std::vector<Mat> basis, Field field) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("operator space: shape must be positive");
  RMat stacked(2 * rows * cols, basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Mat& b = basis[r];
    if (b.rows() != rows || b.cols() != cols) {
      throw std::invalid_argument("operator space: basis element " + std::to_string(r) + " is not " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (field == Field::Real && !is_real(b)) {
      throw std::invalid_argument("operator space: complex entries in a real space");
    }
    for (int i = 0; i < rows * cols; ++i) {
      stacked(2 * i, r) = b(i % rows, i / rows).real();
      stacked(2 * i + 1, r) = b(i % rows, i / rows).imag();
    }
  }
  if (!basis.empty()) {
    // Complex independence: also stack i*b for complex spaces.
    RMat test = stacked;
    if (field == Field::Complex) {
      test.resize(stacked.rows(), 2 * stacked.cols());
      for (Eigen::Index r = 0; r < stacked.cols(); ++r) {
        test.col(r) = stacked.col(r);
        for (Eigen::Index i = 0; i < stacked.rows() / 2; ++i) {
          test(2 * i, stacked.cols() + r) = -stacked(2 * i + 1, r);
          test(2 * i + 1, stacked.cols() + r) = stacked(2 * i, r);
        }
      }
    }
    Eigen::ColPivHouseholderQR<RMat> qr(test);
    qr.setThreshold(1e-10);
    if (qr.rank() != test.cols()) throw std::invalid_argument("operator space: basis is linearly dependent");
  }
  return OperatorSpaceRep(rows, cols, std::move(basis), field);
}

OperatorSpaceRep random_operator_space(Rng& rng, int d1, int d2, int dim, Field field) {
  std::vector<Mat> basis;
  for (int r = 0; r < dim; ++r) basis.push_back(gaussian_mat(rng, d1, d2, field));
  return OperatorSpaceRep::make(d1, d2, std::move(basis), field);
}

PaulsenSystem build_paulsen(const OperatorSpaceRep& v, int max_level) {
  const int d1 = v.rows(), d2 = v.cols(), d = d1 + d2;
  std::vector<Mat> gens;
  Mat top = Mat::Zero(d, d), bottom = Mat::Zero(d, d);
  top.topLeftCorner(d1, d1).setIdentity();
  bottom.bottomRightCorner(d2, d2).setIdentity();
  gens.push_back(top);
  gens.push_back(bottom);
  for (const Mat& b : v.basis()) {
    Mat c = Mat::Zero(d, d);
    c.topRightCorner(d1, d2) = b;
    gens.push_back(c);
    gens.push_back(c.adjoint());
  }
  const OperatorSystem sys = OperatorSystem::make(gens, v.field());
  std::vector<Mat> tau;
  for (const Mat& b : sys.basis()) {
    const cplx t = 0.5 * (b.topLeftCorner(d1, d1).trace() / double(d1) +
                          b.bottomRightCorner(d2, d2).trace() / double(d2));
    tau.push_back(Mat::Constant(1, 1, t));
  }
  BaseSpec base = BaseSpec::inherited(sys, DualElement(sys, std::move(tau)), max_level);
  return PaulsenSystem{v, sys, std::move(base)};
}

Mat to_corner_form(const PaulsenSystem& ps, const Mat& p) {
  const int n = level_of(ps, p);
  const auto perm = corner_permutation(n, ps.v.rows(), ps.v.cols());
  Mat c(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j) c(perm[i], perm[j]) = p(i, j);
  return c;
}

Mat from_corner_form(const PaulsenSystem& ps, const Mat& c) {
  const int n = level_of(ps, c);
  const auto perm = corner_permutation(n, ps.v.rows(), ps.v.cols());
  Mat p(c.rows(), c.cols());
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) p(i, j) = c(perm[i], perm[j]);
  return p;
}

Mat paulsen_element(const PaulsenSystem& ps, const Mat& lambda, const Mat& mu, const Mat& x, const Mat& y) {
  const int n = static_cast<int>(lambda.rows());
  const int d1 = ps.v.rows(), d2 = ps.v.cols();
  if (lambda.cols() != n || mu.rows() != n || mu.cols() != n || x.rows() != n * d1 || x.cols() != n * d2 ||
      y.rows() != x.rows() || y.cols() != x.cols()) {
    throw std::invalid_argument("paulsen_element: inconsistent block sizes");
  }
  Mat c(n * (d1 + d2), n * (d1 + d2));
  c << kron(lambda, Mat::Identity(d1, d1)), x, y.adjoint(), kron(mu, Mat::Identity(d2, d2));
  return from_corner_form(ps, c);
}

Mat paulsen_element(const PaulsenSystem& ps, const Mat& lambda, const Mat& mu, const Mat& x) {
  return paulsen_element(ps, lambda, mu, x, x);
}

PaulsenParts paulsen_parts(const PaulsenSystem& ps, const Mat& p, double tol) {
  const int n = level_of(ps, p), d1 = ps.v.rows(), d2 = ps.v.cols();
  const double scale = std::max(1.0, p.norm());
  if ((ps.sys.project_level(p) - p).norm() > tol * scale) {
    throw std::invalid_argument("paulsen_parts: element is not in M_n(S_V)");
  }
  const Mat c = to_corner_form(ps, p);
  PaulsenParts out;
  out.lambda.resize(n, n);
  out.mu.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      out.lambda(k, l) = c.block(k * d1, l * d1, d1, d1).trace() / double(d1);
      out.mu(k, l) = c.block(n * d1 + k * d2, n * d1 + l * d2, d2, d2).trace() / double(d2);
    }
  const Mat lam = kron(out.lambda, Mat::Identity(d1, d1));
  const Mat mu = kron(out.mu, Mat::Identity(d2, d2));
  if ((c.topLeftCorner(n * d1, n * d1) - lam).norm() > tol * scale ||
      (c.bottomRightCorner(n * d2, n * d2) - mu).norm() > tol * scale) {
    throw std::invalid_argument("paulsen_parts: diagonal blocks must be scalar multiples of the identity");
  }
  out.x = c.topRightCorner(n * d1, n * d2);
  out.y = c.bottomLeftCorner(n * d2, n * d1).adjoint();
  return out;
}

PositivityCheck positivity_formula_check(const PaulsenSystem& ps, const Mat& lambda, const Mat& mu,
                                         const Mat& x, Rng& rng, int random_pairs, double tol) {
  const int n = static_cast<int>(lambda.rows());
  const int d1 = ps.v.rows(), d2 = ps.v.cols();
  const Mat p = paulsen_element(ps, lambda, mu, x);
  const double scale = std::max(1.0, spectral_norm(p));
  const Mat lam = kron(lambda, Mat::Identity(d1, d1));
  const Mat m = kron(mu, Mat::Identity(d2, d2));

  PositivityCheck out;
  out.ambient_psd = min_eigenvalue(HermMat::symmetrized(p)) >= -tol * scale;

  // [[lam, x], [x^*, m]] >= 0 iff <lam eta, eta> >= 0, <m zeta, zeta> >= 0 and
  // |<x zeta, eta>|^2 <= <lam eta, eta> <m zeta, zeta> for every pair.
  double worst = -std::numeric_limits<double>::infinity();
  auto probe = [&](const Vec& zeta, const Vec& eta) {
    const double nz = zeta.norm(), ne = eta.norm();
    double v = -std::numeric_limits<double>::infinity();
    if (ne > 0) v = std::max(v, -(eta.dot(lam * eta)).real() / (ne * ne * scale));
    if (nz > 0) v = std::max(v, -(zeta.dot(m * zeta)).real() / (nz * nz * scale));
    if (nz > 0 && ne > 0) {
      const double cross = std::norm(eta.dot(x * zeta));
      const double prod = eta.dot(lam * eta).real() * zeta.dot(m * zeta).real();
      v = std::max(v, (cross - prod) / (nz * nz * ne * ne * scale * scale));
    }
    worst = std::max(worst, v);
    ++out.probes;
  };

  const HermMat lh = HermMat::symmetrized(lam), mh = HermMat::symmetrized(m);
  const EigenDecomposition le = herm_eig(lh), me = herm_eig(mh);
  for (Eigen::Index j = 0; j < le.vectors.cols(); ++j) {
    const Vec eta = le.vectors.col(j);
    Vec zeta = x.adjoint() * eta;
    if (zeta.norm() == 0) zeta = random_unit_vector(rng, n * d2, ps.v.field());
    probe(zeta, eta);
  }
  for (Eigen::Index j = 0; j < me.vectors.cols(); ++j) {
    const Vec zeta = me.vectors.col(j);
    Vec eta = x * zeta;
    if (eta.norm() == 0) eta = random_unit_vector(rng, n * d1, ps.v.field());
    probe(zeta, eta);
  }
  {
    const Mat z = pinv_sqrt(lh).mat() * x * pinv_sqrt(mh).mat();
    Eigen::JacobiSVD<Mat> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
    probe(pinv_sqrt(mh).mat() * svd.matrixV().col(0), pinv_sqrt(lh).mat() * svd.matrixU().col(0));
  }
  for (int r = 0; r < random_pairs; ++r) {
    probe(random_unit_vector(rng, n * d2, ps.v.field()), random_unit_vector(rng, n * d1, ps.v.field()));
  }
  out.worst_violation = worst;
  out.bilinear_holds = worst <= tol;
  out.agree = out.bilinear_holds == out.ambient_psd;
  if (n == 1 && out.ambient_psd) {
    const double bound = std::sqrt(std::max(0.0, lambda(0, 0).real() * mu(0, 0).real()));
    out.norm_bound_consistent = spectral_norm(x) <= bound + std::sqrt(tol) * scale;
  }
  return out;
}

Mat PaulsenDecomposition::reconstruct(const PaulsenSystem& ps) const {
  const int d1 = ps.v.rows(), d2 = ps.v.cols();
  const Mat a = kron(lambda_sqrt, Mat::Identity(d1, d1)), b = kron(mu_sqrt, Mat::Identity(d2, d2));
  const Mat corner = a * z * b;
  return paulsen_element(ps, lambda_sqrt * lambda_sqrt, mu_sqrt * mu_sqrt, corner, corner);
}

PaulsenDecomposition positive_decompose(const PaulsenSystem& ps, const Mat& p, double tol) {
  const PaulsenParts parts = paulsen_parts(ps, p);
  const double scale = std::max(1.0, spectral_norm(p));
  if (!is_hermitian(p, tol * scale) || min_eigenvalue(HermMat::symmetrized(p)) < -tol * scale) {
    throw std::invalid_argument("positive_decompose: element is not positive");
  }
  const int d1 = ps.v.rows(), d2 = ps.v.cols();
  const HermMat lam = HermMat::symmetrized(parts.lambda), mu = HermMat::symmetrized(parts.mu);
  PaulsenDecomposition out;
  out.lambda_sqrt = psd_sqrt(lam).mat();
  out.mu_sqrt = psd_sqrt(mu).mat();
  out.z = kron(pinv_sqrt(lam).mat(), Mat::Identity(d1, d1)) * parts.x *
          kron(pinv_sqrt(mu).mat(), Mat::Identity(d2, d2));
  return out;
}

Mat k1_candidate(const PaulsenSystem& ps, double lambda, const Mat& x) {
  return paulsen_element(ps, Mat::Constant(1, 1, lambda), Mat::Constant(1, 1, 2.0 - lambda), x);
}

bool k1_membership(const PaulsenSystem& ps, double lambda, const Mat& x, double tol) {
  if (x.rows() != ps.v.rows() || x.cols() != ps.v.cols()) {
    throw std::invalid_argument("k1_membership: corner has the wrong shape");
  }
  if (lambda < -tol || lambda > 2.0 + tol) return false;
  const double s = spectral_norm(x);
  return s * s <= lambda * (2.0 - lambda) + tol;
}

Mat random_base_element(const PaulsenSystem& ps, int n, Rng& rng) {
  const Field f = ps.v.field();
  const int shape = static_cast<int>(uniform(rng, 0.0, 4.0));
  const int rl = shape == 1 ? std::max(1, n - 1) : n;
  const int rm = shape == 2 ? std::max(1, n - 1) : n;
  const Mat lam = random_psd(rng, n, rl, f), mu = random_psd(rng, n, rm, f);
  Mat z = random_corner(ps, n, rng);
  const double zn = spectral_norm(z);
  if (zn > 0) z *= (shape == 3 ? 1.0 : uniform(rng)) / zn;
  const PaulsenDecomposition dec{psd_sqrt(HermMat::symmetrized(lam)).mat(),
                                 psd_sqrt(HermMat::symmetrized(mu)).mat(), z};
  const Mat p = dec.reconstruct(ps);
  return base_decompose(ps.base, p).k;
}

WitnessResult search_norm_witness(const PaulsenSystem& ps, int n, int restarts, double target, Rng& rng) {
  const int nd = n * ps.sys.ambient_dim();
  const ConeProvider& cone = ps.base.provider();
  WitnessResult best;
  for (int r = 0; r < restarts; ++r) {
    best.restarts_used = r + 1;
    Vec w = random_unit_vector(rng, nd, ps.v.field());
    double val = 0.0;
    Mat elem;
    for (int it = 0; it < 60; ++it) {
      conic::Problem p;
      const auto k = cone.encode_membership(p, n);
      HermRows rows(n, ps.v.field());
      rows.add_f1(ps.base, k);
      rows.commit(p, Mat::Identity(n, n));
      conic::LinearForm obj;
      k.add_functional(obj, w * w.adjoint(), -1.0);
      p.set_objective(std::move(obj));
      const conic::Solution s = conic::solve(p, kSolverTol);
      if (s.status != conic::Status::Optimal && s.status != conic::Status::Inaccurate) break;
      const Mat kv = cone.fragment_value(k, s);
      const EigenDecomposition e = herm_eig(HermMat::symmetrized(kv));
      const Eigen::Index top = e.values.size() - 1;
      const double nv = std::max(std::abs(e.values(0)), std::abs(e.values(top)));
      if (nv <= val * (1.0 + 1e-10)) break;
      val = nv;
      elem = kv;
      w = e.vectors.col(std::abs(e.values(top)) >= std::abs(e.values(0)) ? top : 0);
    }
    if (val > best.norm) {
      best.norm = val;
      best.element = elem;
    }
    if (best.norm >= target) break;
  }
  return best;
}

Report verify_equivalence(const PaulsenSystem& ps, const EquivalenceOptions& opt, Rng& rng) {
  Report rep;
  for (int n : opt.levels) {
    double low = -std::numeric_limits<double>::infinity(), high = low;
    double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
    double base_norm = 0.0;
    int failures = 0;
    for (int s = 0; s < opt.samples; ++s) {
      const Mat u = random_element(rng, ps.sys, n);
      try {
        const double t = nc_base_norm(ps.base, u).value;
        const double a = spectral_norm(u);
        low = std::max(low, 0.5 * t - a);
        high = std::max(high, a - 4.0 * t);
        min_ratio = std::min(min_ratio, a / t);
        max_ratio = std::max(max_ratio, a / t);
      } catch (const NumericalError&) {
        ++failures;
      }
      base_norm = std::max(base_norm, spectral_norm(random_base_element(ps, n, rng)));
    }
    const std::string pre = "level" + std::to_string(n) + "/";
    rep.check_le(pre + "half_tau_norm_minus_norm", low, 0.0, opt.tol);
    rep.check_le(pre + "norm_minus_four_tau_norm", high, 0.0, opt.tol);
    rep.check_ge(pre + "min_norm_ratio", min_ratio, 0.5, opt.tol);
    rep.check_le(pre + "max_norm_ratio", max_ratio, 4.0, opt.tol);
    rep.check_le(pre + "sampled_base_element_norm", base_norm, 4.0, opt.base_norm_tol);
    rep.check_le(pre + "solver_failures", failures, 0.0, 0.0);
  }
  if (opt.witness_restarts > 0) {
    const WitnessResult w = search_norm_witness(ps, 2, opt.witness_restarts, 4.0 - 0.1 * opt.witness_tol, rng);
    rep.check_ge("level2/witness_norm", w.norm, 4.0, opt.witness_tol);
    rep.check_le("level2/witness_norm_upper", w.norm, 4.0, opt.base_norm_tol);
    const bool in_base = w.element.size() > 0 && ps.base.in_base(0.5 * (w.element + w.element.adjoint()), 1e-6);
    rep.check_ge("level2/witness_in_base", in_base ? 1.0 : 0.0, 1.0, 0.0);
  }
  return rep;
}

}  // namespace ncbase
