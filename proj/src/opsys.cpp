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

#include "ncbase/opsys.hpp"

#include <algorithm>
#include <cmath>

#include "ncbase/cones.hpp"

namespace ncbase {

namespace {

constexpr double kSpanTol = 1e-10;

cplx hs(const Mat& a, const Mat& b) { return (a.array().conjugate() * b.array()).sum(); }

// Gram-Schmidt against `basis` (assumed orthonormal); returns the residual.
Mat residual(const Mat& a, const std::vector<Mat>& basis) {
  Mat r = a;
  for (int pass = 0; pass < 2; ++pass)
    for (const Mat& q : basis) r -= hs(q, r) * q;
  return r;
}

// Real Gram-Schmidt for Re Tr(a^* b).
void add_real_orthonormal(std::vector<Mat>& out, Mat a) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Mat& q : out) a -= real_inner(q, a) * q;
  const double nrm = a.norm();
  if (nrm > kSpanTol) out.push_back(a / nrm);
}

// Real-orthonormal basis of M_n(T)_sa for a selfadjoint subspace T spanned by
// `span`. The level-1 building blocks are the Hermitian and anti-Hermitian
// parts of T; (E_kl +- E_lk) (x) part covers the off-diagonal positions.
std::vector<Mat> sa_level_basis(const std::vector<Mat>& span, int n, Field field) {
  std::vector<Mat> herm, anti;
  const cplx i(0, 1);
  for (const Mat& g : span) {
    add_real_orthonormal(herm, 0.5 * (g + g.adjoint()));
    if (field == Field::Complex) {
      add_real_orthonormal(herm, (g - g.adjoint()) / (2.0 * i));
    } else {
      add_real_orthonormal(anti, 0.5 * (g - g.adjoint()));
    }
  }
  if (field == Field::Complex) {
    for (const Mat& h : herm) anti.push_back(i * h);
  }
  std::vector<Mat> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < n; ++k)
    for (const Mat& h : herm) out.push_back(kron(elementary(n, n, k, k), h));
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const Mat sym = elementary(n, n, k, l) + elementary(n, n, l, k);
      const Mat skew = elementary(n, n, k, l) - elementary(n, n, l, k);
      for (const Mat& h : herm) out.push_back(s * kron(sym, h));
      for (const Mat& a : anti) out.push_back(s * kron(skew, a));
    }
  }
  return out;
}

}  // namespace

OperatorSystem OperatorSystem::make(const std::vector<Mat>& generators, Field field) {
  if (generators.empty()) throw std::invalid_argument("make_opsys: empty generating set");
  const Eigen::Index d = generators.front().rows();
  if (d == 0) throw std::invalid_argument("make_opsys: zero-size matrices");
  for (const Mat& g : generators) {
    if (g.rows() != d || g.cols() != d) {
      throw std::invalid_argument("make_opsys: generators must all be " + std::to_string(d) + "x" +
                                  std::to_string(d));
    }
    if (field == Field::Real && !is_real(g, 1e-12)) {
      throw std::invalid_argument("make_opsys: real-field system with a non-real generator");
    }
  }

  auto data = std::make_shared<Data>();
  data->field = field;
  data->d = static_cast<int>(d);

  std::vector<Mat> candidates;
  for (const Mat& g : generators) candidates.push_back(field == Field::Real ? Mat(g.real().cast<cplx>()) : g);
  for (size_t i = 0; i < generators.size(); ++i) candidates.push_back(candidates[i].adjoint());

  for (const Mat& g : candidates) {
    const double nrm = g.norm();
    if (nrm == 0) continue;
    const Mat r = residual(g, data->orthonormal);
    if (r.norm() > kSpanTol * std::max(1.0, nrm)) {
      data->basis.push_back(g);
      data->orthonormal.push_back(r / r.norm());
    }
  }
  if (data->basis.empty()) throw std::invalid_argument("make_opsys: generators span the zero space");

  const Mat id = Mat::Identity(d, d);
  const double unit_res = residual(id, data->orthonormal).norm();
  if (unit_res > kSpanTol * std::sqrt(double(d))) {
    throw std::invalid_argument("make_opsys: identity is not in the span (residual " +
                                std::to_string(unit_res) + ")");
  }

  const int m = static_cast<int>(data->basis.size());
  Mat gram(m, m);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) gram(r, s) = hs(data->basis[r], data->basis[s]);
  data->gram_inv = gram.inverse();

  OperatorSystem sys;
  sys.d_ = data;
  data->unit = sys.coords(id);
  data->adj.resize(m, m);
  for (int r = 0; r < m; ++r) data->adj.col(r) = sys.coords(data->basis[r].adjoint());

  // Orthonormal complement in M_d over the field.
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      std::vector<Mat> all = data->orthonormal;
      all.insert(all.end(), data->complement.begin(), data->complement.end());
      const Mat r = residual(elementary(d, d, i, j), all);
      if (r.norm() > 1e-8) data->complement.push_back(r / r.norm());
    }
  }
  return sys;
}

Mat OperatorSystem::combine(const Vec& coeffs) const {
  if (coeffs.size() != dim()) throw std::invalid_argument("combine: coefficient count mismatch");
  Mat out = Mat::Zero(d_->d, d_->d);
  for (int r = 0; r < dim(); ++r) out += coeffs(r) * d_->basis[r];
  return out;
}

Vec OperatorSystem::coords(const Mat& a) const {
  if (a.rows() != d_->d || a.cols() != d_->d) throw std::invalid_argument("coords: size mismatch");
  Vec rhs(dim());
  for (int r = 0; r < dim(); ++r) rhs(r) = hs(d_->basis[r], a);
  return d_->gram_inv * rhs;
}

Mat OperatorSystem::project(const Mat& a) const {
  Mat out = Mat::Zero(d_->d, d_->d);
  for (const Mat& q : d_->orthonormal) out += hs(q, a) * q;
  return out;
}

double OperatorSystem::span_residual(const Mat& a) const { return (a - project(a)).norm(); }

int OperatorSystem::level_of(const Mat& x) const {
  const int d = d_->d;
  if (x.rows() != x.cols() || x.rows() % d != 0 || x.rows() == 0) {
    throw std::invalid_argument("matrix of size " + std::to_string(x.rows()) + "x" +
                                std::to_string(x.cols()) + " is not a level of ambient dimension " +
                                std::to_string(d));
  }
  return static_cast<int>(x.rows() / d);
}

Mat OperatorSystem::project_level(const Mat& x) const {
  const int n = level_of(x), d = d_->d;
  Mat out(x.rows(), x.cols());
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) out.block(k * d, l * d, d, d) = project(block_of(x, d, k, l));
  return out;
}

const std::vector<Mat>& OperatorSystem::herm_basis(int n) const {
  if (n < 1) throw std::invalid_argument("herm_basis: level must be positive");
  std::lock_guard<std::mutex> lock(d_->cache_mu);
  auto& slot = d_->herm[n];
  if (slot.empty()) slot = sa_level_basis(d_->orthonormal, n, d_->field);
  return slot;
}

const std::vector<Mat>& OperatorSystem::herm_complement_basis(int n) const {
  if (n < 1) throw std::invalid_argument("herm_complement_basis: level must be positive");
  std::lock_guard<std::mutex> lock(d_->cache_mu);
  auto& slot = d_->herm_perp[n];
  if (slot.empty() && !d_->complement.empty()) {
    slot = sa_level_basis(d_->complement, n, d_->field);
  }
  return slot;
}

RVec OperatorSystem::herm_coords(const Mat& x) const {
  const auto& e = herm_basis(level_of(x));
  RVec c(e.size());
  for (size_t q = 0; q < e.size(); ++q) c(q) = real_inner(e[q], x);
  return c;
}

Mat OperatorSystem::from_herm_coords(const RVec& c, int n) const {
  const auto& e = herm_basis(n);
  if (c.size() != static_cast<Eigen::Index>(e.size())) {
    throw std::invalid_argument("from_herm_coords: coordinate count mismatch");
  }
  Mat out = Mat::Zero(n * d_->d, n * d_->d);
  for (size_t q = 0; q < e.size(); ++q) out += c(q) * e[q];
  return out;
}

SysElement::SysElement(OperatorSystem sys, std::vector<Mat> coefficients)
    : sys_(std::move(sys)), coeffs_(std::move(coefficients)) {
  if (static_cast<int>(coeffs_.size()) != sys_.dim()) {
    throw std::invalid_argument("SysElement: expected " + std::to_string(sys_.dim()) +
                                " coefficient matrices, got " + std::to_string(coeffs_.size()));
  }
  n_ = static_cast<int>(coeffs_.front().rows());
  const int d = sys_.ambient_dim();
  ambient_ = Mat::Zero(n_ * d, n_ * d);
  for (int r = 0; r < sys_.dim(); ++r) {
    if (coeffs_[r].rows() != n_ || coeffs_[r].cols() != n_) {
      throw std::invalid_argument("SysElement: coefficient matrices must all be square of one size");
    }
    if (sys_.field() == Field::Real && !is_real(coeffs_[r], 1e-12)) {
      throw std::invalid_argument("SysElement: complex coefficients in a real-field system");
    }
    ambient_ += kron(coeffs_[r], sys_.basis()[r]);
  }
}

SysElement SysElement::from_ambient(const OperatorSystem& sys, const Mat& x, double tol) {
  const int n = sys.level_of(x), d = sys.ambient_dim();
  std::vector<Mat> coeffs(sys.dim(), Mat::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const Mat blk = block_of(x, d, k, l);
      const Vec c = sys.coords(blk);
      for (int r = 0; r < sys.dim(); ++r) coeffs[r](k, l) = c(r);
    }
  }
  if (sys.field() == Field::Real) {
    for (Mat& c : coeffs) c = c.real().cast<cplx>();
  }
  SysElement e(sys, std::move(coeffs));
  const double res = (e.ambient_ - x).norm();
  if (res > tol * std::max(1.0, x.norm())) {
    throw std::invalid_argument("SysElement::from_ambient: matrix is not in M_n(S) (residual " +
                                std::to_string(res) + ")");
  }
  return e;
}

SysElement SysElement::unit(const OperatorSystem& sys, int n) {
  std::vector<Mat> coeffs;
  for (int r = 0; r < sys.dim(); ++r) coeffs.push_back(sys.unit_coords()(r) * Mat::Identity(n, n));
  return SysElement(sys, std::move(coeffs));
}

SysElement SysElement::adjoint() const {
  const Mat& a = sys_.adjoint_map();
  std::vector<Mat> out(coeffs_.size(), Mat::Zero(n_, n_));
  for (int s = 0; s < sys_.dim(); ++s)
    for (int r = 0; r < sys_.dim(); ++r)
      if (a(s, r) != 0.0) out[s] += a(s, r) * coeffs_[r].adjoint();
  if (sys_.field() == Field::Real) {
    for (Mat& c : out) c = c.real().cast<cplx>();
  }
  return SysElement(sys_, std::move(out));
}

bool is_positive(const SysElement& x, double tol) {
  if (!x.is_selfadjoint()) throw std::invalid_argument("is_positive: element is not selfadjoint");
  return is_psd(HermMat(x.ambient()), tol);
}

double order_unit_norm(const SysElement& x) {
  if (!x.is_selfadjoint()) throw std::invalid_argument("order_unit_norm: element is not selfadjoint");
  const EigenDecomposition ed = herm_eig(HermMat(x.ambient()));
  return std::max(std::abs(ed.values(0)), std::abs(ed.values(ed.values.size() - 1)));
}

double matrix_norm(const SysElement& x) {
  const SysElement t = SysElement::from_ambient(x.system(), tilde(x.ambient()).mat());
  return order_unit_norm(t);
}

bool is_state(const OperatorSystem& sys, const Vec& values, double tol) {
  if (values.size() != sys.dim()) throw std::invalid_argument("is_state: value count mismatch");
  const cplx phi1 = (values.array() * sys.unit_coords().array()).sum();
  if (std::abs(phi1 - 1.0) > tol) return false;
  std::vector<Mat> vals;
  for (int r = 0; r < sys.dim(); ++r) vals.push_back(Mat::Constant(1, 1, values(r)));
  const DualElement phi(sys, std::move(vals));
  if (!phi.is_selfadjoint(tol)) return false;
  const ConeProvider cp(ConeKind::DualCP, sys);
  return cp.is_member(phi.representer(), tol).verdict == Verdict::Yes;
}

}  // namespace ncbase
