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

#include "ncbase/cones.hpp"

#include <algorithm>
#include <cmath>

#include "ncbase/random.hpp"

namespace ncbase {

namespace {

cplx hs(const Mat& a, const Mat& b) { return (a.array().conjugate() * b.array()).sum(); }

constexpr double kSolverTol = 1e-9;
constexpr double kInaccurateUsable = 1e-6;

}  // namespace

const char* to_string(ConeKind k) { return k == ConeKind::Inherited ? "inherited" : "dual_cp"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

DualElement::DualElement(OperatorSystem sys, std::vector<Mat> values)
    : sys_(std::move(sys)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != sys_.dim()) {
    throw std::invalid_argument("DualElement: expected " + std::to_string(sys_.dim()) +
                                " values, got " + std::to_string(values_.size()));
  }
  n_ = static_cast<int>(values_.front().rows());
  for (const Mat& v : values_) {
    if (v.rows() != n_ || v.cols() != n_) {
      throw std::invalid_argument("DualElement: values must all be square of one size");
    }
    if (sys_.field() == Field::Real && !is_real(v, 1e-12)) {
      throw std::invalid_argument("DualElement: complex values over a real-field system");
    }
  }
  const int d = sys_.ambient_dim();
  rep_ = Mat::Zero(n_ * d, n_ * d);
  for (const Mat& q : sys_.orthonormal_basis()) {
    const Mat a = apply(q);
    for (int k = 0; k < n_; ++k)
      for (int l = 0; l < n_; ++l) rep_.block(k * d, l * d, d, d) += std::conj(a(k, l)) * q;
  }
}

DualElement DualElement::from_representer(const OperatorSystem& sys, const Mat& r) {
  const int n = sys.level_of(r), d = sys.ambient_dim();
  std::vector<Mat> values(sys.dim(), Mat::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const Mat blk = block_of(r, d, k, l);
      for (int s = 0; s < sys.dim(); ++s) values[s](k, l) = hs(blk, sys.basis()[s]);
    }
  if (sys.field() == Field::Real) {
    for (Mat& v : values) v = v.real().cast<cplx>();
  }
  return DualElement(sys, std::move(values));
}

Mat DualElement::apply(const Mat& a) const {
  const Vec c = sys_.coords(a);
  Mat out = Mat::Zero(n_, n_);
  for (int r = 0; r < sys_.dim(); ++r) out += c(r) * values_[r];
  return out;
}

Mat DualElement::amplify(const Mat& x) const {
  const int k = sys_.level_of(x), d = sys_.ambient_dim();
  Mat out(k * n_, k * n_);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) out.block(i * n_, j * n_, n_, n_) = apply(block_of(x, d, i, j));
  return out;
}

DualElement DualElement::adjoint() const {
  const Mat& a = sys_.adjoint_map();
  std::vector<Mat> out;
  for (int r = 0; r < sys_.dim(); ++r) {
    Mat v = Mat::Zero(n_, n_);
    for (int s = 0; s < sys_.dim(); ++s) v += a(s, r) * values_[s];
    out.push_back(v.adjoint());
  }
  if (sys_.field() == Field::Real) {
    for (Mat& v : out) v = v.real().cast<cplx>();
  }
  return DualElement(sys_, std::move(out));
}

bool DualElement::is_selfadjoint(double tol) const { return is_hermitian(rep_, tol); }

cplx pairing(const DualElement& phi, const Mat& x) {
  if (x.rows() != phi.representer().rows() || x.cols() != phi.representer().cols()) {
    throw std::invalid_argument("pairing: level mismatch");
  }
  return hs(phi.representer(), x);
}

ConeProvider::ConeProvider(ConeKind kind, OperatorSystem sys, int max_level)
    : kind_(kind), sys_(std::move(sys)), max_level_(max_level) {
  if (max_level < 1) throw std::invalid_argument("ConeProvider: max_level must be positive");
}

int ConeProvider::level_of(const Mat& x) const {
  const int n = sys_.level_of(x);
  check_level(n);
  return n;
}

void ConeProvider::check_level(int n) const {
  if (n < 1 || n > max_level_) {
    throw std::invalid_argument("matrix level " + std::to_string(n) + " outside [1, " +
                                std::to_string(max_level_) + "]");
  }
}

void ConeProvider::check_selfadjoint(const Mat& x, const char* who) const {
  level_of(x);
  if (!is_hermitian(x)) {
    throw std::invalid_argument(std::string(who) + ": element is not selfadjoint");
  }
  const double res = (x - sys_.project_level(x)).norm();
  if (res > 1e-8 * std::max(1.0, x.norm())) {
    throw std::invalid_argument(std::string(who) + ": matrix is not in M_n(S) (residual " +
                                std::to_string(res) + ")");
  }
}

ConeProvider::Fragment ConeProvider::encode_membership(conic::Problem& p, int n) const {
  check_level(n);
  Fragment f;
  f.level = n;
  f.var = conic::HermVar::create(p, n * sys_.ambient_dim(), sys_.field());
  if (kind_ == ConeKind::Inherited) {
    for (const Mat& e : sys_.herm_complement_basis(n)) {
      conic::LinearForm form;
      f.add_functional(form, e);
      p.add_equality(std::move(form), 0.0);
    }
  }
  return f;
}

Mat ConeProvider::fragment_value(const Fragment& f, const conic::Solution& s) const {
  return sys_.project_level(f.var.value(s));
}

MemberResult ConeProvider::is_member(const Mat& x, double tol) const {
  check_selfadjoint(x, "is_member");
  const int n = level_of(x);
  const int nd = n * sys_.ambient_dim();
  conic::Problem p;
  const Fragment f = encode_membership(p, n);
  const int s = p.add_free(1);
  const Mat id = Mat::Identity(nd, nd);
  for (const Mat& e : sys_.herm_basis(n)) {
    conic::LinearForm form;
    f.add_functional(form, e);
    form.add_scalar(s, 0, -real_inner(e, id));
    p.add_equality(std::move(form), real_inner(e, x));
  }
  conic::LinearForm obj;
  obj.add_scalar(s, 0, 1.0);
  p.set_objective(std::move(obj));
  const conic::Solution sol = conic::solve(p, kSolverTol);

  MemberResult r;
  r.status = sol.status;
  if (sol.status != conic::Status::Optimal && sol.status != conic::Status::Inaccurate) return r;
  r.margin = sol.primal_objective;
  if (sol.status == conic::Status::Inaccurate) {
    // Nearly repeated eigenvalues at the optimum can stall the last digits.
    // The answer still stands when the margin is far outside the error.
    const double err = std::max({sol.gap, sol.primal_residual, sol.dual_residual});
    if (err > kInaccurateUsable || std::abs(r.margin - tol) <= 100.0 * err * (1.0 + std::abs(r.margin))) return r;
  }
  r.verdict = r.margin <= tol ? Verdict::Yes : Verdict::No;
  const Mat z = f.var.value(sol);
  r.certificate = kind_ == ConeKind::Inherited ? Mat(x) : Mat(z - r.margin * id);
  return r;
}

Mat ConeProvider::multiply(const Mat& alpha, const Mat& x, const Mat& beta) const {
  const int n = sys_.level_of(x), d = sys_.ambient_dim();
  if (alpha.cols() != n || beta.rows() != n) {
    throw std::invalid_argument("multiply: scalar matrices do not match level " + std::to_string(n));
  }
  const Mat id = Mat::Identity(d, d);
  if (kind_ == ConeKind::Inherited) return kron(alpha, id) * x * kron(beta, id);
  return kron(alpha.conjugate(), id) * x * kron(beta.conjugate(), id);
}

BaseSpec BaseSpec::dual_cp(const OperatorSystem& sys, int max_level) {
  return BaseSpec(ConeProvider(ConeKind::DualCP, sys, max_level), Mat());
}

BaseSpec BaseSpec::inherited(const OperatorSystem& sys, const DualElement& f1, int max_level) {
  if (f1.level() != 1) throw std::invalid_argument("BaseSpec: f1 must be scalar valued");
  if (!f1.is_selfadjoint()) throw std::invalid_argument("BaseSpec: f1 must be selfadjoint");
  return BaseSpec(ConeProvider(ConeKind::Inherited, sys, max_level), f1.representer());
}

BaseSpec BaseSpec::inherited_trace(const OperatorSystem& sys, int max_level) {
  const int d = sys.ambient_dim();
  const Mat rho = sys.project(Mat::Identity(d, d) / double(d));
  return BaseSpec(ConeProvider(ConeKind::Inherited, sys, max_level), rho);
}

Mat BaseSpec::f1(const Mat& x) const {
  const int n = system().level_of(x), d = system().ambient_dim();
  Mat out(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const Mat blk = block_of(x, d, k, l);
      out(k, l) = provider_.kind() == ConeKind::Inherited ? hs(rho_, blk) : std::conj(blk.trace());
    }
  return out;
}

Mat BaseSpec::f1_functional(int n, int k, int l) const {
  const int d = system().ambient_dim();
  if (provider_.kind() == ConeKind::Inherited) return kron(elementary(n, n, k, l), rho_);
  return kron(elementary(n, n, l, k), Mat::Identity(d, d));
}

double BaseSpec::f1_unit() const {
  const int d = system().ambient_dim();
  return f1(Mat::Identity(d, d))(0, 0).real();
}

Mat BaseSpec::reference_point(int n) const {
  const int d = system().ambient_dim();
  return Mat::Identity(n * d, n * d) / f1_unit();
}

bool BaseSpec::in_base(const Mat& x, double tol) const {
  const MemberResult m = provider_.is_member(x, tol);
  if (m.verdict != Verdict::Yes) return false;
  const Mat f = f1(x);
  return spectral_norm(f - Mat::Identity(f.rows(), f.cols())) <= tol;
}

double BaseSpec::strict_positivity_margin() const {
  const int d = system().ambient_dim();
  conic::Problem p;
  const auto f = provider_.encode_membership(p, 1);
  conic::LinearForm tr;
  f.add_functional(tr, Mat::Identity(d, d));
  p.add_equality(std::move(tr), 1.0);
  conic::LinearForm obj;
  f.add_functional(obj, f1_functional(1, 0, 0));
  p.set_objective(std::move(obj));
  const conic::Solution s = conic::solve(p, kSolverTol);
  if (s.status != conic::Status::Optimal) {
    throw NumericalError(std::string("strict positivity certificate: solver returned ") +
                         conic::to_string(s.status));
  }
  return s.primal_objective;
}

HermRows::HermRows(int n, Field field) : n_(n) {
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      rows_.push_back({k, l, false, {}});
      if (field == Field::Complex && l > k) rows_.push_back({k, l, true, {}});
    }
}

void HermRows::add_f1(const BaseSpec& b, const ConeProvider::Fragment& f, double scale) {
  if (f.level != n_) throw std::invalid_argument("HermRows: fragment level mismatch");
  const cplx i(0, 1);
  for (Row& r : rows_) {
    const Mat fun = b.f1_functional(n_, r.k, r.l);
    f.add_functional(r.form, r.imag ? Mat(i * fun) : fun, scale);
  }
}

void HermRows::add_var(const conic::HermVar& v, double scale) {
  if (v.size() != n_) throw std::invalid_argument("HermRows: variable size mismatch");
  const cplx i(0, 1);
  for (Row& r : rows_) {
    const Mat e = elementary(n_, n_, r.k, r.l);
    v.add_to(r.form, r.imag ? Mat(-i * e) : e, scale);
  }
}

void HermRows::add_scalar(int block, int entry, const Mat& m, double scale) {
  for (Row& r : rows_) {
    const double c = r.imag ? m(r.k, r.l).imag() : m(r.k, r.l).real();
    if (c != 0.0) r.form.add_scalar(block, entry, scale * c);
  }
}

void HermRows::commit(conic::Problem& p, const Mat& rhs) {
  for (Row& r : rows_) {
    p.add_equality(std::move(r.form), r.imag ? rhs(r.k, r.l).imag() : rhs(r.k, r.l).real());
  }
  rows_.clear();
}

void add_coord_equalities(conic::Problem& p, const OperatorSystem& sys,
                          const std::vector<std::pair<const ConeProvider::Fragment*, double>>& terms,
                          const RVec& rhs) {
  if (terms.empty()) throw std::invalid_argument("add_coord_equalities: no terms");
  const int n = terms.front().first->level;
  const auto& e = sys.herm_basis(n);
  if (rhs.size() != static_cast<Eigen::Index>(e.size())) {
    throw std::invalid_argument("add_coord_equalities: coordinate count mismatch");
  }
  for (size_t q = 0; q < e.size(); ++q) {
    conic::LinearForm form;
    for (const auto& [f, scale] : terms) f->add_functional(form, e[q], scale);
    p.add_equality(std::move(form), rhs(q));
  }
}

namespace {

// min <<x, Y>> over trace-one members Y of `provider` at the level of x.
double min_pairing(const ConeProvider& provider, const Mat& x, conic::Status& status) {
  const int n = provider.level_of(x), nd = x.rows();
  conic::Problem p;
  const auto f = provider.encode_membership(p, n);
  conic::LinearForm tr;
  f.add_functional(tr, Mat::Identity(nd, nd));
  p.add_equality(std::move(tr), 1.0);
  conic::LinearForm obj;
  f.add_functional(obj, x);
  p.set_objective(std::move(obj));
  const conic::Solution s = conic::solve(p, kSolverTol);
  status = s.status;
  return s.primal_objective;
}

double signed_offset(Rng& rng) {
  const double mag = std::pow(10.0, uniform(rng, -5.0, 0.0));
  return uniform(rng) < 0.5 ? -mag : mag;
}

}  // namespace

BipolarReport bipolar_check(const OperatorSystem& sys, int n, int samples, double tol, Rng& rng) {
  const ConeProvider inherited(ConeKind::Inherited, sys, std::max(4, n));
  const ConeProvider dual(ConeKind::DualCP, sys, std::max(4, n));
  const int nd = n * sys.ambient_dim();
  const Mat id = Mat::Identity(nd, nd);
  BipolarReport rep;
  rep.samples = samples;

  for (int i = 0; i < samples; ++i) {
    // Element side: x >= 0 versus nonnegative pairing with every CP map.
    {
      Mat x = random_selfadjoint(rng, sys, n);
      const double lmin = min_eigenvalue(HermMat::symmetrized(x));
      x += (signed_offset(rng) - lmin) * id;
      x = 0.5 * (x + x.adjoint());
      BipolarRecord rec;
      rec.side = "element";
      rec.sample = i;
      rec.direct_margin = min_eigenvalue(HermMat::symmetrized(x));
      rec.direct = rec.direct_margin >= -tol;
      conic::Status st;
      rec.dual_margin = min_pairing(dual, x, st);
      rec.via_dual = rec.dual_margin >= -tol;
      if (st != conic::Status::Optimal) {
        ++rep.indeterminate;
      } else if (rec.direct != rec.via_dual) {
        rep.disagreements.push_back(rec);
      }
      rep.records.push_back(rec);
    }
    // Functional side: phi CP versus nonnegative pairing with M_n(S)_+.
    {
      Mat r = random_selfadjoint(rng, sys, n);
      const MemberResult m0 = dual.is_member(r, tol);
      BipolarRecord rec;
      rec.side = "functional";
      rec.sample = i;
      if (m0.status != conic::Status::Optimal) {
        ++rep.indeterminate;
        rep.records.push_back(rec);
        continue;
      }
      r += (m0.margin + signed_offset(rng)) * id;
      r = 0.5 * (r + r.adjoint());
      const MemberResult m = dual.is_member(r, tol);
      rec.direct_margin = -m.margin;
      rec.direct = m.verdict == Verdict::Yes;
      conic::Status st;
      rec.dual_margin = min_pairing(inherited, r, st);
      rec.via_dual = rec.dual_margin >= -tol;
      if (m.status != conic::Status::Optimal || st != conic::Status::Optimal) {
        ++rep.indeterminate;
      } else if (rec.direct != rec.via_dual) {
        rep.disagreements.push_back(rec);
      }
      rep.records.push_back(rec);
    }
  }
  return rep;
}

}  // namespace ncbase
