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

// Concrete operator systems: unital selfadjoint subspaces S of M_d.
//
// Elements of M_n(S) are stored as ambient matrices in M_{nd} with the level
// index outer: block (k, l) of size d x d is the (k, l) entry of the element.

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ncbase/matcore.hpp"

namespace ncbase {

class OperatorSystem {
 public:
  /// Validates and completes a generating set: adjoints are adjoined,
  /// dependent generators dropped, and the unit must lie in the span.
  /// Throws std::invalid_argument on failure.
  static OperatorSystem make(const std::vector<Mat>& generators, Field field);

  Field field() const { return d_->field; }
  int ambient_dim() const { return d_->d; }
  int dim() const { return static_cast<int>(d_->basis.size()); }
  const std::vector<Mat>& basis() const { return d_->basis; }
  const Vec& unit_coords() const { return d_->unit; }

  /// HS-orthonormal basis of S.
  const std::vector<Mat>& orthonormal_basis() const { return d_->orthonormal; }

  /// b_r^* = sum_s adjoint_map()(s, r) b_s.
  const Mat& adjoint_map() const { return d_->adj; }

  Mat combine(const Vec& coeffs) const;
  /// Coordinates of the orthogonal projection of `a` onto S.
  Vec coords(const Mat& a) const;
  Mat project(const Mat& a) const;
  /// Frobenius distance from `a` to S.
  double span_residual(const Mat& a) const;

  /// Blockwise projection of x in M_{nd} onto M_n(S).
  Mat project_level(const Mat& x) const;
  /// Matrix level of an ambient matrix; throws if the size is not a multiple of d.
  int level_of(const Mat& x) const;

  /// Real-orthonormal basis (for Re Tr(a^* b)) of M_n(S)_sa.
  const std::vector<Mat>& herm_basis(int n) const;
  /// Real-orthonormal basis of M_n(S^perp)_sa; together with herm_basis(n) it
  /// spans all selfadjoint matrices of order nd over the field.
  const std::vector<Mat>& herm_complement_basis(int n) const;

  /// Coordinates of a selfadjoint x in M_n(S) against herm_basis(n).
  RVec herm_coords(const Mat& x) const;
  Mat from_herm_coords(const RVec& c, int n) const;

 private:
  struct Data {
    Field field = Field::Complex;
    int d = 0;
    std::vector<Mat> basis;
    std::vector<Mat> orthonormal;  // HS-orthonormal basis of S
    std::vector<Mat> complement;   // HS-orthonormal basis of S^perp
    Mat gram_inv;
    Vec unit;
    Mat adj;
    mutable std::mutex cache_mu;
    mutable std::map<int, std::vector<Mat>> herm, herm_perp;
  };
  std::shared_ptr<Data> d_;
};

/// An element of M_n(S).
class SysElement {
 public:
  /// One n x n coefficient matrix per basis element of `sys`.
  SysElement(OperatorSystem sys, std::vector<Mat> coefficients);

  /// Throws std::invalid_argument if x is farther than `tol * max(1, |x|)`
  /// from M_n(S).
  static SysElement from_ambient(const OperatorSystem& sys, const Mat& x, double tol = 1e-8);
  static SysElement unit(const OperatorSystem& sys, int n);

  const OperatorSystem& system() const { return sys_; }
  int level() const { return n_; }
  const std::vector<Mat>& coefficients() const { return coeffs_; }
  const Mat& ambient() const { return ambient_; }

  SysElement adjoint() const;
  bool is_selfadjoint(double tol = kHermitianCheckTol) const { return is_hermitian(ambient_, tol); }

 private:
  OperatorSystem sys_;
  int n_ = 0;
  std::vector<Mat> coeffs_;
  Mat ambient_;
};

/// Membership in the inherited cone M_n(S)_+ = M_n(S) cap PSD.
/// Throws std::invalid_argument if x is not selfadjoint.
bool is_positive(const SysElement& x, double tol = kPsdTol);

/// inf{t : -t 1 <= x <= t 1}; the spectral norm of the ambient matrix.
double order_unit_norm(const SysElement& x);

/// Order unit norm of the selfadjoint dilation at level 2n.
double matrix_norm(const SysElement& x);

/// True iff the functional with the given values on the basis is unital and
/// positive on S (certified by a conic feasibility problem).
bool is_state(const OperatorSystem& sys, const Vec& values, double tol = 1e-7);

}  // namespace ncbase
