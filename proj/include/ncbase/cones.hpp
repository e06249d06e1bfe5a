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

// Matrix cones over a concrete operator system S in M_d.
//
// Both cone kinds act on selfadjoint matrices X in M_n(S) of order nd:
//   Inherited   X is the ambient matrix of an element of M_n(S); the cone is
//               M_n(S) cap PSD.
//   DualCP      X is the representer R of a map phi : S -> M_n with
//               phi(a)_kl = Tr(R_kl^* a); the cone (completely positive maps)
//               is the projection onto M_n(S) of the PSD cone, i.e. phi is CP
//               iff it has a PSD extension to M_d.
// The two cones are dual to each other under Re Tr(R^* X).

#pragma once

#include <random>
#include <string>
#include <vector>

#include "ncbase/conic.hpp"
#include "ncbase/opsys.hpp"

namespace ncbase {

enum class ConeKind { Inherited, DualCP };
enum class Verdict { Yes, No, Indeterminate };

const char* to_string(ConeKind k);
const char* to_string(Verdict v);

/// An element of M_n(S^*): a linear map S -> M_n given by its values on the basis.
class DualElement {
 public:
  DualElement(OperatorSystem sys, std::vector<Mat> values);
  static DualElement from_representer(const OperatorSystem& sys, const Mat& r);

  const OperatorSystem& system() const { return sys_; }
  int level() const { return n_; }
  const std::vector<Mat>& values() const { return values_; }
  /// R in M_n(S) with phi(a)_kl = Tr(R_kl^* a).
  const Mat& representer() const { return rep_; }

  /// phi(a) for a in S.
  Mat apply(const Mat& a) const;
  /// phi^(k)(x) in M_{kn} for x in M_k(S) given as an ambient matrix.
  Mat amplify(const Mat& x) const;

  DualElement adjoint() const;
  bool is_selfadjoint(double tol = kHermitianCheckTol) const;

 private:
  OperatorSystem sys_;
  int n_ = 0;
  std::vector<Mat> values_;
  Mat rep_;
};

/// Pairing sum_kl phi(x_kl)_kl between M_n(S^*) and M_n(S).
cplx pairing(const DualElement& phi, const Mat& x);

struct MemberResult {
  Verdict verdict = Verdict::Indeterminate;
  /// Optimal s in min{s : Z + s I >= 0}; negative values mean strictly inside.
  double margin = 0.0;
  /// Inherited: the input. DualCP: a PSD extension of the representer to M_d
  /// (a Choi-type block in M_n (x) M_d), shifted by the margin.
  Mat certificate;
  conic::Status status = conic::Status::Inaccurate;
};

class ConeProvider {
 public:
  ConeProvider(ConeKind kind, OperatorSystem sys, int max_level = 4);

  ConeKind kind() const { return kind_; }
  const OperatorSystem& system() const { return sys_; }
  int max_level() const { return max_level_; }

  /// A cone element as a conic-program variable.
  struct Fragment {
    conic::HermVar var;
    int level = 0;
    /// Adds scale * Re Tr(f^* X) for f in M_n(S).
    void add_functional(conic::LinearForm& form, const Mat& f, double scale = 1.0) const {
      var.add_to(form, f.conjugate(), scale);
    }
  };

  /// Adds the variable and its structural constraints to `p`. Throws if n
  /// exceeds max_level().
  Fragment encode_membership(conic::Problem& p, int n) const;
  /// The solved element in M_n(S) (DualCP: the projection of the extension).
  Mat fragment_value(const Fragment& f, const conic::Solution& s) const;

  /// Decides membership of a selfadjoint x in M_n(S) by solving
  /// min{s : x + s 1 in the cone}; x is a member iff s <= tol.
  MemberResult is_member(const Mat& x, double tol = 1e-7) const;

  /// alpha x beta for scalar matrices, in this cone's representation.
  Mat multiply(const Mat& alpha, const Mat& x, const Mat& beta) const;
  /// alpha^* x alpha.
  Mat compress(const Mat& alpha, const Mat& x) const { return multiply(alpha.adjoint(), x, alpha); }

  int level_of(const Mat& x) const;
  void check_level(int n) const;
  /// Throws unless x is (numerically) a selfadjoint element of M_n(S).
  void check_selfadjoint(const Mat& x, const char* who) const;

 private:
  ConeKind kind_;
  OperatorSystem sys_;
  int max_level_;
};

/// A cone together with a base function f1; K_n = {x in cone : f1^(n)(x) = I}.
class BaseSpec {
 public:
  /// DualCP cone with f1(phi) = phi(1).
  static BaseSpec dual_cp(const OperatorSystem& sys, int max_level = 4);
  /// Inherited cone with f1 given by a selfadjoint functional on S.
  static BaseSpec inherited(const OperatorSystem& sys, const DualElement& f1, int max_level = 4);
  /// Inherited cone with the normalized trace Tr(a)/d.
  static BaseSpec inherited_trace(const OperatorSystem& sys, int max_level = 4);

  const ConeProvider& provider() const { return provider_; }
  const OperatorSystem& system() const { return provider_.system(); }

  /// f1^(n)(x) in M_n.
  Mat f1(const Mat& x) const;
  /// F with f1^(n)(x)_kl = Tr(F^* x); F lies in M_n(S).
  Mat f1_functional(int n, int k, int l) const;
  /// f1 applied to the unit of S.
  double f1_unit() const;
  /// A base point at level n: the unit amplified and rescaled by f1.
  Mat reference_point(int n) const;

  bool in_base(const Mat& x, double tol = 1e-7) const;

  /// min f1(x) over trace-normalized cone elements at level 1.
  double strict_positivity_margin() const;

 private:
  BaseSpec(ConeProvider provider, Mat rho) : provider_(std::move(provider)), rho_(std::move(rho)) {}
  ConeProvider provider_;
  Mat rho_;  // representer of f1 on S (Inherited only)
};

/// Adds the Hermitian n x n equality sum(terms) = rhs row by row (real parts
/// of the upper triangle, imaginary parts strictly above the diagonal).
class HermRows {
 public:
  HermRows(int n, Field field);
  void add_f1(const BaseSpec& b, const ConeProvider::Fragment& f, double scale = 1.0);
  void add_var(const conic::HermVar& v, double scale = 1.0);
  /// Adds scale * t * m for a scalar variable t.
  void add_scalar(int block, int entry, const Mat& m, double scale = 1.0);
  void commit(conic::Problem& p, const Mat& rhs);

 private:
  struct Row {
    int k, l;
    bool imag;
    conic::LinearForm form;
  };
  int n_;
  std::vector<Row> rows_;
};

/// Adds <E_q, X> = c_q rows for every E_q in the herm basis at the fragment's level,
/// where X = sum_i scale_i X_i over the given fragments.
void add_coord_equalities(conic::Problem& p, const OperatorSystem& sys,
                          const std::vector<std::pair<const ConeProvider::Fragment*, double>>& terms,
                          const RVec& rhs);

struct BipolarRecord {
  std::string side;  // "element" or "functional"
  int sample = 0;
  bool direct = false;   // membership decided directly
  bool via_dual = false; // membership decided via the dual cone
  double direct_margin = 0.0;
  double dual_margin = 0.0;
};

struct BipolarReport {
  int samples = 0;
  std::vector<BipolarRecord> records;
  std::vector<BipolarRecord> disagreements;
  int indeterminate = 0;
};

/// Checks (P^*)_* = P at level n: for sampled selfadjoint x in M_n(S),
/// x >= 0 iff <<phi, x>> >= 0 for every CP phi, and for sampled selfadjoint phi,
/// phi is CP iff <<phi, x>> >= 0 for every x in M_n(S)_+. Samples are shifted
/// to straddle the cone boundary.
BipolarReport bipolar_check(const OperatorSystem& sys, int n, int samples, double tol,
                            std::mt19937_64& rng);

}  // namespace ncbase
