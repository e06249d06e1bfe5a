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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ncbase {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Scalar field of a space. Real-field objects store complex matrices whose
/// imaginary parts are identically zero.
enum class Field { Real, Complex };

const char* field_tag(Field f);
Field parse_field(const std::string& tag);

/// Raised when an eigen- or linear solver fails to converge, or when a
/// numerical precondition (such as positivity) is violated.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tolerance ladder shared by every module.
inline constexpr double kSymmetrizeTol = 1e-12;
inline constexpr double kHermitianCheckTol = 1e-8;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kRankTol = 1e-9;

/// A square matrix equal to its own adjoint. Construction checks the input is
/// Hermitian up to roundoff and then symmetrizes it exactly.
class HermMat {
 public:
  HermMat() = default;
  explicit HermMat(const Mat& a);

  /// Wraps `(a + a^*) / 2` without checking; for values Hermitian by construction.
  static HermMat symmetrized(const Mat& a);

  const Mat& mat() const { return m_; }
  Eigen::Index size() const { return m_.rows(); }
  operator const Mat&() const { return m_; }

 private:
  Mat m_;
};

struct EigenDecomposition {
  RVec values;  // ascending
  Mat vectors;  // columns are orthonormal eigenvectors
};

EigenDecomposition herm_eig(const HermMat& a);

/// True iff the smallest eigenvalue of `a` is at least `-tol`.
bool is_psd(const HermMat& a, double tol = kPsdTol);
double min_eigenvalue(const HermMat& a);

/// Orthogonal projection onto the eigenvectors of a PSD matrix whose
/// eigenvalues exceed `tol * ||a||`.
HermMat support_projection(const HermMat& a, double tol = kRankTol);

/// `(e a e)^{-1/2} + e^perp` where `e` is the support projection of `a`.
HermMat restricted_inv_sqrt(const HermMat& a, double tol = kRankTol);

/// Moore-Penrose style inverse square root: `(e a e)^{-1/2}` on the support
/// of `a`, zero on its kernel.
HermMat pinv_sqrt(const HermMat& a, double tol = kRankTol);

/// Principal square root of a PSD matrix (negative roundoff clipped to 0).
HermMat psd_sqrt(const HermMat& a);

/// The selfadjoint block matrix [[0, x], [x^*, 0]].
HermMat tilde(const Mat& x);

/// Reindexes x in M_m (x) M_n (outer index of size m) as an element of
/// M_n (x) M_m.
Mat canonical_shuffle(const Mat& x, Eigen::Index m, Eigen::Index n);

double spectral_norm(const Mat& a);
double trace_norm(const Mat& a);
double hermitian_residual(const Mat& a);
bool is_hermitian(const Mat& a, double tol = kHermitianCheckTol);

Mat kron(const Mat& a, const Mat& b);
Mat direct_sum(const Mat& a, const Mat& b);
Mat elementary(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j);

/// Block (i, j) of size `d x d` of a matrix viewed as an n x n array of blocks.
Mat block_of(const Mat& a, Eigen::Index d, Eigen::Index i, Eigen::Index j);

/// Real Frobenius inner product Re Tr(a^* b).
double real_inner(const Mat& a, const Mat& b);

/// True iff every imaginary part is below `tol` in magnitude.
bool is_real(const Mat& a, double tol = 0.0);

}  // namespace ncbase
