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

#include "ncbase/matcore.hpp"

#include <algorithm>
#include <cmath>

namespace ncbase {

const char* field_tag(Field f) { return f == Field::Real ? "R" : "C"; }

Field parse_field(const std::string& tag) {
  if (tag == "R") return Field::Real;
  if (tag == "C") return Field::Complex;
  throw std::invalid_argument("unknown field tag '" + tag + "'");
}

HermMat::HermMat(const Mat& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("HermMat: matrix is " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + ", expected square");
  }
  if (!is_hermitian(a)) {
    throw std::invalid_argument("HermMat: matrix is not Hermitian (residual " +
                                std::to_string(hermitian_residual(a)) + ")");
  }
  m_ = 0.5 * (a + a.adjoint());
}

HermMat HermMat::symmetrized(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("HermMat: non-square input");
  HermMat h;
  h.m_ = 0.5 * (a + a.adjoint());
  return h;
}

EigenDecomposition herm_eig(const HermMat& a) {
  if (a.size() == 0) return {RVec(0), Mat(0, 0)};
  Eigen::SelfAdjointEigenSolver<Mat> es(a.mat());
  if (es.info() != Eigen::Success) {
    throw NumericalError("herm_eig: eigenvalue iteration did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const HermMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(a.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("min_eigenvalue: eigenvalue iteration did not converge");
  }
  return es.eigenvalues()(0);
}

bool is_psd(const HermMat& a, double tol) {
  if (tol < 0) throw std::invalid_argument("is_psd: negative tolerance");
  return min_eigenvalue(a) >= -tol;
}

namespace {

// Applies f to the spectrum of a PSD matrix; eigenvalues at or below the rank
// threshold are sent to `kernel_value`.
HermMat spectral_map(const HermMat& a, double tol, const char* who, double kernel_value,
                     double (*f)(double)) {
  const EigenDecomposition ed = herm_eig(a);
  const Eigen::Index n = a.size();
  const double scale = n == 0 ? 0.0 : std::max(std::abs(ed.values(0)), std::abs(ed.values(n - 1)));
  if (n > 0 && ed.values(0) < -kPsdTol * std::max(1.0, scale)) {
    throw NumericalError(std::string(who) + ": input is not positive semidefinite (min eigenvalue " +
                         std::to_string(ed.values(0)) + ")");
  }
  const double cut = tol * scale;
  RVec mapped(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mapped(i) = ed.values(i) > cut ? f(ed.values(i)) : kernel_value;
  }
  return HermMat::symmetrized(ed.vectors * mapped.asDiagonal() * ed.vectors.adjoint());
}

}  // namespace

HermMat support_projection(const HermMat& a, double tol) {
  return spectral_map(a, tol, "support_projection", 0.0, [](double) { return 1.0; });
}

HermMat restricted_inv_sqrt(const HermMat& a, double tol) {
  return spectral_map(a, tol, "restricted_inv_sqrt", 1.0,
                      [](double l) { return 1.0 / std::sqrt(l); });
}

HermMat pinv_sqrt(const HermMat& a, double tol) {
  return spectral_map(a, tol, "pinv_sqrt", 0.0, [](double l) { return 1.0 / std::sqrt(l); });
}

HermMat psd_sqrt(const HermMat& a) {
  const EigenDecomposition ed = herm_eig(a);
  RVec r = ed.values.cwiseMax(0.0).cwiseSqrt();
  return HermMat::symmetrized(ed.vectors * r.asDiagonal() * ed.vectors.adjoint());
}

HermMat tilde(const Mat& x) {
  const Eigen::Index r = x.rows(), c = x.cols();
  Mat t = Mat::Zero(r + c, r + c);
  t.topRightCorner(r, c) = x;
  t.bottomLeftCorner(c, r) = x.adjoint();
  return HermMat::symmetrized(t);
}

Mat canonical_shuffle(const Mat& x, Eigen::Index m, Eigen::Index n) {
  if (x.rows() != m * n || x.cols() != m * n) {
    throw std::invalid_argument("canonical_shuffle: matrix size " + std::to_string(x.rows()) + "x" +
                                std::to_string(x.cols()) + " does not match m*n = " +
                                std::to_string(m * n));
  }
  Mat out(m * n, m * n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index l = 0; l < n; ++l) out(k * m + i, l * m + j) = x(i * n + k, j * n + l);
  return out;
}

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

double trace_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().sum();
}

double hermitian_residual(const Mat& a) { return (a - a.adjoint()).norm(); }

bool is_hermitian(const Mat& a, double tol) {
  return a.rows() == a.cols() && hermitian_residual(a) <= tol * std::max(1.0, a.norm());
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat direct_sum(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Mat elementary(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j) {
  Mat e = Mat::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

Mat block_of(const Mat& a, Eigen::Index d, Eigen::Index i, Eigen::Index j) {
  return a.block(i * d, j * d, d, d);
}

double real_inner(const Mat& a, const Mat& b) {
  return (a.array().conjugate() * b.array()).sum().real();
}

bool is_real(const Mat& a, double tol) {
  return a.size() == 0 || a.imag().cwiseAbs().maxCoeff() <= tol;
}

}  // namespace ncbase
