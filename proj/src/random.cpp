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

#include "ncbase/random.hpp"

#include <algorithm>
#include <cmath>

namespace ncbase {

double gaussian(Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  return nd(rng);
}

double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> ud(lo, hi);
  return ud(rng);
}

Mat gaussian_mat(Rng& rng, Eigen::Index rows, Eigen::Index cols, Field field) {
  Mat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = gaussian(rng);
      const double im = field == Field::Complex ? gaussian(rng) : 0.0;
      m(i, j) = cplx(re, im);
    }
  return m;
}

HermMat random_hermitian(Rng& rng, Eigen::Index n, Field field) {
  return HermMat::symmetrized(gaussian_mat(rng, n, n, field));
}

Mat random_unitary(Rng& rng, Eigen::Index n, Field field) {
  const Mat g = gaussian_mat(rng, n, n, field);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  // Fix the phases so the distribution is Haar.
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Vec random_unit_vector(Rng& rng, Eigen::Index n, Field field) {
  Vec v = gaussian_mat(rng, n, 1, field);
  return v / v.norm();
}

OperatorSystem random_system(Rng& rng, int d, int dim, Field field) {
  if (dim < 1 || d < 1) throw std::invalid_argument("random_system: d and dim must be positive");
  const int cap = field == Field::Complex ? d * d : d * (d + 1) / 2;
  if (dim > cap) {
    throw std::invalid_argument("random_system: dim " + std::to_string(dim) +
                                " exceeds the selfadjoint dimension " + std::to_string(cap));
  }
  std::vector<Mat> ortho{Mat::Identity(d, d) / std::sqrt(double(d))};
  while (static_cast<int>(ortho.size()) < dim) {
    Mat h = random_hermitian(rng, d, field).mat();
    for (int pass = 0; pass < 2; ++pass)
      for (const Mat& q : ortho) h -= real_inner(q, h) * q;
    if (h.norm() > 1e-8) ortho.push_back(h / h.norm());
  }
  return OperatorSystem::make(ortho, field);
}

OperatorSystem diagonal_system(int n, Field field) {
  std::vector<Mat> basis;
  for (int i = 0; i < n; ++i) basis.push_back(elementary(n, n, i, i));
  return OperatorSystem::make(basis, field);
}

OperatorSystem full_matrix_system(int d, Field field) {
  std::vector<Mat> basis;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) basis.push_back(elementary(d, d, i, j));
  return OperatorSystem::make(basis, field);
}

Mat random_selfadjoint(Rng& rng, const OperatorSystem& sys, int n) {
  const auto& e = sys.herm_basis(n);
  RVec c(e.size());
  for (Eigen::Index q = 0; q < c.size(); ++q) c(q) = gaussian(rng);
  return sys.from_herm_coords(c, n);
}

Mat random_element(Rng& rng, const OperatorSystem& sys, int n) {
  const int d = sys.ambient_dim();
  Mat x = Mat::Zero(n * d, n * d);
  for (int r = 0; r < sys.dim(); ++r) x += kron(gaussian_mat(rng, n, n, sys.field()), sys.basis()[r]);
  return x;
}

Mat random_cp_representer(Rng& rng, const OperatorSystem& sys, int n, int terms, int rank) {
  const int d = sys.ambient_dim();
  rank = std::clamp(rank, 0, n);
  const Mat b = gaussian_mat(rng, rank, n, sys.field());
  Mat full = Mat::Zero(n * d, n * d);
  for (int j = 0; j < terms; ++j) {
    const Mat v = rank == n ? gaussian_mat(rng, d, n, sys.field())
                            : Mat(gaussian_mat(rng, d, rank, sys.field()) * b);
    Vec vec(n * d);
    for (int k = 0; k < n; ++k) vec.segment(k * d, d) = v.col(k);
    full += vec * vec.adjoint();
  }
  return sys.project_level(full);
}

}  // namespace ncbase
