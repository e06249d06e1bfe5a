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

// Seeded samplers. Every routine draws from the caller's engine so runs are
// reproducible from a single seed.

#pragma once

#include <random>

#include "ncbase/opsys.hpp"

namespace ncbase {

using Rng = std::mt19937_64;

double gaussian(Rng& rng);
double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);

/// Entries i.i.d. standard normal (real and imaginary parts for Complex).
Mat gaussian_mat(Rng& rng, Eigen::Index rows, Eigen::Index cols, Field field);
HermMat random_hermitian(Rng& rng, Eigen::Index n, Field field);
/// Haar-distributed unitary (orthogonal for Real).
Mat random_unitary(Rng& rng, Eigen::Index n, Field field);
/// Uniform on the unit sphere.
Vec random_unit_vector(Rng& rng, Eigen::Index n, Field field);

/// I_d plus (dim - 1) selfadjoint Gaussian matrices, orthonormalized with the
/// normalized unit first.
OperatorSystem random_system(Rng& rng, int d, int dim, Field field);
OperatorSystem diagonal_system(int n, Field field = Field::Complex);
OperatorSystem full_matrix_system(int d, Field field = Field::Complex);

/// Gaussian selfadjoint element of M_n(S), as an ambient matrix.
Mat random_selfadjoint(Rng& rng, const OperatorSystem& sys, int n);
/// Gaussian element of M_n(S) (not selfadjoint in general).
Mat random_element(Rng& rng, const OperatorSystem& sys, int n);
/// Representer of a CP map S -> M_n of the form a -> sum_j V_j^* a V_j, with
/// `terms` Gaussian V_j of size d x n. If rank < n the V_j share a kernel.
Mat random_cp_representer(Rng& rng, const OperatorSystem& sys, int n, int terms, int rank);

}  // namespace ncbase
