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

// Standard-form conic programming over products of real PSD blocks,
// nonnegative orthants and free variables:
//
//     minimize    <c, x>
//     subject to  <a_i, x> = b_i,   x in PSD^{k_1} x ... x R^p_+ x R^f
//
// solved by an infeasible-start primal-dual interior point method with
// Nesterov-Todd scaling and a Mehrotra predictor-corrector.

#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncbase/matcore.hpp"

namespace ncbase::conic {

enum class BlockKind { Psd, Nonneg, Free };

struct VarBlock {
  BlockKind kind;
  int size;  // matrix order for Psd, entry count otherwise
};

/// A real linear functional of the problem variables.
struct LinearForm {
  std::vector<std::pair<int, RMat>> psd;              // (block, coefficient matrix)
  std::vector<std::tuple<int, int, double>> scalar;   // (block, entry, coefficient)

  void add_psd(int block, RMat coefficient) { psd.emplace_back(block, std::move(coefficient)); }
  void add_scalar(int block, int entry, double coefficient) {
    scalar.emplace_back(block, entry, coefficient);
  }
  bool empty() const { return psd.empty() && scalar.empty(); }
};

class Problem {
 public:
  int add_psd(int size);
  int add_nonneg(int count);
  int add_free(int count);

  void add_equality(LinearForm form, double rhs);
  /// Sets the objective to be minimized.
  void set_objective(LinearForm form) { objective_ = std::move(form); }

  const std::vector<VarBlock>& blocks() const { return blocks_; }
  const std::vector<std::pair<LinearForm, double>>& equalities() const { return rows_; }
  const LinearForm& objective() const { return objective_; }

  /// Debug dump of blocks and constraints; not a stable format.
  nlohmann::json dump() const;

 private:
  void check_form(const LinearForm& form) const;

  std::vector<VarBlock> blocks_;
  std::vector<std::pair<LinearForm, double>> rows_;
  LinearForm objective_;
};

enum class Status { Optimal, PrimalInfeasible, DualInfeasible, Inaccurate };

const char* to_string(Status s);

struct Solution {
  Status status = Status::Inaccurate;
  /// Per block: the PSD matrix, or a column vector for Nonneg/Free blocks.
  /// For DualInfeasible this holds the normalized primal ray.
  std::vector<RMat> primal;
  /// Per block dual slack; zero for Free blocks.
  std::vector<RMat> dual_slack;
  /// One multiplier per equality, in insertion order. For PrimalInfeasible this
  /// holds a Farkas ray y with b^T y = 1 and A^T y in the dual cone's negative.
  RVec multipliers;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;  // relative to 1 + |primal objective|
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

struct Options {
  double tol = 1e-9;
  int max_iterations = 120;
};

/// Solves `p`. Throws std::invalid_argument unless tol is in [1e-10, 1e-4].
Solution solve(const Problem& p, double tol = 1e-9);
Solution solve(const Problem& p, const Options& options);

/// Process-wide tolerance used in place of the requested one; 0 clears it.
/// Throws unless the value is 0 or lies in [1e-10, 1e-4].
void set_tolerance_override(double tol);
double tolerance_override();

/// [[Re h, -Im h], [Im h, Re h]].
RMat complex_embed(const HermMat& h);

/// A k x k Hermitian matrix variable constrained PSD. Over the complex field it
/// is backed by a real PSD block Z of order 2k through
/// H(Z) = (Z11 + Z22)/2 + i (Z21 - Z12)/2, which maps the real PSD cone onto
/// the complex PSD cone.
class HermVar {
 public:
  HermVar() = default;
  static HermVar create(Problem& p, int size, Field field);

  int block() const { return block_; }
  int size() const { return size_; }
  Field field() const { return field_; }

  /// Adds `scale * Re(sum_pq f(p, q) H(p, q))` to `form`.
  void add_to(LinearForm& form, const Mat& f, double scale = 1.0) const;
  /// Coefficient matrix on the backing block for Re(sum_pq f(p, q) H(p, q)).
  RMat coefficient(const Mat& f) const;

  Mat value(const Solution& s) const;

 private:
  int block_ = -1;
  int size_ = 0;
  Field field_ = Field::Complex;
};

}  // namespace ncbase::conic
