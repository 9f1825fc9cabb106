// Copyright 2026 The quboreg developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUBOREG_QUBO_HPP_
#define QUBOREG_QUBO_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace quboreg {

/// Index of one binary (or spin) variable. Models use dense ids 0..n-1.
using VarId = std::uint32_t;

/// Assignment of binary variables; entries must be 0 or 1.
using BitVector = std::vector<std::uint8_t>;

/// Assignment of spin variables; entries must be -1 or +1.
using SpinVector = std::vector<std::int8_t>;

/// Quadratic energy over binary variables,
///
///   E(q) = sum_{i<j} a_ij q_i q_j + sum_i b_i q_i + c,
///
/// stored sparsely with signed coefficients in minimization form. The
/// constant c is tracked explicitly so that spin/binary conversions preserve
/// energies exactly, not just minimizers. Instances are immutable; build
/// them with QuboBuilder or the validating constructor.
class QuboModel {
 public:
  using QuadMap = std::map<std::pair<VarId, VarId>, double>;
  using LinMap = std::map<VarId, double>;

  QuboModel() = default;

  /// Validates that quadratic keys satisfy i < j, that all ids are below
  /// num_vars and that every coefficient is finite. Coefficients that are
  /// exactly zero are dropped.
  QuboModel(std::size_t num_vars, QuadMap quadratic, LinMap linear,
            double offset);

  std::size_t num_vars() const { return num_vars_; }
  const QuadMap& quadratic() const { return quadratic_; }
  const LinMap& linear() const { return linear_; }
  double offset() const { return offset_; }

  /// Energy of a full assignment. Terms are accumulated in ascending index
  /// order (offset, then linear, then quadratic), so results are
  /// reproducible bit for bit.
  double energy(const BitVector& bits) const;

  bool operator==(const QuboModel&) const = default;

 private:
  std::size_t num_vars_ = 0;
  QuadMap quadratic_;
  LinMap linear_;
  double offset_ = 0.0;
};

/// Spin Hamiltonian H(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i + c with
/// s_i in {-1,+1}. The leading minus signs follow the usual Ising
/// convention; couplings are stored once per pair with i < j.
class IsingModel {
 public:
  using CouplingMap = std::map<std::pair<VarId, VarId>, double>;
  using FieldMap = std::map<VarId, double>;

  IsingModel() = default;
  IsingModel(std::size_t num_spins, CouplingMap couplings, FieldMap fields,
             double offset);

  std::size_t num_spins() const { return num_spins_; }
  const CouplingMap& couplings() const { return couplings_; }
  const FieldMap& fields() const { return fields_; }
  double offset() const { return offset_; }

  double energy(const SpinVector& spins) const;

  bool operator==(const IsingModel&) const = default;

 private:
  std::size_t num_spins_ = 0;
  CouplingMap couplings_;
  FieldMap fields_;
  double offset_ = 0.0;
};

/// Incremental construction of a QuboModel. set_* overwrites a coefficient,
/// add_* accumulates into it; the two are deliberately separate so that
/// merging fragments never silently clobbers terms. Builders are
/// single-owner; the built model is immutable and freely shareable.
class QuboBuilder {
 public:
  explicit QuboBuilder(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  /// Grows the variable count to at least n. Never shrinks.
  void require_vars(std::size_t n);

  void set_linear(VarId i, double value);
  void add_linear(VarId i, double value);
  void set_quadratic(VarId i, VarId j, double value);
  void add_quadratic(VarId i, VarId j, double value);
  void set_offset(double value) { offset_ = value; }
  void add_offset(double value) { offset_ += value; }

  /// Merges another model by coefficient-wise summation.
  void add_model(const QuboModel& other);

  std::size_t num_vars() const { return num_vars_; }

  QuboModel build() const;

 private:
  std::size_t num_vars_ = 0;
  QuboModel::QuadMap quadratic_;
  QuboModel::LinMap linear_;
  double offset_ = 0.0;
};

/// Coefficient-wise sum of two models; num_vars is the max of the two.
QuboModel add(const QuboModel& a, const QuboModel& b);

/// Model with every coefficient (and the offset) multiplied by factor.
QuboModel scaled(const QuboModel& model, double factor);

/// Substitutes s_i = 2 q_i - 1. The substitution generates a constant which
/// is folded into the offset, so energies agree state by state:
/// evaluate_qubo(Q, q) == evaluate_ising(I, 2q - 1).
QuboModel ising_to_qubo(const IsingModel& model);

/// Inverse transformation, q_i = (s_i + 1) / 2.
IsingModel qubo_to_ising(const QuboModel& model);

}  // namespace quboreg

#endif  // QUBOREG_QUBO_HPP_
