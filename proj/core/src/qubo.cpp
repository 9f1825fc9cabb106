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

#include "quboreg/qubo.hpp"

#include <cmath>
#include <iterator>
#include <stdexcept>
#include <string>

namespace quboreg {

namespace {

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be finite");
  }
}

void check_pair(VarId i, VarId j, std::size_t num_vars) {
  if (i == j) {
    throw std::invalid_argument("quadratic key must have i != j");
  }
  if (i > j) {
    throw std::invalid_argument("quadratic key must be normalized to i < j");
  }
  if (j >= num_vars) {
    throw std::invalid_argument("variable id " + std::to_string(j) +
                                " out of range for " +
                                std::to_string(num_vars) + " variables");
  }
}

template <typename Map>
void drop_zeros(Map& m) {
  for (auto it = m.begin(); it != m.end();) {
    it = (it->second == 0.0) ? m.erase(it) : std::next(it);
  }
}

std::pair<VarId, VarId> ordered(VarId i, VarId j) {
  if (i == j) {
    throw std::invalid_argument("quadratic key must have i != j");
  }
  return i < j ? std::make_pair(i, j) : std::make_pair(j, i);
}

}  // namespace

QuboModel::QuboModel(std::size_t num_vars, QuadMap quadratic, LinMap linear,
                     double offset)
    : num_vars_(num_vars),
      quadratic_(std::move(quadratic)),
      linear_(std::move(linear)),
      offset_(offset) {
  check_finite(offset_, "offset");
  for (const auto& [key, v] : quadratic_) {
    check_pair(key.first, key.second, num_vars_);
    check_finite(v, "quadratic coefficient");
  }
  for (const auto& [i, v] : linear_) {
    if (i >= num_vars_) {
      throw std::invalid_argument("variable id " + std::to_string(i) +
                                  " out of range for " +
                                  std::to_string(num_vars_) + " variables");
    }
    check_finite(v, "linear coefficient");
  }
  drop_zeros(quadratic_);
  drop_zeros(linear_);
}

double QuboModel::energy(const BitVector& bits) const {
  if (bits.size() != num_vars_) {
    throw std::invalid_argument("assignment has " +
                                std::to_string(bits.size()) +
                                " entries, model has " +
                                std::to_string(num_vars_) + " variables");
  }
  for (std::uint8_t b : bits) {
    if (b > 1) {
      throw std::domain_error("assignment entries must be 0 or 1");
    }
  }
  double e = offset_;
  for (const auto& [i, v] : linear_) {
    if (bits[i]) e += v;
  }
  for (const auto& [key, v] : quadratic_) {
    if (bits[key.first] && bits[key.second]) e += v;
  }
  return e;
}

IsingModel::IsingModel(std::size_t num_spins, CouplingMap couplings,
                       FieldMap fields, double offset)
    : num_spins_(num_spins),
      couplings_(std::move(couplings)),
      fields_(std::move(fields)),
      offset_(offset) {
  check_finite(offset_, "offset");
  for (const auto& [key, v] : couplings_) {
    check_pair(key.first, key.second, num_spins_);
    check_finite(v, "coupling");
  }
  for (const auto& [i, v] : fields_) {
    if (i >= num_spins_) {
      throw std::invalid_argument("spin id " + std::to_string(i) +
                                  " out of range for " +
                                  std::to_string(num_spins_) + " spins");
    }
    check_finite(v, "field");
  }
  drop_zeros(couplings_);
  drop_zeros(fields_);
}

double IsingModel::energy(const SpinVector& spins) const {
  if (spins.size() != num_spins_) {
    throw std::invalid_argument("assignment has " +
                                std::to_string(spins.size()) +
                                " entries, model has " +
                                std::to_string(num_spins_) + " spins");
  }
  for (std::int8_t s : spins) {
    if (s != 1 && s != -1) {
      throw std::domain_error("spin entries must be -1 or +1");
    }
  }
  double e = offset_;
  for (const auto& [key, J] : couplings_) {
    e -= J * spins[key.first] * spins[key.second];
  }
  for (const auto& [i, h] : fields_) {
    e -= h * spins[i];
  }
  return e;
}

void QuboBuilder::require_vars(std::size_t n) {
  if (n > num_vars_) num_vars_ = n;
}

void QuboBuilder::set_linear(VarId i, double value) {
  check_finite(value, "linear coefficient");
  require_vars(static_cast<std::size_t>(i) + 1);
  linear_[i] = value;
}

void QuboBuilder::add_linear(VarId i, double value) {
  check_finite(value, "linear coefficient");
  require_vars(static_cast<std::size_t>(i) + 1);
  linear_[i] += value;
}

void QuboBuilder::set_quadratic(VarId i, VarId j, double value) {
  check_finite(value, "quadratic coefficient");
  auto key = ordered(i, j);
  require_vars(static_cast<std::size_t>(key.second) + 1);
  quadratic_[key] = value;
}

void QuboBuilder::add_quadratic(VarId i, VarId j, double value) {
  check_finite(value, "quadratic coefficient");
  auto key = ordered(i, j);
  require_vars(static_cast<std::size_t>(key.second) + 1);
  quadratic_[key] += value;
}

void QuboBuilder::add_model(const QuboModel& other) {
  require_vars(other.num_vars());
  for (const auto& [key, v] : other.quadratic()) {
    quadratic_[key] += v;
  }
  for (const auto& [i, v] : other.linear()) {
    linear_[i] += v;
  }
  offset_ += other.offset();
}

QuboModel QuboBuilder::build() const {
  return QuboModel(num_vars_, quadratic_, linear_, offset_);
}

QuboModel add(const QuboModel& a, const QuboModel& b) {
  QuboBuilder builder(a.num_vars());
  builder.add_model(a);
  builder.add_model(b);
  return builder.build();
}

QuboModel scaled(const QuboModel& model, double factor) {
  check_finite(factor, "scale factor");
  QuboModel::QuadMap quad;
  QuboModel::LinMap lin;
  for (const auto& [key, v] : model.quadratic()) quad[key] = factor * v;
  for (const auto& [i, v] : model.linear()) lin[i] = factor * v;
  return QuboModel(model.num_vars(), std::move(quad), std::move(lin),
                   factor * model.offset());
}

QuboModel ising_to_qubo(const IsingModel& model) {
  QuboBuilder builder(model.num_spins());
  double offset = model.offset();
  // -J s_i s_j with s = 2q - 1 expands to -4J q_i q_j + 2J q_i + 2J q_j - J.
  for (const auto& [key, J] : model.couplings()) {
    builder.add_quadratic(key.first, key.second, -4.0 * J);
    builder.add_linear(key.first, 2.0 * J);
    builder.add_linear(key.second, 2.0 * J);
    offset -= J;
  }
  // -h s_i expands to -2h q_i + h.
  for (const auto& [i, h] : model.fields()) {
    builder.add_linear(i, -2.0 * h);
    offset += h;
  }
  builder.set_offset(offset);
  return builder.build();
}

IsingModel qubo_to_ising(const QuboModel& model) {
  IsingModel::CouplingMap couplings;
  IsingModel::FieldMap fields;
  double offset = model.offset();
  // a q_i q_j with q = (s + 1)/2 expands to
  // (a/4)(s_i s_j + s_i + s_j + 1) = -J s_i s_j - h contributions below.
  for (const auto& [key, a] : model.quadratic()) {
    couplings[key] += -a / 4.0;
    fields[key.first] += -a / 4.0;
    fields[key.second] += -a / 4.0;
    offset += a / 4.0;
  }
  for (const auto& [i, b] : model.linear()) {
    fields[i] += -b / 2.0;
    offset += b / 2.0;
  }
  return IsingModel(model.num_vars(), std::move(couplings), std::move(fields),
                    offset);
}

}  // namespace quboreg
