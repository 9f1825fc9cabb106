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

#include "quboreg/encoding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace quboreg {

namespace {

std::uint8_t bit_at(const BitVector& bits, VarId id) {
  if (id >= bits.size()) {
    throw std::invalid_argument("assignment does not cover variable " +
                                std::to_string(id));
  }
  std::uint8_t b = bits[id];
  if (b > 1) {
    throw std::domain_error("assignment entries must be 0 or 1");
  }
  return b;
}

template <typename Map>
void erase_if_zero(Map& m, typename Map::iterator it) {
  if (it->second == 0.0) m.erase(it);
}

}  // namespace

AffineExpr AffineExpr::variable(VarId id, double coeff) {
  AffineExpr e;
  if (coeff != 0.0) e.terms_[id] = coeff;
  return e;
}

double AffineExpr::evaluate(const BitVector& bits) const {
  double v = constant_;
  for (const auto& [id, c] : terms_) {
    if (bit_at(bits, id)) v += c;
  }
  return v;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& other) {
  constant_ += other.constant_;
  for (const auto& [id, c] : other.terms_) {
    auto it = terms_.emplace(id, 0.0).first;
    it->second += c;
    erase_if_zero(terms_, it);
  }
  return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& other) {
  constant_ -= other.constant_;
  for (const auto& [id, c] : other.terms_) {
    auto it = terms_.emplace(id, 0.0).first;
    it->second -= c;
    erase_if_zero(terms_, it);
  }
  return *this;
}

AffineExpr& AffineExpr::operator*=(double factor) {
  constant_ *= factor;
  if (factor == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [id, c] : terms_) c *= factor;
  return *this;
}

FixedPointEncoding::FixedPointEncoding(std::vector<VarId> var_ids, double lo,
                                       double hi)
    : var_ids_(std::move(var_ids)), lo_(lo), hi_(hi) {
  if (!(std::isfinite(lo_) && std::isfinite(hi_)) || lo_ >= hi_) {
    throw std::domain_error("encoding requires finite bounds with lo < hi");
  }
  if (var_ids_.empty()) {
    throw std::domain_error("encoding requires at least 1 bit");
  }
  if (var_ids_.size() > 52) {
    throw std::domain_error("encoding wider than 52 bits is not supported");
  }
}

FixedPointEncoding FixedPointEncoding::allocate(double lo, double hi, int bits,
                                                VarAllocator& alloc) {
  if (bits < 1) {
    throw std::domain_error("encoding requires at least 1 bit");
  }
  return FixedPointEncoding(alloc.allocate_block(static_cast<std::size_t>(bits)),
                            lo, hi);
}

double FixedPointEncoding::resolution() const {
  return (hi_ - lo_) / (std::ldexp(1.0, bits()) - 1.0);
}

double FixedPointEncoding::decode(const BitVector& bits) const {
  double acc = 0.0;
  for (int k = 0; k < this->bits(); ++k) {
    if (bit_at(bits, var_ids_[static_cast<std::size_t>(k)])) {
      acc += std::ldexp(1.0, k);
    }
  }
  return lo_ + resolution() * acc;
}

AffineExpr FixedPointEncoding::as_affine() const {
  AffineExpr e(lo_);
  const double res = resolution();
  for (int k = 0; k < bits(); ++k) {
    e += AffineExpr::variable(var_ids_[static_cast<std::size_t>(k)],
                              res * std::ldexp(1.0, k));
  }
  return e;
}

QuadExpr::QuadExpr(const AffineExpr& affine) : constant_(affine.constant()) {
  for (const auto& [id, c] : affine.terms()) {
    if (c != 0.0) linear_[id] = c;
  }
}

int QuadExpr::degree() const {
  if (!quadratic_.empty()) return 2;
  if (!linear_.empty()) return 1;
  return 0;
}

double QuadExpr::evaluate(const BitVector& bits) const {
  double v = constant_;
  for (const auto& [id, c] : linear_) {
    if (bit_at(bits, id)) v += c;
  }
  for (const auto& [key, c] : quadratic_) {
    if (bit_at(bits, key.first) && bit_at(bits, key.second)) v += c;
  }
  return v;
}

QuadExpr& QuadExpr::operator+=(const QuadExpr& other) {
  constant_ += other.constant_;
  for (const auto& [id, c] : other.linear_) {
    auto it = linear_.emplace(id, 0.0).first;
    it->second += c;
    erase_if_zero(linear_, it);
  }
  for (const auto& [key, c] : other.quadratic_) {
    auto it = quadratic_.emplace(key, 0.0).first;
    it->second += c;
    erase_if_zero(quadratic_, it);
  }
  return *this;
}

QuadExpr& QuadExpr::operator-=(const QuadExpr& other) {
  *this += QuadExpr(other) * -1.0;
  return *this;
}

QuadExpr& QuadExpr::operator*=(double factor) {
  constant_ *= factor;
  if (factor == 0.0) {
    linear_.clear();
    quadratic_.clear();
    return *this;
  }
  for (auto& [id, c] : linear_) c *= factor;
  for (auto& [key, c] : quadratic_) c *= factor;
  return *this;
}

QuadExpr operator*(const QuadExpr& a, const QuadExpr& b) {
  if (a.degree() + b.degree() > 2) {
    throw std::domain_error(
        "unsupported degree: product would exceed degree 2");
  }
  if (a.degree() == 0) {
    return QuadExpr(b) * a.constant_;
  }
  if (b.degree() == 0) {
    return QuadExpr(a) * b.constant_;
  }
  // Both factors are affine. Expand term by term; b_i^2 folds to b_i.
  QuadExpr out(a.constant_ * b.constant_);
  for (const auto& [id, c] : a.linear_) {
    out += QuadExpr(AffineExpr::variable(id, c * b.constant_));
  }
  for (const auto& [id, c] : b.linear_) {
    out += QuadExpr(AffineExpr::variable(id, c * a.constant_));
  }
  for (const auto& [i, ci] : a.linear_) {
    for (const auto& [j, cj] : b.linear_) {
      QuadExpr cross;
      if (i == j) {
        cross.linear_[i] = ci * cj;
      } else {
        cross.quadratic_[i < j ? std::make_pair(i, j)
                                : std::make_pair(j, i)] = ci * cj;
      }
      out += cross;
    }
  }
  return out;
}

QuboModel lower_quadratic(const QuadExpr& expr, std::size_t num_vars) {
  return QuboModel(num_vars, expr.quadratic(), expr.linear(), expr.constant());
}

}  // namespace quboreg
