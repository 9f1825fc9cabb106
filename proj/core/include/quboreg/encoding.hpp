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

#ifndef QUBOREG_ENCODING_HPP_
#define QUBOREG_ENCODING_HPP_

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "quboreg/qubo.hpp"

namespace quboreg {

/// Hands out fresh variable ids 0, 1, 2, ... One allocator per model build;
/// allocators are single-owner.
class VarAllocator {
 public:
  VarId allocate() { return next_++; }

  std::vector<VarId> allocate_block(std::size_t n) {
    std::vector<VarId> ids;
    ids.reserve(n);
    for (std::size_t k = 0; k < n; ++k) ids.push_back(allocate());
    return ids;
  }

  /// Number of ids allocated so far, i.e. the variable count of any model
  /// built against this allocator.
  std::size_t count() const { return next_; }

 private:
  VarId next_ = 0;
};

/// Affine function of binary variables: sum_i c_i b_i + constant. This is
/// the carrier for decoded continuous symbols before quadratic lowering.
class AffineExpr {
 public:
  AffineExpr() = default;
  AffineExpr(double constant) : constant_(constant) {}  // NOLINT(runtime/explicit)

  static AffineExpr variable(VarId id, double coeff = 1.0);

  const std::map<VarId, double>& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }

  /// Evaluates against a full assignment indexed by VarId.
  double evaluate(const BitVector& bits) const;

  AffineExpr& operator+=(const AffineExpr& other);
  AffineExpr& operator-=(const AffineExpr& other);
  AffineExpr& operator*=(double factor);

  friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) {
    a += b;
    return a;
  }
  friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) {
    a -= b;
    return a;
  }
  friend AffineExpr operator-(AffineExpr a) {
    a *= -1.0;
    return a;
  }
  friend AffineExpr operator*(AffineExpr a, double factor) {
    a *= factor;
    return a;
  }
  friend AffineExpr operator*(double factor, AffineExpr a) {
    a *= factor;
    return a;
  }

 private:
  std::map<VarId, double> terms_;
  double constant_ = 0.0;
};

/// Base-2 fixed-point map from a block of bits (least significant first) to
/// the interval [lo, hi]:
///
///   decode(b) = lo + (hi - lo) / (2^bits - 1) * sum_k 2^k b_k.
///
/// The normalization by 2^bits - 1 makes both endpoints exactly
/// representable: all-zero decodes to lo, all-one to hi.
class FixedPointEncoding {
 public:
  FixedPointEncoding(std::vector<VarId> var_ids, double lo, double hi);

  /// Allocates `bits` fresh variables and builds the encoding over them.
  static FixedPointEncoding allocate(double lo, double hi, int bits,
                                     VarAllocator& alloc);

  double decode(const BitVector& bits) const;
  AffineExpr as_affine() const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int bits() const { return static_cast<int>(var_ids_.size()); }
  const std::vector<VarId>& var_ids() const { return var_ids_; }

  /// Grid spacing (hi - lo) / (2^bits - 1).
  double resolution() const;

 private:
  std::vector<VarId> var_ids_;
  double lo_;
  double hi_;
};

/// Convenience alias for make_encoding in prose: identical to
/// FixedPointEncoding::allocate.
inline FixedPointEncoding make_encoding(double lo, double hi, int bits,
                                        VarAllocator& alloc) {
  return FixedPointEncoding::allocate(lo, hi, bits, alloc);
}

/// Polynomial of degree at most two over binary variables. Products fold
/// squared bits into linear terms (b^2 = b), so quadratic keys always have
/// i < j. Multiplying two expressions whose combined degree exceeds two
/// throws std::domain_error.
class QuadExpr {
 public:
  QuadExpr() = default;
  QuadExpr(double constant) : constant_(constant) {}  // NOLINT(runtime/explicit)
  QuadExpr(const AffineExpr& affine);                 // NOLINT(runtime/explicit)

  double constant() const { return constant_; }
  const std::map<VarId, double>& linear() const { return linear_; }
  const std::map<std::pair<VarId, VarId>, double>& quadratic() const {
    return quadratic_;
  }

  /// 0 for a constant, 1 with only linear terms, 2 otherwise.
  int degree() const;

  double evaluate(const BitVector& bits) const;

  QuadExpr& operator+=(const QuadExpr& other);
  QuadExpr& operator-=(const QuadExpr& other);
  QuadExpr& operator*=(double factor);

  friend QuadExpr operator+(QuadExpr a, const QuadExpr& b) {
    a += b;
    return a;
  }
  friend QuadExpr operator-(QuadExpr a, const QuadExpr& b) {
    a -= b;
    return a;
  }
  friend QuadExpr operator-(QuadExpr a) {
    a *= -1.0;
    return a;
  }
  friend QuadExpr operator*(QuadExpr a, double factor) {
    a *= factor;
    return a;
  }
  friend QuadExpr operator*(double factor, QuadExpr a) {
    a *= factor;
    return a;
  }

  /// Product; throws std::domain_error if degree(a) + degree(b) > 2.
  friend QuadExpr operator*(const QuadExpr& a, const QuadExpr& b);

 private:
  double constant_ = 0.0;
  std::map<VarId, double> linear_;
  std::map<std::pair<VarId, VarId>, double> quadratic_;
};

inline QuadExpr square(const AffineExpr& a) {
  QuadExpr q(a);
  return q * q;
}

/// Materializes a quadratic expression as a QuboModel over num_vars
/// variables. Evaluating the model and the expression on any assignment
/// gives the same value.
QuboModel lower_quadratic(const QuadExpr& expr, std::size_t num_vars);

}  // namespace quboreg

#endif  // QUBOREG_ENCODING_HPP_
