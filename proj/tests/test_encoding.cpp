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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "quboreg/encoding.hpp"
#include "quboreg/rng.hpp"

using namespace quboreg;

namespace {

BitVector bits_of(std::uint64_t k, std::size_t n) {
  BitVector b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = (k >> i) & 1u;
  return b;
}

}  // namespace

TEST_CASE("one-bit encoding hits both endpoints") {
  VarAllocator alloc;
  FixedPointEncoding enc = make_encoding(0.0, 1.0, 1, alloc);
  CHECK(enc.decode({0}) == 0.0);
  CHECK(enc.decode({1}) == 1.0);
  CHECK(alloc.count() == 1);
}

TEST_CASE("two-bit encoding on [-1, 1]") {
  VarAllocator alloc;
  FixedPointEncoding enc = make_encoding(-1.0, 1.0, 2, alloc);
  CHECK(enc.decode({0, 0}) == -1.0);
  CHECK(enc.decode({1, 1}) == 1.0);
  CHECK(enc.decode({1, 0}) == doctest::Approx(-1.0 / 3.0));
  CHECK(enc.decode({0, 1}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ten-bit encoding resolution") {
  VarAllocator alloc;
  FixedPointEncoding enc = make_encoding(0.0, 10.23, 10, alloc);
  CHECK(enc.resolution() == doctest::Approx(0.01));
}

TEST_CASE("single set bit decodes to its weight") {
  VarAllocator alloc;
  const int bits = 6;
  FixedPointEncoding enc = make_encoding(2.0, 5.0, bits, alloc);
  for (int k = 0; k < bits; ++k) {
    BitVector b(static_cast<std::size_t>(bits), 0);
    b[static_cast<std::size_t>(k)] = 1;
    const double expected =
        2.0 + 3.0 * std::ldexp(1.0, k) / (std::ldexp(1.0, bits) - 1.0);
    CHECK(enc.decode(b) == doctest::Approx(expected));
  }
}

TEST_CASE("encoding validation") {
  VarAllocator alloc;
  CHECK_THROWS_AS(make_encoding(1.0, 1.0, 4, alloc), std::domain_error);
  CHECK_THROWS_AS(make_encoding(2.0, 1.0, 4, alloc), std::domain_error);
  CHECK_THROWS_AS(make_encoding(0.0, 1.0, 0, alloc), std::domain_error);

  FixedPointEncoding enc = make_encoding(0.0, 1.0, 2, alloc);
  CHECK_THROWS_AS(enc.decode({1}), std::invalid_argument);  // missing bit
}

TEST_CASE("as_affine reproduces decode on every assignment") {
  VarAllocator alloc;
  FixedPointEncoding enc = make_encoding(-1.0, 1.0, 2, alloc);
  AffineExpr aff = enc.as_affine();
  CHECK(aff.constant() == -1.0);
  CHECK(aff.terms().at(0) == doctest::Approx(2.0 / 3.0));
  CHECK(aff.terms().at(1) == doctest::Approx(4.0 / 3.0));

  for (int bits = 1; bits <= 10; ++bits) {
    VarAllocator a2;
    FixedPointEncoding e = make_encoding(-3.5, 7.25, bits, a2);
    AffineExpr f = e.as_affine();
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << bits); ++k) {
      const BitVector b = bits_of(k, static_cast<std::size_t>(bits));
      CHECK(f.evaluate(b) == e.decode(b));
    }
  }
}

TEST_CASE("decode is monotone in every bit") {
  VarAllocator alloc;
  const int bits = 5;
  FixedPointEncoding enc = make_encoding(-2.0, 9.0, bits, alloc);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    BitVector b = bits_of(rng(), static_cast<std::size_t>(bits));
    for (int k = 0; k < bits; ++k) {
      if (b[static_cast<std::size_t>(k)]) continue;
      BitVector raised = b;
      raised[static_cast<std::size_t>(k)] = 1;
      CHECK(enc.decode(raised) >= enc.decode(b));
    }
  }
}

TEST_CASE("nearest grid point is within half a resolution step") {
  VarAllocator alloc;
  FixedPointEncoding enc = make_encoding(-1.0, 2.0, 6, alloc);
  const double res = enc.resolution();
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const double v = -1.0 + 3.0 * canonical_uniform(rng);
    double best = INFINITY;
    for (std::uint64_t k = 0; k < 64; ++k) {
      best = std::min(best, std::fabs(enc.decode(bits_of(k, 6)) - v));
    }
    CHECK(best <= res / 2.0 + 1e-12);
  }
}

TEST_CASE("lower_quadratic on hand-expanded expressions") {
  SUBCASE("x^2 of a 1-bit [0,1] variable is just the bit") {
    VarAllocator alloc;
    AffineExpr x = make_encoding(0.0, 1.0, 1, alloc).as_affine();
    QuboModel m = lower_quadratic(square(x), alloc.count());
    CHECK(m.quadratic().empty());
    CHECK(m.linear().at(0) == 1.0);
    CHECK(m.offset() == 0.0);
  }

  SUBCASE("(x - 1)^2 of a 1-bit [0,1] variable") {
    VarAllocator alloc;
    AffineExpr x = make_encoding(0.0, 1.0, 1, alloc).as_affine();
    QuboModel m = lower_quadratic(square(x - 1.0), alloc.count());
    CHECK(m.quadratic().empty());
    CHECK(m.linear().at(0) == -1.0);
    CHECK(m.offset() == 1.0);
    CHECK(m.energy({0}) == 1.0);
    CHECK(m.energy({1}) == 0.0);
  }

  SUBCASE("product of two 1-bit variables") {
    VarAllocator alloc;
    AffineExpr x = make_encoding(0.0, 1.0, 1, alloc).as_affine();
    AffineExpr y = make_encoding(0.0, 1.0, 1, alloc).as_affine();
    QuboModel m = lower_quadratic(QuadExpr(x) * QuadExpr(y), alloc.count());
    CHECK(m.quadratic().at({0, 1}) == 1.0);
    CHECK(m.linear().empty());
  }
}

TEST_CASE("degree three products are rejected") {
  VarAllocator alloc;
  AffineExpr x = make_encoding(0.0, 1.0, 2, alloc).as_affine();
  AffineExpr y = make_encoding(0.0, 1.0, 2, alloc).as_affine();
  QuadExpr xy = QuadExpr(x) * QuadExpr(y);
  CHECK_THROWS_AS(xy * QuadExpr(y), std::domain_error);
  CHECK_THROWS_AS(xy * xy, std::domain_error);
  CHECK_NOTHROW(xy * QuadExpr(2.0));  // scaling stays degree two
}

TEST_CASE("lowering soundness on random quadratic expressions") {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 40; ++round) {
    VarAllocator alloc;
    const int n_vars = 1 + static_cast<int>(uniform_index(rng, 3));
    std::vector<AffineExpr> xs;
    for (int v = 0; v < n_vars; ++v) {
      const int bits = 1 + static_cast<int>(uniform_index(rng, 4));
      const double lo = -5.0 + 10.0 * canonical_uniform(rng);
      const double hi = lo + 0.5 + 10.0 * canonical_uniform(rng);
      xs.push_back(make_encoding(lo, hi, bits, alloc).as_affine());
    }

    // Random sum of constants, scaled variables and pair products.
    QuadExpr expr(-2.0 + 4.0 * canonical_uniform(rng));
    const int n_terms = 1 + static_cast<int>(uniform_index(rng, 6));
    for (int term = 0; term < n_terms; ++term) {
      const double c = -3.0 + 6.0 * canonical_uniform(rng);
      const auto& a = xs[uniform_index(rng, xs.size())];
      if (canonical_uniform(rng) < 0.5) {
        expr += c * QuadExpr(a);
      } else {
        const auto& b = xs[uniform_index(rng, xs.size())];
        expr += c * (QuadExpr(a) * QuadExpr(b));
      }
    }

    QuboModel model = lower_quadratic(expr, alloc.count());
    for (const auto& [key, v] : model.quadratic()) {
      CHECK(key.first < key.second);  // bit idempotence applied
    }

    const std::size_t n = alloc.count();
    REQUIRE(n <= 12);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
      const BitVector b = bits_of(k, n);
      CHECK(std::fabs(model.energy(b) - expr.evaluate(b)) <= 1e-9);
    }
  }
}

TEST_CASE("affine arithmetic evaluates consistently") {
  VarAllocator alloc;
  AffineExpr x = make_encoding(0.0, 3.0, 2, alloc).as_affine();
  AffineExpr y = make_encoding(-1.0, 1.0, 2, alloc).as_affine();
  AffineExpr combo = 2.0 * x - y + 0.5;
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 64; ++trial) {
    const BitVector b = bits_of(rng(), 4);
    CHECK(combo.evaluate(b) ==
          doctest::Approx(2.0 * x.evaluate(b) - y.evaluate(b) + 0.5));
  }
}
