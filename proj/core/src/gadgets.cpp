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

#include "quboreg/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace quboreg {

namespace {

void check_penalty(PenaltyConfig pc) {
  if (!(std::isfinite(pc.weight) && pc.weight > 0.0)) {
    throw std::domain_error("penalty weight M must be positive and finite");
  }
}

void check_qloss(QLossParams p) {
  if (!(std::isfinite(p.q) && p.q <= 0.0)) {
    throw std::domain_error("q-loss parameter q must lie in (-inf, 0]");
  }
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be finite");
  }
}

double sign_plus(double x) { return x >= 0.0 ? 1.0 : -1.0; }

bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::string to_string(GadgetVariant variant) {
  switch (variant) {
    case GadgetVariant::l1_naive:
      return "l1_naive";
    case GadgetVariant::l1_reduced:
      return "l1_reduced";
    case GadgetVariant::relu_wolfe:
      return "relu_wolfe";
    case GadgetVariant::qloss:
      return "qloss";
  }
  throw std::invalid_argument("unknown gadget variant");
}

GadgetVariant gadget_variant_from_string(const std::string& name) {
  if (name == "l1_naive") return GadgetVariant::l1_naive;
  if (name == "l1_reduced") return GadgetVariant::l1_reduced;
  if (name == "relu_wolfe" || name == "relu") return GadgetVariant::relu_wolfe;
  if (name == "qloss") return GadgetVariant::qloss;
  throw std::invalid_argument("unknown gadget variant '" + name + "'");
}

double abs_reference(double m) {
  check_finite(m, "m");
  return -std::min(-m, m);
}

double relu_reference(double m) {
  check_finite(m, "m");
  return -std::min(0.0, m);
}

double qloss_reference(double m, QLossParams params) {
  check_finite(m, "m");
  check_qloss(params);
  const double hinge = std::max(0.0, 1.0 - m);
  const double cap = 1.0 - params.q;
  return std::min(cap * cap, hinge * hinge);
}

double qloss_objective(double m, double t, QLossParams params) {
  check_finite(m, "m");
  check_finite(t, "t");
  check_qloss(params);
  const double cap = 1.0 - params.q;
  return (m - t) * (m - t) +
         cap * cap * (1.0 - sign_plus(t - 1.0)) / 2.0;
}

double l1_naive_objective(double m, double t, double z1, double z2,
                          PenaltyConfig pc) {
  check_finite(m, "m");
  check_penalty(pc);
  if (t < -1.0 || t > 1.0) {
    throw std::domain_error("l1_naive_objective requires -1 <= t <= 1");
  }
  if (z1 < 0.0 || z2 < 0.0) {
    throw std::domain_error("l1_naive_objective requires z1, z2 >= 0");
  }
  const double r = -m - z1 + z2;
  return m * t + z1 * (t + 1.0) - z2 * (t - 1.0) + pc.weight * r * r;
}

double l1_reduced_objective(double m, double z1, double z2, PenaltyConfig pc) {
  check_finite(m, "m");
  check_penalty(pc);
  if (z1 < 0.0 || z2 < 0.0) {
    throw std::domain_error("l1_reduced_objective requires z1, z2 >= 0");
  }
  const double r = -m - z1 + z2;
  return z1 + z2 + pc.weight * r * r;
}

double relu_wolfe_objective(double m, double t, double z1, double z2,
                            PenaltyConfig pc) {
  check_finite(m, "m");
  check_penalty(pc);
  if (t < -1.0 || t > 0.0) {
    throw std::domain_error("relu_wolfe_objective requires -1 <= t <= 0");
  }
  if (z1 < 0.0 || z2 < 0.0) {
    throw std::domain_error("relu_wolfe_objective requires z1, z2 >= 0");
  }
  const double r = -m - z1 + z2;
  return m * t + z1 * (t + 1.0) - z2 * t + pc.weight * r * r;
}

double legendre_conjugate_numeric(const std::function<double(double)>& f,
                                  const std::vector<double>& grid, double t) {
  if (grid.empty()) {
    throw std::domain_error("conjugate requires a non-empty grid");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (double x : grid) {
    best = std::max(best, t * x - f(x));
  }
  return best;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && std::isfinite(step)) ||
      step <= 0.0 || lo > hi) {
    throw std::domain_error("grid requires lo <= hi and step > 0");
  }
  std::vector<double> xs;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
  xs.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    xs.push_back(lo + static_cast<double>(k) * step);
  }
  return xs;
}

double soft_threshold(double a, double kappa) {
  if (kappa < 0.0) {
    throw std::domain_error("soft threshold requires kappa >= 0");
  }
  return sign_plus(a) * std::max(std::fabs(a) - kappa, 0.0);
}

double penalty_leakage_bound(double penalty_weight) {
  if (!(penalty_weight > 0.0)) {
    throw std::domain_error("penalty weight must be positive");
  }
  return 1.0 / (4.0 * penalty_weight);
}

double default_penalty_weight(double z_hi, int bits) {
  if (!(z_hi > 0.0) || bits < 1) {
    throw std::domain_error("default penalty weight requires z_hi > 0, bits >= 1");
  }
  const double resolution = z_hi / (std::ldexp(1.0, bits) - 1.0);
  return 10.0 * std::max(1.0, z_hi) / resolution;
}

QuboModel penalize_equality(const AffineExpr& residual, PenaltyConfig pc,
                            std::size_t num_vars) {
  check_penalty(pc);
  if (num_vars == 0) {
    for (const auto& [id, c] : residual.terms()) {
      num_vars = std::max(num_vars, static_cast<std::size_t>(id) + 1);
    }
  }
  return lower_quadratic(pc.weight * square(residual), num_vars);
}

namespace {

// Shared z-pair construction for the l1 and ReLU gadgets.
struct ZPair {
  FixedPointEncoding z1;
  FixedPointEncoding z2;
  AffineExpr z1_aff;
  AffineExpr z2_aff;
  AffineExpr residual;  // -input - z1 + z2
};

ZPair make_z_pair(const AffineExpr& input, double z_hi, int bits,
                  VarAllocator& alloc) {
  if (!(std::isfinite(z_hi) && z_hi > 0.0)) {
    throw std::domain_error("z_hi must be positive and finite");
  }
  if (input.is_constant() && std::fabs(input.constant()) > z_hi) {
    throw std::domain_error(
        "infeasible gadget: |m| = " + std::to_string(std::fabs(input.constant())) +
        " exceeds z_hi = " + std::to_string(z_hi));
  }
  FixedPointEncoding z1 = FixedPointEncoding::allocate(0.0, z_hi, bits, alloc);
  FixedPointEncoding z2 = FixedPointEncoding::allocate(0.0, z_hi, bits, alloc);
  AffineExpr z1_aff = z1.as_affine();
  AffineExpr z2_aff = z2.as_affine();
  AffineExpr residual = -input - z1_aff + z2_aff;
  return ZPair{std::move(z1), std::move(z2), std::move(z1_aff),
               std::move(z2_aff), std::move(residual)};
}

}  // namespace

GadgetExpansion build_l1_gadget(const AffineExpr& input, double z_hi, int bits,
                                PenaltyConfig pc, GadgetVariant variant,
                                VarAllocator& alloc, int t_bits) {
  check_penalty(pc);
  if (variant != GadgetVariant::l1_naive &&
      variant != GadgetVariant::l1_reduced) {
    throw std::invalid_argument("build_l1_gadget handles l1 variants only");
  }
  ZPair z = make_z_pair(input, z_hi, bits, alloc);

  GadgetExpansion g{QuboModel{}, input, {}, pc, variant};
  QuadExpr expr;
  if (variant == GadgetVariant::l1_reduced) {
    expr = QuadExpr(z.z1_aff) + QuadExpr(z.z2_aff) +
           pc.weight * square(z.residual);
  } else {
    FixedPointEncoding t = FixedPointEncoding::allocate(-1.0, 1.0, t_bits, alloc);
    AffineExpr t_aff = t.as_affine();
    expr = QuadExpr(input) * QuadExpr(t_aff) +
           QuadExpr(z.z1_aff) * QuadExpr(t_aff + 1.0) -
           QuadExpr(z.z2_aff) * QuadExpr(t_aff - 1.0) +
           pc.weight * square(z.residual);
    g.aux.emplace("t", std::move(t));
  }
  g.model = lower_quadratic(expr, alloc.count());
  g.aux.emplace("z1", std::move(z.z1));
  g.aux.emplace("z2", std::move(z.z2));
  return g;
}

GadgetExpansion build_relu_gadget(const AffineExpr& input, double z_hi,
                                  int bits, PenaltyConfig pc,
                                  VarAllocator& alloc, int t_bits) {
  check_penalty(pc);
  ZPair z = make_z_pair(input, z_hi, bits, alloc);
  FixedPointEncoding t = FixedPointEncoding::allocate(-1.0, 0.0, t_bits, alloc);
  AffineExpr t_aff = t.as_affine();
  QuadExpr expr = QuadExpr(input) * QuadExpr(t_aff) +
                  QuadExpr(z.z1_aff) * QuadExpr(t_aff + 1.0) -
                  QuadExpr(z.z2_aff) * QuadExpr(t_aff) +
                  pc.weight * square(z.residual);

  GadgetExpansion g{QuboModel{}, input, {}, pc, GadgetVariant::relu_wolfe};
  g.model = lower_quadratic(expr, alloc.count());
  g.aux.emplace("t", std::move(t));
  g.aux.emplace("z1", std::move(z.z1));
  g.aux.emplace("z2", std::move(z.z2));
  return g;
}

namespace {

// Rosenberg penalty forcing s = x AND y: xy - 2sx - 2sy + 3s is zero when
// s = xy and at least 1 otherwise.
QuadExpr and_penalty(const AffineExpr& s, const AffineExpr& x,
                     const AffineExpr& y, double weight) {
  return weight * (QuadExpr(x) * QuadExpr(y) -
                   2.0 * (QuadExpr(s) * QuadExpr(x)) -
                   2.0 * (QuadExpr(s) * QuadExpr(y)) + 3.0 * QuadExpr(s));
}

}  // namespace

GadgetExpansion build_qloss_gadget(const AffineExpr& input, QLossParams params,
                                   TEncodingSpec t_spec, VarAllocator& alloc,
                                   double indicator_weight) {
  check_qloss(params);
  if (!(t_spec.lo <= params.q && t_spec.hi >= 2.0)) {
    throw std::domain_error("q-loss t range must contain [q, 2]");
  }
  if (t_spec.bits < 1 || t_spec.bits > 52) {
    throw std::domain_error("q-loss t encoding needs 1..52 bits");
  }

  const double levels = std::ldexp(1.0, t_spec.bits);  // 2^bits
  const double res = (t_spec.hi - t_spec.lo) / (levels - 1.0);
  const double k0_real = (1.0 - t_spec.lo) / res;
  const auto k0 = static_cast<std::uint64_t>(std::llround(k0_real));
  if (std::fabs(k0_real - static_cast<double>(k0)) > 1e-9 * std::max(1.0, k0_real)) {
    throw std::domain_error(
        "q-loss threshold t = 1 does not fall on the encoding grid");
  }
  if (k0 < 1 || static_cast<double>(k0) > levels - 1.0) {
    throw std::domain_error("q-loss threshold must lie inside the t range");
  }
  const auto region = static_cast<std::uint64_t>(levels) - k0;
  if (!is_power_of_two(region)) {
    throw std::domain_error(
        "q-loss indicator needs a power-of-two number of grid points at or "
        "above t = 1; adjust the t encoding");
  }

  const double cap = 1.0 - params.q;
  const double weight = indicator_weight > 0.0
                            ? indicator_weight
                            : 10.0 * std::max(1.0, cap * cap);

  FixedPointEncoding t =
      FixedPointEncoding::allocate(t_spec.lo, t_spec.hi, t_spec.bits, alloc);
  AffineExpr t_aff = t.as_affine();

  // t >= 1 exactly when the top `and_bits` bits of the encoding are all
  // set. Fold them into the indicator with an AND chain.
  int and_bits = 0;
  for (std::uint64_t r = region; r < static_cast<std::uint64_t>(levels);
       r <<= 1) {
    ++and_bits;
  }

  GadgetExpansion g{QuboModel{}, input, {}, PenaltyConfig{weight},
                    GadgetVariant::qloss};
  QuadExpr penalties;
  AffineExpr current =
      AffineExpr::variable(t.var_ids()[static_cast<std::size_t>(t_spec.bits - 1)]);
  for (int k = 1; k < and_bits; ++k) {
    AffineExpr next_bit = AffineExpr::variable(
        t.var_ids()[static_cast<std::size_t>(t_spec.bits - 1 - k)]);
    FixedPointEncoding link = FixedPointEncoding::allocate(0.0, 1.0, 1, alloc);
    AffineExpr link_aff = link.as_affine();
    penalties += and_penalty(link_aff, current, next_bit, weight);
    const std::string name = (k == and_bits - 1) ? "s" : "and" + std::to_string(k - 1);
    g.aux.emplace(name, std::move(link));
    current = link_aff;
  }
  if (and_bits == 1) {
    // Single-bit region: tie a dedicated indicator to the top bit.
    FixedPointEncoding s = FixedPointEncoding::allocate(0.0, 1.0, 1, alloc);
    AffineExpr s_aff = s.as_affine();
    penalties += weight * square(s_aff - current);
    g.aux.emplace("s", std::move(s));
    current = s_aff;
  }

  QuadExpr expr = square(input - t_aff) +
                  cap * cap * QuadExpr(AffineExpr(1.0) - current) + penalties;
  g.model = lower_quadratic(expr, alloc.count());
  g.aux.emplace("t", std::move(t));
  return g;
}

RegularizedLsProblem build_regularized_ls(
    const std::vector<RegularizedLsTerm>& terms,
    const RegularizedLsOptions& options) {
  if (options.m_bits < 1 || options.z_bits < 1) {
    throw std::domain_error("encodings need at least 1 bit");
  }
  if (!(options.m_hi > 0.0 && options.z_hi > 0.0)) {
    throw std::domain_error("m_hi and z_hi must be positive");
  }
  if (options.m_hi > options.z_hi) {
    throw std::domain_error("z_hi must cover the m range");
  }
  const double pm = options.penalty_weight > 0.0
                        ? options.penalty_weight
                        : default_penalty_weight(options.z_hi, options.z_bits);

  // Every decodable m must land on the z lattice, or the equality penalty
  // punishes representable inputs.
  const double res_z = options.z_hi / (std::ldexp(1.0, options.z_bits) - 1.0);
  const double res_m =
      2.0 * options.m_hi / (std::ldexp(1.0, options.m_bits) - 1.0);
  const double ratio = res_m / res_z;
  const double anchor = options.m_hi / res_z;
  if (std::fabs(ratio - std::round(ratio)) > 1e-9 ||
      std::fabs(anchor - std::round(anchor)) > 1e-9) {
    throw std::domain_error(
        "m encoding grid is not aligned with the z encoding grid");
  }

  VarAllocator alloc;
  QuboBuilder builder;
  RegularizedLsProblem problem;
  for (const auto& term : terms) {
    if (!(std::isfinite(term.a) && std::isfinite(term.lambda)) ||
        term.lambda < 0.0) {
      throw std::domain_error("regularized LS needs finite a and lambda >= 0");
    }
    if (std::fabs(term.a) > options.m_hi) {
      throw std::domain_error("target a outside the representable m range");
    }
    FixedPointEncoding m_enc = FixedPointEncoding::allocate(
        -options.m_hi, options.m_hi, options.m_bits, alloc);
    AffineExpr m_aff = m_enc.as_affine();
    GadgetExpansion gadget =
        build_l1_gadget(m_aff, options.z_hi, options.z_bits,
                        PenaltyConfig{pm}, options.variant, alloc);
    builder.add_model(lower_quadratic(square(m_aff - term.a), alloc.count()));
    builder.add_model(scaled(gadget.model, term.lambda));
    problem.m_encodings.push_back(std::move(m_enc));
    problem.gadgets.push_back(std::move(gadget));
  }
  builder.require_vars(alloc.count());
  problem.model = builder.build();
  return problem;
}

}  // namespace quboreg
