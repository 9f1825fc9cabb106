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

#ifndef QUBOREG_GADGETS_HPP_
#define QUBOREG_GADGETS_HPP_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "quboreg/encoding.hpp"
#include "quboreg/qubo.hpp"

namespace quboreg {

/// Weight of the squared equality penalty. Must be positive; large enough
/// values make constraint-violating states strictly suboptimal, but any
/// finite M leaks up to 1/(4M) below the exact function value (see
/// penalty_leakage_bound).
struct PenaltyConfig {
  double weight;
};

/// Parameter of the q-loss family; q <= 0.
struct QLossParams {
  double q;
};

enum class GadgetVariant { l1_naive, l1_reduced, relu_wolfe, qloss };

std::string to_string(GadgetVariant variant);
GadgetVariant gadget_variant_from_string(const std::string& name);

// ---------------------------------------------------------------------------
// Reference evaluators (ground truth the gadgets are tested against).
// ---------------------------------------------------------------------------

/// |m| written as -min(-m, m).
double abs_reference(double m);

/// -min(0, m) = max(0, -m); the conventional ReLU of -m.
double relu_reference(double m);

/// min[(1-q)^2, (max[0, 1-m])^2].
double qloss_reference(double m, QLossParams params);

/// (m - t)^2 + (1-q)^2 (1 - sign(t-1))/2 with sign(0) = +1, so t = 1
/// incurs no penalty. Minimizing over t recovers qloss_reference.
double qloss_objective(double m, double t, QLossParams params);

/// m t + z1 (t+1) - z2 (t-1) + M (-m - z1 + z2)^2 on the box
/// -1 <= t <= 1, z1 >= 0, z2 >= 0. At the feasible aux point
/// (z1, z2) = (max(-m,0), max(m,0)) this is identically |m| for every t.
double l1_naive_objective(double m, double t, double z1, double z2,
                          PenaltyConfig pc);

/// z1 + z2 + M (-m - z1 + z2)^2 with z1, z2 >= 0; the two-variable form
/// obtained by eliminating t through the equality constraint z2 = m + z1.
double l1_reduced_objective(double m, double z1, double z2, PenaltyConfig pc);

/// m t + z1 (t+1) - z2 t + M (-m - z1 + z2)^2 on -1 <= t <= 0, z >= 0.
/// The penalty sign is positive: a negative squared penalty inside a
/// minimization would be unbounded below.
double relu_wolfe_objective(double m, double t, double z1, double z2,
                            PenaltyConfig pc);

/// Grid approximation of the convex conjugate sup_x { t x - f(x) }:
/// the maximum of t x - f(x) over the sample points.
double legendre_conjugate_numeric(const std::function<double(double)>& f,
                                  const std::vector<double>& grid, double t);

/// Uniform grid helper: lo, lo+step, ..., up to and including hi (within
/// half a step).
std::vector<double> uniform_grid(double lo, double hi, double step);

/// sign(a) * max(|a| - kappa, 0): the minimizer of (m - a)^2 + 2 kappa |m|.
double soft_threshold(double a, double kappa);

/// Worst-case amount by which a penalty-form minimum can undershoot the
/// exact function value: 1 / (4 M).
double penalty_leakage_bound(double penalty_weight);

/// Default penalty weight 10 * max(1, z_hi) / resolution, which dominates
/// the linear term's maximum slope at one grid step of the z encodings.
double default_penalty_weight(double z_hi, int bits);

// ---------------------------------------------------------------------------
// Gadget construction.
// ---------------------------------------------------------------------------

/// A QUBO fragment realizing one regularizer instance: minimizing the
/// fragment over the auxiliary bits (with the input held fixed) reproduces
/// the reference function at the decoded input value, up to encoding
/// resolution and penalty leakage.
struct GadgetExpansion {
  QuboModel model;
  AffineExpr input;
  std::map<std::string, FixedPointEncoding> aux;
  PenaltyConfig penalty;
  GadgetVariant variant;
};

/// Builds the l1 gadget. The reduced variant allocates 2*bits auxiliary
/// variables (z1, z2 on [0, z_hi]); the naive variant adds a t encoding on
/// [-1, 1] with t_bits bits. If the input is a fixed constant m, |m| must
/// not exceed z_hi: the constraint -m - z1 + z2 = 0 would otherwise be
/// unsatisfiable and the minimum meaningless.
GadgetExpansion build_l1_gadget(const AffineExpr& input, double z_hi, int bits,
                                PenaltyConfig pc, GadgetVariant variant,
                                VarAllocator& alloc, int t_bits = 8);

/// ReLU-type gadget with t on [-1, 0].
GadgetExpansion build_relu_gadget(const AffineExpr& input, double z_hi,
                                  int bits, PenaltyConfig pc,
                                  VarAllocator& alloc, int t_bits = 8);

/// Requested t encoding for the q-loss gadget. The range must contain
/// [q, 2] and the threshold t = 1 must fall exactly on the encoding grid
/// with a power-of-two number of grid points at or above it, so the
/// indicator bit can be tied to the top region with quadratic penalties.
struct TEncodingSpec {
  double lo;
  double hi;
  int bits;
};

/// q-loss gadget: (input - t)^2 + (1-q)^2 (1 - s) plus penalties forcing
/// the indicator bit s to equal [t >= 1]. The sign term of the Legendre
/// form becomes the one-body term (1-q)^2 (1 - s). indicator_weight <= 0
/// selects 10 * max(1, (1-q)^2) automatically.
GadgetExpansion build_qloss_gadget(const AffineExpr& input, QLossParams params,
                                   TEncodingSpec t_spec, VarAllocator& alloc,
                                   double indicator_weight = 0.0);

/// Lowers M * residual^2 for an affine residual. The model spans
/// num_vars variables; pass 0 to infer max id + 1 from the residual.
QuboModel penalize_equality(const AffineExpr& residual, PenaltyConfig pc,
                            std::size_t num_vars = 0);

// ---------------------------------------------------------------------------
// Composition: l1-regularized least squares.
// ---------------------------------------------------------------------------

struct RegularizedLsTerm {
  double a;
  double lambda;
};

struct RegularizedLsOptions {
  double m_hi = 5.08;
  int m_bits = 7;
  double z_hi = 10.2;
  int z_bits = 8;
  double penalty_weight = 0.0;  // <= 0 selects default_penalty_weight
  GadgetVariant variant = GadgetVariant::l1_reduced;
};

struct RegularizedLsProblem {
  QuboModel model;
  std::vector<FixedPointEncoding> m_encodings;
  std::vector<GadgetExpansion> gadgets;
};

/// Builds sum_k [ (m_k - a_k)^2 + lambda_k * l1(m_k) ] over one shared
/// allocator, each m_k encoded on [-m_hi, m_hi]. The m grid must be a
/// sublattice of the z grid; otherwise the equality penalty would punish
/// every m value that is not z-representable.
RegularizedLsProblem build_regularized_ls(
    const std::vector<RegularizedLsTerm>& terms,
    const RegularizedLsOptions& options = {});

}  // namespace quboreg

#endif  // QUBOREG_GADGETS_HPP_
