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

#ifndef QUBOREG_EXPERIMENTS_HPP_
#define QUBOREG_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quboreg/gadgets.hpp"
#include "quboreg/solvers.hpp"

namespace quboreg {

enum class SolverKind { continuous, discrete, brute };

std::string to_string(SolverKind solver);
SolverKind solver_kind_from_string(const std::string& name);

/// One experiment run: which gadget, how many samples, the sampling range
/// for m, the penalty weight, the annealing schedule and, for discrete
/// solvers, the encodings. penalty_weight <= 0 selects the dominance-rule
/// default for discrete runs.
struct ExperimentConfig {
  GadgetVariant variant = GadgetVariant::l1_naive;
  int n_samples = 200;
  double m_lo = -10.0;
  double m_hi = 10.0;
  double penalty_weight = 10.0;
  std::uint64_t seed = 1;
  SolverKind solver = SolverKind::continuous;
  int bits_z = 10;
  double z_hi = 10.23;
  int bits_t = 8;
  QLossParams qloss{-1.0};
  TEncodingSpec qloss_t{-3.0, 2.0, 4};
  AnnealSchedule schedule{};
  double step = 1e-3;
  double tolerance = 0.02;
  std::size_t brute_cap = 24;
  int threads = 0;  // 0 = hardware concurrency
};

/// One annealed sample: the drawn m, the best objective value, the
/// auxiliary variables at the best point (t absent for the reduced
/// variant), the gap against the reference function, and the per-sample
/// seed.
struct SampleRecord {
  double m = 0.0;
  double f_value = 0.0;
  std::optional<double> t;
  double z1 = 0.0;
  double z2 = 0.0;
  double gap = 0.0;
  std::uint64_t seed = 0;
};

/// Anneals the three-variable objective for n_samples random m values with
/// the protocol of the validation experiment: t starts uniform in [-1, 1],
/// z1 and z2 uniform in [0, 10], every variable moves by +-step per
/// proposal. Records are sorted by m.
std::vector<SampleRecord> run_fig2(const ExperimentConfig& config);

/// Same protocol for the two-variable reduced objective; records carry no
/// t column.
std::vector<SampleRecord> run_reduced(const ExperimentConfig& config);

struct VerifySample {
  double m = 0.0;
  double energy = 0.0;
  double reference = 0.0;
  double deviation = 0.0;
  bool violation = false;
};

struct VerifyReport {
  GadgetVariant variant;
  SolverKind solver;
  std::vector<VerifySample> samples;
  double max_abs_dev = 0.0;
  int violations = 0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Builds the gadget QUBO for n_samples grid-representable m values spread
/// over [m_lo, m_hi], minimizes each with the configured solver and
/// compares against the reference function. A sample counts as a penalty
/// violation when the optimum's decoded residual leaves the equality
/// constraint by more than half a grid step (for q-loss: when the
/// indicator bit disagrees with [t >= 1]). When dump_prefix is non-empty,
/// writes <prefix>-<k>.model.json and <prefix>-<k>.gadget.json per sample.
VerifyReport run_discrete_verification(
    const ExperimentConfig& config,
    const std::filesystem::path& dump_prefix = {});

struct LassoRow {
  double a = 0.0;
  double lambda = 0.0;
  double m_star = 0.0;
  double soft = 0.0;
  double abs_err = 0.0;
};

struct LassoReport {
  std::vector<LassoRow> rows;
  double max_abs_err = 0.0;
  double tolerance = 0.0;  // 2x the m-encoding resolution
  bool passed = false;
  RegularizedLsOptions options;
};

/// Solves (m - a)^2 + lambda |m| by brute force over the composed QUBO for
/// each pair and reports the minimizer against the soft-threshold closed
/// form.
LassoReport run_lasso_demo(const std::vector<RegularizedLsTerm>& pairs,
                           const RegularizedLsOptions& options = {},
                           std::size_t brute_cap = 24);

/// The stock 20-pair sweep: a in {-5, -2, 1, 3, 5} x lambda in {0, 2, 4, 6}.
std::vector<RegularizedLsTerm> default_lasso_sweep();

// CSV emission: comma separator, '.' decimal point, 12 significant digits,
// '\n' line endings, fixed column order.
void write_records_csv(std::ostream& out,
                       const std::vector<SampleRecord>& records, bool with_t);
void write_verify_csv(std::ostream& out, const VerifyReport& report);
void write_lasso_csv(std::ostream& out, const LassoReport& report);

std::string fig2_summary_json(const ExperimentConfig& config,
                              const std::vector<SampleRecord>& records);
std::string verify_summary_json(const ExperimentConfig& config,
                                const VerifyReport& report);
std::string lasso_summary_json(const LassoReport& report);

}  // namespace quboreg

#endif  // QUBOREG_EXPERIMENTS_HPP_
