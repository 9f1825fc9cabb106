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

#ifndef QUBOREG_SOLVERS_HPP_
#define QUBOREG_SOLVERS_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "quboreg/qubo.hpp"

namespace quboreg {

/// Geometric cooling: T_{n+1} = ratio * T_n starting from t_initial; a run
/// stops once the temperature drops below t_stop. moves_per_temp proposals
/// are made at each temperature. With the default schedule a single
/// proposal per temperature gives a +-0.001 walk only ~8 units of net
/// travel against a slope-one direction, which is not enough to cross the
/// validation experiments' initial boxes; four proposals per temperature
/// are.
struct AnnealSchedule {
  double t_initial = 1000.0;
  double ratio = 0.9999;
  double t_stop = 1e-3;
  int moves_per_temp = 4;

  /// Number of temperatures visited: floor(log_ratio(t_stop/t_initial)) + 1.
  std::uint64_t temperature_steps() const;

  void validate() const;
};

struct ProposalDomain {
  double lo;
  double hi;  // may be +infinity
};

/// Move-proposal parameters for the continuous annealer: every variable
/// moves by +-step each proposal; a joint candidate leaving any declared
/// domain is rejected outright, which preserves detailed balance on the
/// truncated box.
struct ProposalConfig {
  double step = 1e-3;
  std::vector<ProposalDomain> domains;
};

struct DiscreteSolveResult {
  BitVector best;
  double best_energy = 0.0;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
};

struct ContinuousSolveResult {
  std::vector<double> best;
  double best_energy = 0.0;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
};

/// Progress hook invoked whenever the best-seen energy improves.
using ProgressFn = std::function<void(std::uint64_t step, double best_energy)>;

/// Exhaustive ground-truth minimization over all 2^n assignments, Gray-code
/// ordered with incremental energy updates. Candidate minima are re-checked
/// with a full evaluation, so the returned energy is exact; ties are broken
/// toward the lexicographically smallest bit vector. Models wider than
/// max_vars raise std::length_error.
DiscreteSolveResult brute_force(const QuboModel& model,
                                std::size_t max_vars = 24);

/// Metropolis rule: accept when delta_e <= 0, otherwise when
/// u < exp(-delta_e / temperature). Requires temperature > 0.
bool metropolis_accept(double delta_e, double temperature, double u);

/// Single-bit-flip Metropolis chain under the schedule, starting from a
/// seeded random assignment. Returns the best assignment seen; the energy
/// is re-evaluated from scratch at the end. Deterministic given the seed.
DiscreteSolveResult anneal_discrete(const QuboModel& model,
                                    const AnnealSchedule& schedule,
                                    std::uint64_t seed,
                                    const ProgressFn& progress = {});

/// Metropolis-Hastings annealer for continuous objectives. Each proposal
/// moves every variable by an independent +-step; the candidate is accepted
/// or rejected as a whole. Returns the best point seen. Deterministic given
/// the seed.
ContinuousSolveResult anneal_continuous(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<double> init, const ProposalConfig& proposal,
    const AnnealSchedule& schedule, std::uint64_t seed,
    const ProgressFn& progress = {});

}  // namespace quboreg

#endif  // QUBOREG_SOLVERS_HPP_
