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

#include "quboreg/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "quboreg/rng.hpp"

namespace quboreg {

namespace {

// Per-variable view of a sparse model: flipping bit i changes the energy by
// (1 - 2 b_i) * (linear[i] + sum over set neighbors of the coupling).
struct Adjacency {
  std::vector<double> linear;
  std::vector<std::vector<std::pair<VarId, double>>> neighbors;

  explicit Adjacency(const QuboModel& model)
      : linear(model.num_vars(), 0.0), neighbors(model.num_vars()) {
    for (const auto& [i, v] : model.linear()) linear[i] = v;
    for (const auto& [key, v] : model.quadratic()) {
      neighbors[key.first].emplace_back(key.second, v);
      neighbors[key.second].emplace_back(key.first, v);
    }
  }

  double flip_delta(const BitVector& bits, VarId i) const {
    double acc = linear[i];
    for (const auto& [j, v] : neighbors[i]) {
      if (bits[j]) acc += v;
    }
    return bits[i] ? -acc : acc;
  }
};

}  // namespace

std::uint64_t AnnealSchedule::temperature_steps() const {
  validate();
  const double n = std::floor(std::log(t_stop / t_initial) / std::log(ratio));
  return static_cast<std::uint64_t>(n) + 1;
}

void AnnealSchedule::validate() const {
  if (!(std::isfinite(t_initial) && std::isfinite(t_stop) &&
        t_initial > t_stop && t_stop > 0.0)) {
    throw std::domain_error("schedule requires t_initial > t_stop > 0");
  }
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::domain_error("schedule requires 0 < ratio < 1");
  }
  if (moves_per_temp < 1) {
    throw std::domain_error("schedule requires moves_per_temp >= 1");
  }
}

bool metropolis_accept(double delta_e, double temperature, double u) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::domain_error("metropolis_accept requires temperature > 0");
  }
  if (delta_e <= 0.0) return true;
  return u < std::exp(-delta_e / temperature);
}

DiscreteSolveResult brute_force(const QuboModel& model, std::size_t max_vars) {
  const std::size_t n = model.num_vars();
  if (n > max_vars) {
    throw std::length_error("brute force over " + std::to_string(n) +
                            " variables exceeds the cap of " +
                            std::to_string(max_vars));
  }

  DiscreteSolveResult result;
  BitVector bits(n, 0);
  result.best = bits;
  result.best_energy = model.energy(bits);
  result.steps = std::uint64_t{1} << n;
  if (n == 0) return result;

  const Adjacency adj(model);
  double running = result.best_energy;
  // Gray-code sweep: state k differs from k-1 in bit ctz(k). The running
  // energy is a prefilter only; anything within the margin of the best is
  // re-evaluated exactly, and the accumulator is resynced periodically so
  // drift stays far below the margin.
  constexpr double kMargin = 1e-6;
  constexpr std::uint64_t kResync = 4096;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto flip = static_cast<VarId>(std::countr_zero(k));
    running += adj.flip_delta(bits, flip);
    bits[flip] ^= 1u;
    if ((k & (kResync - 1)) == 0) running = model.energy(bits);
    if (running < result.best_energy + kMargin) {
      const double exact = model.energy(bits);
      if (exact < result.best_energy ||
          (exact == result.best_energy &&
           std::lexicographical_compare(bits.begin(), bits.end(),
                                        result.best.begin(),
                                        result.best.end()))) {
        result.best_energy = exact;
        result.best = bits;
      }
    }
  }
  return result;
}

DiscreteSolveResult anneal_discrete(const QuboModel& model,
                                    const AnnealSchedule& schedule,
                                    std::uint64_t seed,
                                    const ProgressFn& progress) {
  schedule.validate();
  const std::size_t n = model.num_vars();
  std::mt19937_64 rng(seed);

  DiscreteSolveResult result;
  result.seed = seed;
  BitVector bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  result.best = bits;
  result.best_energy = model.energy(bits);

  if (n == 0) {
    result.steps = 0;
    return result;
  }

  const Adjacency adj(model);
  double energy = result.best_energy;
  std::uint64_t step = 0;
  constexpr std::uint64_t kResync = 4096;
  for (double temp = schedule.t_initial; temp >= schedule.t_stop;
       temp *= schedule.ratio) {
    for (int k = 0; k < schedule.moves_per_temp; ++k) {
      ++step;
      const auto i = static_cast<VarId>(uniform_index(rng, n));
      const double delta = adj.flip_delta(bits, i);
      const double u = delta <= 0.0 ? 0.0 : canonical_uniform(rng);
      if (metropolis_accept(delta, temp, u)) {
        bits[i] ^= 1u;
        energy += delta;
        if ((step & (kResync - 1)) == 0) energy = model.energy(bits);
        if (energy < result.best_energy) {
          result.best_energy = energy;
          result.best = bits;
          if (progress) progress(step, result.best_energy);
        }
      }
    }
  }
  result.steps = step;
  // The running energy carries float drift; report the exact value.
  result.best_energy = model.energy(result.best);
  return result;
}

ContinuousSolveResult anneal_continuous(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<double> init, const ProposalConfig& proposal,
    const AnnealSchedule& schedule, std::uint64_t seed,
    const ProgressFn& progress) {
  schedule.validate();
  if (!(proposal.step > 0.0) || !std::isfinite(proposal.step)) {
    throw std::domain_error("proposal step must be positive and finite");
  }
  if (proposal.domains.size() != init.size()) {
    throw std::invalid_argument("init and domain sizes differ");
  }
  for (std::size_t i = 0; i < init.size(); ++i) {
    const auto& d = proposal.domains[i];
    if (!(d.lo <= init[i] && init[i] <= d.hi)) {
      throw std::domain_error("initial point leaves the declared domain");
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<double> x = std::move(init);
  std::vector<double> cand(x.size());
  double energy = objective(x);

  ContinuousSolveResult result;
  result.seed = seed;
  result.best = x;
  result.best_energy = energy;

  std::uint64_t step = 0;
  for (double temp = schedule.t_initial; temp >= schedule.t_stop;
       temp *= schedule.ratio) {
    for (int k = 0; k < schedule.moves_per_temp; ++k) {
      ++step;
      bool in_domain = true;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double dir =
            canonical_uniform(rng) < 0.5 ? proposal.step : -proposal.step;
        cand[i] = x[i] + dir;
        const auto& d = proposal.domains[i];
        if (cand[i] < d.lo || cand[i] > d.hi) in_domain = false;
      }
      if (!in_domain) continue;  // rejected proposals still consume a move
      const double cand_energy = objective(cand);
      const double delta = cand_energy - energy;
      const double u = delta <= 0.0 ? 0.0 : canonical_uniform(rng);
      if (metropolis_accept(delta, temp, u)) {
        x.swap(cand);
        energy = cand_energy;
        if (energy < result.best_energy) {
          result.best_energy = energy;
          result.best = x;
          if (progress) progress(step, result.best_energy);
        }
      }
    }
  }
  result.steps = step;
  return result;
}

}  // namespace quboreg
