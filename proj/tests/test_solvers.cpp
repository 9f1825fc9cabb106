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

#include "quboreg/gadgets.hpp"
#include "quboreg/rng.hpp"
#include "quboreg/solvers.hpp"

using namespace quboreg;

namespace {

BitVector bits_of(std::uint64_t k, std::size_t n) {
  BitVector b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = (k >> i) & 1u;
  return b;
}

QuboModel random_qubo(std::mt19937_64& rng, std::size_t n) {
  QuboBuilder builder(n);
  for (std::size_t i = 0; i < n; ++i) {
    builder.set_linear(static_cast<VarId>(i),
                       -10.0 + 20.0 * canonical_uniform(rng));
    for (std::size_t j = i + 1; j < n; ++j) {
      if (canonical_uniform(rng) < 0.5) {
        builder.set_quadratic(static_cast<VarId>(i), static_cast<VarId>(j),
                              -10.0 + 20.0 * canonical_uniform(rng));
      }
    }
  }
  return builder.build();
}

// Plain loop over all assignments, evaluating each from scratch; the
// reference for the Gray-code implementation.
double enumerate_min(const QuboModel& m) {
  double best = INFINITY;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << m.num_vars()); ++k) {
    best = std::min(best, m.energy(bits_of(k, m.num_vars())));
  }
  return best;
}

}  // namespace

TEST_CASE("schedule arithmetic") {
  AnnealSchedule sched;  // T1 = 1000, ratio = 0.9999, stop 1e-3
  // Closed form: floor(ln(1e-6)/ln(0.9999)) + 1 = floor(138148.198) + 1.
  CHECK(sched.temperature_steps() == 138149);

  // Independent route: count the multiplicative loop directly.
  std::uint64_t count = 0;
  for (double t = sched.t_initial; t >= sched.t_stop; t *= sched.ratio) {
    ++count;
  }
  CHECK(count == sched.temperature_steps());

  AnnealSchedule bad = sched;
  bad.t_stop = 2000.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = sched;
  bad.ratio = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  bad = sched;
  bad.moves_per_temp = 0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("metropolis acceptance rule") {
  CHECK(metropolis_accept(-1.0, 5.0, 0.999));
  CHECK(metropolis_accept(0.0, 5.0, 0.999));
  CHECK_FALSE(metropolis_accept(1.0, 1e-9, 0.5));
  // exp(-1) = 0.3679 > 0.3
  CHECK(metropolis_accept(1.0, 1.0, 0.3));
  CHECK_FALSE(metropolis_accept(1.0, 1.0, 0.4));
  CHECK_THROWS_AS(metropolis_accept(1.0, 0.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(metropolis_accept(1.0, -1.0, 0.5), std::domain_error);
}

TEST_CASE("brute force on hand-checked models") {
  SUBCASE("single negative linear term") {
    QuboModel m(1, {}, {{0, -1.0}}, 0.0);
    const DiscreteSolveResult r = brute_force(m);
    CHECK(r.best == BitVector{1});
    CHECK(r.best_energy == -1.0);
    CHECK(r.steps == 2);
  }

  SUBCASE("zero model ties break to the lexicographically smallest bits") {
    QuboModel m(3, {}, {}, 0.0);
    const DiscreteSolveResult r = brute_force(m);
    CHECK(r.best == BitVector{0, 0, 0});
    CHECK(r.best_energy == 0.0);
  }

  SUBCASE("empty model") {
    const DiscreteSolveResult r = brute_force(QuboModel());
    CHECK(r.best.empty());
    CHECK(r.best_energy == 0.0);
  }

  SUBCASE("cap is enforced") {
    QuboModel m(30, {}, {}, 0.0);
    CHECK_THROWS_AS(brute_force(m), std::length_error);
    CHECK_NOTHROW(brute_force(m, 30));
  }
}

TEST_CASE("brute force agrees with plain enumeration on random models") {
  std::mt19937_64 rng(2101);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    QuboModel m = random_qubo(rng, n);
    const DiscreteSolveResult r = brute_force(m);
    CHECK(r.best_energy == doctest::Approx(enumerate_min(m)).epsilon(1e-13));
    CHECK(r.best_energy == m.energy(r.best));  // reported optimum re-evaluates
  }
}

TEST_CASE("brute force on the reduced gadget is the gadget oracle") {
  VarAllocator alloc;
  const double M = default_penalty_weight(10.23, 10);
  GadgetExpansion g =
      build_l1_gadget(AffineExpr(3.0), 10.23, 10, PenaltyConfig{M},
                      GadgetVariant::l1_reduced, alloc);
  const DiscreteSolveResult r = brute_force(g.model);
  CHECK(std::fabs(r.best_energy - 3.0) <= 1e-9);
  CHECK(std::fabs(g.aux.at("z1").decode(r.best) - 0.0) <= 1e-12);
  CHECK(std::fabs(g.aux.at("z2").decode(r.best) - 3.0) <= 1e-9);
}

TEST_CASE("discrete annealer solves trivial models") {
  AnnealSchedule quick{10.0, 0.99, 1e-3, 1};

  SUBCASE("single variable") {
    QuboModel m(1, {}, {{0, -1.0}}, 0.0);
    const DiscreteSolveResult r = anneal_discrete(m, quick, 7);
    CHECK(r.best_energy == -1.0);
    CHECK(r.seed == 7);
  }

  SUBCASE("zero model") {
    QuboModel m(2, {}, {}, 0.0);
    CHECK(anneal_discrete(m, quick, 7).best_energy == 0.0);
  }
}

TEST_CASE("discrete annealer is deterministic and never beats brute force") {
  std::mt19937_64 rng(2102);
  AnnealSchedule sched{100.0, 0.999, 1e-3, 1};
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 2 + uniform_index(rng, 10);
    QuboModel m = random_qubo(rng, n);
    const double optimum = brute_force(m).best_energy;
    const DiscreteSolveResult a = anneal_discrete(m, sched, 1234 + round);
    const DiscreteSolveResult b = anneal_discrete(m, sched, 1234 + round);
    CHECK(a.best == b.best);
    CHECK(a.best_energy == b.best_energy);
    CHECK(a.best_energy >= optimum - 1e-9);
    CHECK(a.best_energy == m.energy(a.best));
  }
}

TEST_CASE("discrete annealer finds the optimum of small random models") {
  // Default schedule, 100 random models with n <= 12; the chain should hit
  // the brute-force optimum in at least 90 of them.
  std::mt19937_64 rng(2103);
  int hits = 0;
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + uniform_index(rng, 11);
    QuboModel m = random_qubo(rng, n);
    const double optimum = brute_force(m).best_energy;
    const DiscreteSolveResult r =
        anneal_discrete(m, AnnealSchedule{}, 9000 + round);
    CHECK(r.best_energy >= optimum - 1e-9);
    if (r.best_energy <= optimum + 1e-9) ++hits;
  }
  CHECK(hits >= 90);
}

TEST_CASE("best-seen energy is monotone over the run") {
  std::mt19937_64 rng(2104);
  QuboModel m = random_qubo(rng, 10);
  double last = INFINITY;
  std::uint64_t last_step = 0;
  anneal_discrete(m, AnnealSchedule{1000.0, 0.999, 1e-3, 1}, 77,
                  [&](std::uint64_t step, double best) {
                    CHECK(best < last);
                    CHECK(step > last_step);
                    last = best;
                    last_step = step;
                  });
  CHECK(last < INFINITY);
}

TEST_CASE("continuous annealer on a convex 1-d objective") {
  const auto f = [](const std::vector<double>& x) {
    return (x[0] - 1.0) * (x[0] - 1.0);
  };
  ProposalConfig prop;
  prop.step = 1e-3;
  prop.domains = {{-10.0, 10.0}};
  const ContinuousSolveResult r =
      anneal_continuous(f, {0.0}, prop, AnnealSchedule{}, 11);
  CHECK(std::fabs(r.best[0] - 1.0) <= 0.05);
  CHECK(r.best_energy == f(r.best));
  CHECK(r.steps == AnnealSchedule{}.temperature_steps() *
                       static_cast<std::uint64_t>(
                           AnnealSchedule{}.moves_per_temp));
}

TEST_CASE("continuous annealer on a constant objective") {
  const auto f = [](const std::vector<double>&) { return 4.25; };
  ProposalConfig prop;
  prop.step = 1e-3;
  prop.domains = {{0.0, 1.0}};
  const ContinuousSolveResult r =
      anneal_continuous(f, {0.5}, prop, AnnealSchedule{1.0, 0.9, 0.01, 1}, 3);
  CHECK(r.best_energy == 4.25);
}

TEST_CASE("continuous annealer reproduces the l1 objective value") {
  // The naive objective at fixed m, annealed over (t, z1, z2), lands within
  // 0.05 of |m|.
  const double m = 4.2;
  const PenaltyConfig pc{10.0};
  const auto f = [&](const std::vector<double>& x) {
    return l1_naive_objective(m, x[0], x[1], x[2], pc);
  };
  ProposalConfig prop;
  prop.step = 1e-3;
  prop.domains = {{-1.0, 1.0},
                  {0.0, INFINITY},
                  {0.0, INFINITY}};
  const ContinuousSolveResult r =
      anneal_continuous(f, {0.3, 5.0, 5.0}, prop, AnnealSchedule{}, 99);
  CHECK(std::fabs(r.best_energy - abs_reference(m)) <= 0.05);
  CHECK(r.best_energy == f(r.best));
}

TEST_CASE("continuous annealer is deterministic given the seed") {
  const auto f = [](const std::vector<double>& x) {
    return x[0] * x[0] + 0.5 * x[1] * x[1];
  };
  ProposalConfig prop;
  prop.step = 1e-3;
  prop.domains = {{-5.0, 5.0}, {-5.0, 5.0}};
  AnnealSchedule sched{10.0, 0.999, 1e-3, 2};
  const ContinuousSolveResult a = anneal_continuous(f, {2.0, -2.0}, prop, sched, 5);
  const ContinuousSolveResult b = anneal_continuous(f, {2.0, -2.0}, prop, sched, 5);
  CHECK(a.best == b.best);
  CHECK(a.best_energy == b.best_energy);
  CHECK(a.steps == b.steps);
}

TEST_CASE("continuous annealer validates inputs") {
  const auto f = [](const std::vector<double>& x) { return x[0]; };
  ProposalConfig prop;
  prop.step = 1e-3;
  prop.domains = {{0.0, 1.0}};
  CHECK_THROWS_AS(anneal_continuous(f, {2.0}, prop, AnnealSchedule{}, 0),
                  std::domain_error);
  CHECK_THROWS_AS(anneal_continuous(f, {0.5, 0.5}, prop, AnnealSchedule{}, 0),
                  std::invalid_argument);
  ProposalConfig bad = prop;
  bad.step = 0.0;
  CHECK_THROWS_AS(anneal_continuous(f, {0.5}, bad, AnnealSchedule{}, 0),
                  std::domain_error);
}
