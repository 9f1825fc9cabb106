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
#include <sstream>

#include "quboreg/experiments.hpp"

using namespace quboreg;

namespace {

ExperimentConfig small_fig2_config() {
  ExperimentConfig config;
  config.variant = GadgetVariant::l1_naive;
  config.n_samples = 30;
  config.seed = 424242;
  return config;
}

}  // namespace

TEST_CASE("fig2 run: schema, ordering and accuracy") {
  const ExperimentConfig config = small_fig2_config();
  const std::vector<SampleRecord> records = run_fig2(config);
  REQUIRE(records.size() == 30);

  int within = 0;
  double prev_m = -INFINITY;
  const PenaltyConfig pc{config.penalty_weight};
  for (const auto& rec : records) {
    CHECK(rec.m >= prev_m);  // sorted by m
    prev_m = rec.m;
    REQUIRE(rec.t.has_value());
    // Every row re-evaluates: f is the objective at the reported aux point.
    const double f =
        l1_naive_objective(rec.m, *rec.t, rec.z1, rec.z2, pc);
    CHECK(std::fabs(f - rec.f_value) <= 1e-12);
    CHECK(std::fabs(rec.gap - (rec.f_value - abs_reference(rec.m))) <= 1e-12);
    if (std::fabs(rec.gap) <= 0.1) ++within;
  }
  CHECK(within >= 27);  // 90% at this sample size; the full criterion runs at 200

  SUBCASE("identical config reproduces identical records") {
    const std::vector<SampleRecord> again = run_fig2(config);
    REQUIRE(again.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(again[i].m == records[i].m);
      CHECK(again[i].f_value == records[i].f_value);
      CHECK(again[i].seed == records[i].seed);
    }
  }

  SUBCASE("thread count does not change the records") {
    ExperimentConfig threaded = config;
    threaded.threads = 3;
    const std::vector<SampleRecord> par = run_fig2(threaded);
    REQUIRE(par.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(par[i].m == records[i].m);
      CHECK(par[i].f_value == records[i].f_value);
    }
  }
}

TEST_CASE("reduced run drops the t column and stays accurate") {
  ExperimentConfig config = small_fig2_config();
  config.variant = GadgetVariant::l1_reduced;
  const std::vector<SampleRecord> records = run_reduced(config);
  REQUIRE(records.size() == 30);

  const PenaltyConfig pc{config.penalty_weight};
  int within = 0;
  for (const auto& rec : records) {
    CHECK_FALSE(rec.t.has_value());
    const double f = l1_reduced_objective(rec.m, rec.z1, rec.z2, pc);
    CHECK(std::fabs(f - rec.f_value) <= 1e-12);
    if (std::fabs(rec.gap) <= 0.1) ++within;
  }
  CHECK(within >= 27);
}

TEST_CASE("experiment runners validate their configs") {
  ExperimentConfig config = small_fig2_config();
  config.variant = GadgetVariant::l1_reduced;
  CHECK_THROWS_AS(run_fig2(config), std::invalid_argument);
  config.variant = GadgetVariant::l1_naive;
  CHECK_THROWS_AS(run_reduced(config), std::invalid_argument);
  config.solver = SolverKind::brute;
  CHECK_THROWS_AS(run_fig2(config), std::invalid_argument);
  config.solver = SolverKind::continuous;
  config.n_samples = -1;
  CHECK_THROWS_AS(run_fig2(config), std::invalid_argument);
  config.n_samples = 1;
  config.penalty_weight = 0.0;
  CHECK_THROWS_AS(run_fig2(config), std::invalid_argument);

  ExperimentConfig verify;
  verify.solver = SolverKind::continuous;
  CHECK_THROWS_AS(run_discrete_verification(verify), std::invalid_argument);
}

TEST_CASE("records CSV has the fixed schema") {
  SampleRecord rec;
  rec.m = 1.5;
  rec.f_value = 1.5;
  rec.t = 0.25;
  rec.z1 = 0.0;
  rec.z2 = 1.5;
  rec.gap = 0.0;
  rec.seed = 42;

  std::ostringstream with_t;
  write_records_csv(with_t, {rec}, true);
  CHECK(with_t.str() ==
        "m,f,t,z1,z2,gap,seed\n"
        "1.5,1.5,0.25,0,1.5,0,42\n");

  std::ostringstream without_t;
  write_records_csv(without_t, {rec}, false);
  CHECK(without_t.str() ==
        "m,f,z1,z2,gap,seed\n"
        "1.5,1.5,0,1.5,0,42\n");

  std::ostringstream empty;
  write_records_csv(empty, {}, true);
  CHECK(empty.str() == "m,f,t,z1,z2,gap,seed\n");  // header only
}

TEST_CASE("brute-force verification sweep on the reduced gadget") {
  ExperimentConfig config;
  config.variant = GadgetVariant::l1_reduced;
  config.solver = SolverKind::brute;
  config.n_samples = 5;
  config.m_lo = -10.0;
  config.m_hi = 10.0;
  config.bits_z = 6;
  config.z_hi = 12.6;  // resolution 0.2; -10..10 land on the grid
  config.penalty_weight = 0.0;  // default dominance rule
  config.tolerance = 0.02;

  const VerifyReport report = run_discrete_verification(config);
  REQUIRE(report.samples.size() == 5);
  CHECK(report.max_abs_dev <= 1e-9);
  CHECK(report.violations == 0);
  CHECK(report.passed);
  for (const auto& s : report.samples) {
    CHECK(std::fabs(s.energy - abs_reference(s.m)) <= 1e-9);
  }
  CHECK(report.samples.front().m == doctest::Approx(-10.0));
  CHECK(report.samples.back().m == doctest::Approx(10.0));
  CHECK(std::fabs(report.samples[2].m) <= 1e-12);
}

TEST_CASE("discrete-SA verification stays above brute force") {
  ExperimentConfig config;
  config.variant = GadgetVariant::l1_reduced;
  config.solver = SolverKind::discrete;
  config.n_samples = 7;
  config.m_lo = -6.0;
  config.m_hi = 6.0;
  config.bits_z = 6;
  config.z_hi = 6.3;
  config.penalty_weight = 100.0;
  config.tolerance = 0.05;
  config.seed = 5150;

  const VerifyReport sa = run_discrete_verification(config);
  ExperimentConfig brute = config;
  brute.solver = SolverKind::brute;
  const VerifyReport exact = run_discrete_verification(brute);

  REQUIRE(sa.samples.size() == exact.samples.size());
  for (std::size_t i = 0; i < sa.samples.size(); ++i) {
    CHECK(sa.samples[i].m == exact.samples[i].m);
    CHECK(sa.samples[i].energy >= exact.samples[i].energy - 1e-9);
  }
}

TEST_CASE("qloss verification sweep by brute force") {
  ExperimentConfig config;
  config.variant = GadgetVariant::qloss;
  config.solver = SolverKind::brute;
  config.n_samples = 5;
  config.m_lo = -2.0;
  config.m_hi = 2.0;
  config.bits_z = 10;  // grid snapping for m uses the z resolution
  config.z_hi = 10.23;
  config.qloss = {-1.0};
  config.qloss_t = {-3.0, 2.0, 4};
  config.tolerance = 0.02;

  const VerifyReport report = run_discrete_verification(config);
  CHECK(report.max_abs_dev <= 1e-9);
  CHECK(report.violations == 0);
  CHECK(report.passed);
}

TEST_CASE("lasso demo matches the soft-threshold oracle") {
  const LassoReport report = run_lasso_demo(default_lasso_sweep());
  CHECK(report.rows.size() == 20);
  CHECK(report.tolerance == doctest::Approx(4.0 * 5.08 / 127.0));
  CHECK(report.passed);
  for (const auto& row : report.rows) {
    CHECK(row.abs_err <= report.tolerance);
  }

  std::ostringstream csv;
  write_lasso_csv(csv, report);
  CHECK(csv.str().rfind("a,lambda,m_star,soft_threshold,abs_err\n", 0) == 0);
}

TEST_CASE("summary json carries the headline statistics") {
  ExperimentConfig config = small_fig2_config();
  config.n_samples = 4;
  const std::vector<SampleRecord> records = run_fig2(config);
  const std::string summary = fig2_summary_json(config, records);
  CHECK(summary.find("\"frac_within_0_1\"") != std::string::npos);
  CHECK(summary.find("\"max_abs_dev\"") != std::string::npos);
  CHECK(summary.find("\"n_samples\": 4") != std::string::npos);
  CHECK(summary.find("\"variant\": \"l1_naive\"") != std::string::npos);

  // Byte-identical for identical runs.
  CHECK(summary == fig2_summary_json(config, run_fig2(config)));
}
