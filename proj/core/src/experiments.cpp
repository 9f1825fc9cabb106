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

#include "quboreg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "quboreg/model_io.hpp"
#include "quboreg/rng.hpp"

namespace quboreg {

namespace {

using nlohmann::json;

constexpr double kZInitHi = 10.0;  // z1, z2 start uniform in [0, 10]

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void validate_common(const ExperimentConfig& config) {
  if (config.n_samples < 0) {
    throw std::invalid_argument("n_samples must be non-negative");
  }
  if (!(config.m_lo <= config.m_hi) || !std::isfinite(config.m_lo) ||
      !std::isfinite(config.m_hi)) {
    throw std::invalid_argument("m range must be finite with m_lo <= m_hi");
  }
  config.schedule.validate();
}

// Runs fn(i) for i in [0, n) on config.threads workers; results land in
// index order so the parallelism never shows in the output.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  int workers = threads > 0 ? threads : static_cast<int>(hw ? hw : 1);
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<SampleRecord> run_continuous(const ExperimentConfig& config,
                                         bool naive) {
  validate_common(config);
  if (config.solver != SolverKind::continuous) {
    throw std::invalid_argument("this experiment uses the continuous solver");
  }
  if (!(config.penalty_weight > 0.0)) {
    throw std::invalid_argument("continuous runs need an explicit M > 0");
  }
  const PenaltyConfig pc{config.penalty_weight};
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<SampleRecord> records(
      static_cast<std::size_t>(config.n_samples));
  parallel_for(config.n_samples, config.threads, [&](int i) {
    const std::uint64_t sample_seed =
        split_seed(config.seed, static_cast<std::uint64_t>(i));
    std::mt19937_64 init_rng(split_seed(sample_seed, 0));
    const double m = config.m_lo + (config.m_hi - config.m_lo) *
                                       canonical_uniform(init_rng);

    ProposalConfig prop;
    prop.step = config.step;
    std::vector<double> start;
    if (naive) {
      start = {-1.0 + 2.0 * canonical_uniform(init_rng),
               kZInitHi * canonical_uniform(init_rng),
               kZInitHi * canonical_uniform(init_rng)};
      prop.domains = {{-1.0, 1.0}, {0.0, inf}, {0.0, inf}};
    } else {
      start = {kZInitHi * canonical_uniform(init_rng),
               kZInitHi * canonical_uniform(init_rng)};
      prop.domains = {{0.0, inf}, {0.0, inf}};
    }

    const auto objective = [&](const std::vector<double>& x) {
      return naive ? l1_naive_objective(m, x[0], x[1], x[2], pc)
                   : l1_reduced_objective(m, x[0], x[1], pc);
    };
    const ContinuousSolveResult solved =
        anneal_continuous(objective, start, prop, config.schedule,
                          split_seed(sample_seed, 1));

    SampleRecord rec;
    rec.m = m;
    rec.f_value = solved.best_energy;
    if (naive) rec.t = solved.best[0];
    rec.z1 = solved.best[naive ? 1 : 0];
    rec.z2 = solved.best[naive ? 2 : 1];
    rec.gap = solved.best_energy - abs_reference(m);
    rec.seed = sample_seed;
    records[static_cast<std::size_t>(i)] = rec;
  });

  std::stable_sort(records.begin(), records.end(),
                   [](const SampleRecord& a, const SampleRecord& b) {
                     return a.m < b.m;
                   });
  return records;
}

}  // namespace

std::string to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::continuous:
      return "continuous";
    case SolverKind::discrete:
      return "discrete";
    case SolverKind::brute:
      return "brute";
  }
  throw std::invalid_argument("unknown solver kind");
}

SolverKind solver_kind_from_string(const std::string& name) {
  if (name == "continuous") return SolverKind::continuous;
  if (name == "discrete") return SolverKind::discrete;
  if (name == "brute") return SolverKind::brute;
  throw std::invalid_argument("unknown solver '" + name + "'");
}

std::vector<SampleRecord> run_fig2(const ExperimentConfig& config) {
  if (config.variant != GadgetVariant::l1_naive) {
    throw std::invalid_argument("fig2 runs the l1_naive variant");
  }
  return run_continuous(config, /*naive=*/true);
}

std::vector<SampleRecord> run_reduced(const ExperimentConfig& config) {
  if (config.variant != GadgetVariant::l1_reduced) {
    throw std::invalid_argument("reduced runs the l1_reduced variant");
  }
  return run_continuous(config, /*naive=*/false);
}

VerifyReport run_discrete_verification(
    const ExperimentConfig& config, const std::filesystem::path& dump_prefix) {
  validate_common(config);
  if (config.solver != SolverKind::brute &&
      config.solver != SolverKind::discrete) {
    throw std::invalid_argument("verification runs with brute or discrete");
  }
  if (config.n_samples < 1) {
    throw std::invalid_argument("verification needs at least one sample");
  }

  const double resolution =
      config.z_hi / (std::ldexp(1.0, config.bits_z) - 1.0);
  const double weight = config.penalty_weight > 0.0
                            ? config.penalty_weight
                            : default_penalty_weight(config.z_hi, config.bits_z);
  const PenaltyConfig pc{weight};

  VerifyReport report;
  report.variant = config.variant;
  report.solver = config.solver;
  report.tolerance = config.tolerance;
  report.samples.resize(static_cast<std::size_t>(config.n_samples));

  parallel_for(config.n_samples, config.threads, [&](int idx) {
    // Sample points snapped onto the z-encoding grid.
    double raw = config.n_samples == 1
                     ? config.m_lo
                     : config.m_lo + (config.m_hi - config.m_lo) * idx /
                                         (config.n_samples - 1);
    const double m = std::round(raw / resolution) * resolution;

    VarAllocator alloc;
    GadgetExpansion gadget = [&] {
      switch (config.variant) {
        case GadgetVariant::l1_naive:
        case GadgetVariant::l1_reduced:
          return build_l1_gadget(AffineExpr(m), config.z_hi, config.bits_z, pc,
                                 config.variant, alloc, config.bits_t);
        case GadgetVariant::relu_wolfe:
          return build_relu_gadget(AffineExpr(m), config.z_hi, config.bits_z,
                                   pc, alloc, config.bits_t);
        case GadgetVariant::qloss:
          return build_qloss_gadget(AffineExpr(m), config.qloss,
                                    config.qloss_t, alloc);
      }
      throw std::invalid_argument("unknown gadget variant");
    }();

    const double reference =
        config.variant == GadgetVariant::relu_wolfe ? relu_reference(m)
        : config.variant == GadgetVariant::qloss
            ? qloss_reference(m, config.qloss)
            : abs_reference(m);

    DiscreteSolveResult solved =
        config.solver == SolverKind::brute
            ? brute_force(gadget.model, config.brute_cap)
            : anneal_discrete(gadget.model, config.schedule,
                              split_seed(config.seed,
                                         static_cast<std::uint64_t>(idx)));

    VerifySample sample;
    sample.m = m;
    sample.energy = solved.best_energy;
    sample.reference = reference;
    sample.deviation = std::fabs(solved.best_energy - reference);
    if (config.variant == GadgetVariant::qloss) {
      const double t = gadget.aux.at("t").decode(solved.best);
      const double s = gadget.aux.at("s").decode(solved.best);
      sample.violation = (s > 0.5) != (t >= 1.0 - 1e-9);
    } else {
      const double z1 = gadget.aux.at("z1").decode(solved.best);
      const double z2 = gadget.aux.at("z2").decode(solved.best);
      sample.violation = std::fabs(-m - z1 + z2) > resolution / 2.0 + 1e-12;
    }
    report.samples[static_cast<std::size_t>(idx)] = sample;

    if (!dump_prefix.empty()) {
      const std::string stem =
          dump_prefix.string() + "-" + std::to_string(idx);
      io::write_model_file(gadget.model, stem + ".model.json",
                           io::ModelFormat::json);
      std::ofstream meta(stem + ".gadget.json", std::ios::binary);
      if (!meta) {
        throw io::ParseError("cannot open " + stem + ".gadget.json");
      }
      io::write_gadget_metadata(gadget, meta);
    }
  });

  for (const auto& sample : report.samples) {
    report.max_abs_dev = std::max(report.max_abs_dev, sample.deviation);
    report.violations += sample.violation ? 1 : 0;
  }
  report.passed = report.max_abs_dev <= report.tolerance;
  return report;
}

std::vector<RegularizedLsTerm> default_lasso_sweep() {
  std::vector<RegularizedLsTerm> pairs;
  for (double a : {-5.0, -2.0, 1.0, 3.0, 5.0}) {
    for (double lambda : {0.0, 2.0, 4.0, 6.0}) {
      pairs.push_back({a, lambda});
    }
  }
  return pairs;
}

LassoReport run_lasso_demo(const std::vector<RegularizedLsTerm>& pairs,
                           const RegularizedLsOptions& options,
                           std::size_t brute_cap) {
  LassoReport report;
  report.options = options;
  report.tolerance =
      2.0 * 2.0 * options.m_hi / (std::ldexp(1.0, options.m_bits) - 1.0);
  for (const auto& pair : pairs) {
    RegularizedLsProblem problem = build_regularized_ls({pair}, options);
    const DiscreteSolveResult solved = brute_force(problem.model, brute_cap);
    LassoRow row;
    row.a = pair.a;
    row.lambda = pair.lambda;
    row.m_star = problem.m_encodings[0].decode(solved.best);
    row.soft = soft_threshold(pair.a, pair.lambda / 2.0);
    row.abs_err = std::fabs(row.m_star - row.soft);
    report.max_abs_err = std::max(report.max_abs_err, row.abs_err);
    report.rows.push_back(row);
  }
  report.passed = report.max_abs_err <= report.tolerance;
  return report;
}

void write_records_csv(std::ostream& out,
                       const std::vector<SampleRecord>& records, bool with_t) {
  out << (with_t ? "m,f,t,z1,z2,gap,seed" : "m,f,z1,z2,gap,seed") << '\n';
  for (const auto& rec : records) {
    out << fmt12(rec.m) << ',' << fmt12(rec.f_value) << ',';
    if (with_t) out << fmt12(rec.t.value()) << ',';
    out << fmt12(rec.z1) << ',' << fmt12(rec.z2) << ',' << fmt12(rec.gap)
        << ',' << rec.seed << '\n';
  }
}

void write_verify_csv(std::ostream& out, const VerifyReport& report) {
  out << "m,energy,reference,deviation,violation\n";
  for (const auto& s : report.samples) {
    out << fmt12(s.m) << ',' << fmt12(s.energy) << ',' << fmt12(s.reference)
        << ',' << fmt12(s.deviation) << ',' << (s.violation ? 1 : 0) << '\n';
  }
}

void write_lasso_csv(std::ostream& out, const LassoReport& report) {
  out << "a,lambda,m_star,soft_threshold,abs_err\n";
  for (const auto& row : report.rows) {
    out << fmt12(row.a) << ',' << fmt12(row.lambda) << ',' << fmt12(row.m_star)
        << ',' << fmt12(row.soft) << ',' << fmt12(row.abs_err) << '\n';
  }
}

namespace {

json config_json(const ExperimentConfig& config) {
  json j;
  j["variant"] = to_string(config.variant);
  j["solver"] = to_string(config.solver);
  j["m_lo"] = config.m_lo;
  j["m_hi"] = config.m_hi;
  j["M"] = config.penalty_weight;
  j["bits_z"] = config.bits_z;
  j["z_hi"] = config.z_hi;
  j["bits_t"] = config.bits_t;
  j["t1"] = config.schedule.t_initial;
  j["ratio"] = config.schedule.ratio;
  j["t_stop"] = config.schedule.t_stop;
  j["moves_per_temp"] = config.schedule.moves_per_temp;
  j["step"] = config.step;
  if (config.variant == GadgetVariant::qloss) {
    j["qloss_q"] = config.qloss.q;
    j["qloss_t_lo"] = config.qloss_t.lo;
    j["qloss_t_hi"] = config.qloss_t.hi;
    j["qloss_t_bits"] = config.qloss_t.bits;
  }
  return j;
}

}  // namespace

std::string fig2_summary_json(const ExperimentConfig& config,
                              const std::vector<SampleRecord>& records) {
  double max_abs_dev = 0.0;
  double sum_abs_dev = 0.0;
  int within = 0, z1_within = 0, z2_within = 0;
  for (const auto& rec : records) {
    const double dev = std::fabs(rec.gap);
    max_abs_dev = std::max(max_abs_dev, dev);
    sum_abs_dev += dev;
    if (dev <= 0.1) ++within;
    if (std::fabs(rec.z1 - std::max(-rec.m, 0.0)) <= 0.1) ++z1_within;
    if (std::fabs(rec.z2 - std::max(rec.m, 0.0)) <= 0.1) ++z2_within;
  }
  const double n = records.empty() ? 1.0 : static_cast<double>(records.size());
  json j;
  j["variant"] = to_string(config.variant);
  j["n_samples"] = records.size();
  j["max_abs_dev"] = max_abs_dev;
  j["mean_abs_dev"] = sum_abs_dev / n;
  j["frac_within_0_1"] = within / n;
  j["frac_z1_within_0_1"] = z1_within / n;
  j["frac_z2_within_0_1"] = z2_within / n;
  j["seed"] = config.seed;
  j["config"] = config_json(config);
  return j.dump(2);
}

std::string verify_summary_json(const ExperimentConfig& config,
                                const VerifyReport& report) {
  int within = 0;
  for (const auto& s : report.samples) {
    if (s.deviation <= 0.1) ++within;
  }
  const double n =
      report.samples.empty() ? 1.0 : static_cast<double>(report.samples.size());
  json j;
  j["variant"] = to_string(report.variant);
  j["n_samples"] = report.samples.size();
  j["max_abs_dev"] = report.max_abs_dev;
  j["frac_within_0_1"] = within / n;
  j["violations"] = report.violations;
  j["tolerance"] = report.tolerance;
  j["passed"] = report.passed;
  j["seed"] = config.seed;
  j["config"] = config_json(config);
  return j.dump(2);
}

std::string lasso_summary_json(const LassoReport& report) {
  json j;
  j["n_pairs"] = report.rows.size();
  j["max_abs_err"] = report.max_abs_err;
  j["tolerance"] = report.tolerance;
  j["passed"] = report.passed;
  json opts;
  opts["m_hi"] = report.options.m_hi;
  opts["m_bits"] = report.options.m_bits;
  opts["z_hi"] = report.options.z_hi;
  opts["z_bits"] = report.options.z_bits;
  opts["M"] = report.options.penalty_weight;
  opts["variant"] = to_string(report.options.variant);
  j["config"] = opts;
  return j.dump(2);
}

}  // namespace quboreg
