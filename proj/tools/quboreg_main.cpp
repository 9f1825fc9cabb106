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

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "quboreg/experiments.hpp"
#include "quboreg/model_io.hpp"

namespace {

using namespace quboreg;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitThreshold = 3;

void add_schedule_flags(CLI::App* cmd, ExperimentConfig* config) {
  cmd->add_option("--t1", config->schedule.t_initial, "Initial temperature");
  cmd->add_option("--ratio", config->schedule.ratio,
                  "Geometric cooling factor per temperature step");
  cmd->add_option("--t-stop", config->schedule.t_stop,
                  "Stop once the temperature drops below this");
  cmd->add_option("--moves-per-temp", config->schedule.moves_per_temp,
                  "Proposals per temperature step");
  cmd->add_option("--step", config->step, "Move magnitude per variable");
}

void add_sampling_flags(CLI::App* cmd, ExperimentConfig* config) {
  cmd->add_option("--samples", config->n_samples, "Number of samples");
  cmd->add_option("--m-lo", config->m_lo, "Lower end of the m range");
  cmd->add_option("--m-hi", config->m_hi, "Upper end of the m range");
  cmd->add_option("--penalty-M", config->penalty_weight,
                  "Equality penalty weight M (0 selects the dominance rule "
                  "default on discrete runs)");
  cmd->add_option("--seed", config->seed, "Master RNG seed");
  cmd->add_option("--threads", config->threads,
                  "Worker threads (0 = hardware)");
}

void write_csv_file(const std::string& path,
                    const std::function<void(std::ostream&)>& emit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::ParseError("cannot open " + path + " for writing");
  emit(out);
  if (!out) throw io::ParseError("write to " + path + " failed");
}

int run_records_command(const ExperimentConfig& config, const std::string& out,
                        bool with_t) {
  const std::vector<SampleRecord> records =
      with_t ? run_fig2(config) : run_reduced(config);
  if (out.empty()) {
    write_records_csv(std::cout, records, with_t);
  } else {
    write_csv_file(out, [&](std::ostream& os) {
      write_records_csv(os, records, with_t);
    });
    std::cout << fig2_summary_json(config, records) << '\n';
  }
  return kExitOk;
}

int run_verify_command(const ExperimentConfig& config, const std::string& out,
                       const std::string& dump_prefix) {
  const VerifyReport report = run_discrete_verification(config, dump_prefix);
  if (!out.empty()) {
    write_csv_file(out,
                   [&](std::ostream& os) { write_verify_csv(os, report); });
  }
  std::cout << verify_summary_json(config, report) << '\n';
  return report.passed ? kExitOk : kExitThreshold;
}

int run_lasso_command(const std::vector<double>& as,
                      const std::vector<double>& lambdas,
                      const RegularizedLsOptions& options,
                      std::size_t brute_cap, const std::string& out) {
  std::vector<RegularizedLsTerm> pairs;
  if (as.empty() && lambdas.empty()) {
    pairs = default_lasso_sweep();
  } else if (as.size() == lambdas.size()) {
    for (std::size_t i = 0; i < as.size(); ++i) {
      pairs.push_back({as[i], lambdas[i]});
    }
  } else {
    throw std::invalid_argument("--a and --lambda must be given pairwise");
  }
  const LassoReport report = run_lasso_demo(pairs, options, brute_cap);
  if (!out.empty()) {
    write_csv_file(out,
                   [&](std::ostream& os) { write_lasso_csv(os, report); });
  }
  std::cout << lasso_summary_json(report) << '\n';
  return kExitOk;
}

io::ModelFormat parse_format(const std::string& name,
                             const std::filesystem::path& path) {
  if (name == "json") return io::ModelFormat::json;
  if (name == "coord") return io::ModelFormat::coord;
  return io::format_from_path(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "QUBO gadgets for non-smooth regularizers: build penalty-form models "
      "for |m|, ReLU-type and q-loss functions, validate them by annealing "
      "and brute force, and convert model files."};
  app.require_subcommand(1);

  ExperimentConfig fig2_config;
  std::string fig2_out;
  CLI::App* fig2 = app.add_subcommand(
      "fig2", "Anneal the three-variable |m| objective for random m");
  add_sampling_flags(fig2, &fig2_config);
  add_schedule_flags(fig2, &fig2_config);
  std::string fig2_solver = "continuous";
  fig2->add_option("--solver", fig2_solver, "Solver (continuous)");
  fig2->add_option("--out", fig2_out, "CSV output path");

  ExperimentConfig reduced_config;
  reduced_config.variant = GadgetVariant::l1_reduced;
  std::string reduced_out;
  CLI::App* reduced = app.add_subcommand(
      "reduced", "Anneal the two-variable reduced |m| objective");
  add_sampling_flags(reduced, &reduced_config);
  add_schedule_flags(reduced, &reduced_config);
  std::string reduced_solver = "continuous";
  reduced->add_option("--solver", reduced_solver, "Solver (continuous)");
  reduced->add_option("--out", reduced_out, "CSV output path");

  ExperimentConfig verify_config;
  verify_config.variant = GadgetVariant::l1_reduced;
  verify_config.solver = SolverKind::brute;
  verify_config.n_samples = 21;
  std::string verify_out;
  std::string verify_variant = "l1_reduced";
  std::string verify_solver = "brute";
  std::string verify_dump;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "Build gadget QUBOs on grid m values and check their minima against "
      "the reference function");
  add_sampling_flags(verify, &verify_config);
  add_schedule_flags(verify, &verify_config);
  verify->add_option("--variant", verify_variant,
                     "Gadget: l1_naive, l1_reduced, relu or qloss");
  verify->add_option("--solver", verify_solver, "brute or discrete");
  verify->add_option("--bits-z", verify_config.bits_z, "Bits per z variable");
  verify->add_option("--z-hi", verify_config.z_hi, "Upper bound of the z range");
  verify->add_option("--bits-t", verify_config.bits_t, "Bits for the t variable");
  verify->add_option("--tol", verify_config.tolerance,
                     "Maximum acceptable |energy - reference|");
  verify->add_option("--brute-cap", verify_config.brute_cap,
                     "Refuse brute force beyond this many variables");
  verify->add_option("--qloss-q", verify_config.qloss.q, "q-loss parameter");
  verify->add_option("--qloss-t-lo", verify_config.qloss_t.lo,
                     "q-loss t encoding lower bound");
  verify->add_option("--qloss-t-hi", verify_config.qloss_t.hi,
                     "q-loss t encoding upper bound");
  verify->add_option("--qloss-t-bits", verify_config.qloss_t.bits,
                     "q-loss t encoding bits");
  verify->add_option("--out", verify_out, "Per-sample CSV output path");
  verify->add_option("--dump-prefix", verify_dump,
                     "Write <prefix>-<k>.model.json and <prefix>-<k>.gadget.json");

  RegularizedLsOptions lasso_options;
  std::vector<double> lasso_a, lasso_lambda;
  std::string lasso_out, lasso_variant = "l1_reduced";
  std::size_t lasso_cap = 24;
  CLI::App* lasso = app.add_subcommand(
      "lasso",
      "Solve (m - a)^2 + lambda |m| through the composed QUBO and compare "
      "with the soft-threshold closed form");
  lasso->add_option("--a", lasso_a, "Target value(s); pairs with --lambda");
  lasso->add_option("--lambda", lasso_lambda, "Regularization weight(s)");
  lasso->add_option("--m-hi", lasso_options.m_hi, "m encoded on [-m_hi, m_hi]");
  lasso->add_option("--bits-m", lasso_options.m_bits, "Bits for each m");
  lasso->add_option("--z-hi", lasso_options.z_hi, "Upper bound of the z range");
  lasso->add_option("--bits-z", lasso_options.z_bits, "Bits per z variable");
  lasso->add_option("--penalty-M", lasso_options.penalty_weight,
                    "Penalty weight (0 selects the dominance rule default)");
  lasso->add_option("--variant", lasso_variant, "l1_naive or l1_reduced");
  lasso->add_option("--brute-cap", lasso_cap,
                    "Refuse brute force beyond this many variables");
  lasso->add_option("--out", lasso_out, "Per-pair CSV output path");

  std::string conv_in, conv_out, conv_in_format = "auto",
                                 conv_out_format = "auto";
  CLI::App* convert = app.add_subcommand(
      "convert", "Convert a model file between JSON and coordinate formats");
  convert->add_option("--in", conv_in, "Input model file")->required();
  convert->add_option("--out", conv_out, "Output model file")->required();
  convert->add_option("--in-format", conv_in_format, "auto, json or coord");
  convert->add_option("--out-format", conv_out_format, "auto, json or coord");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (fig2->parsed()) {
      if (solver_kind_from_string(fig2_solver) != SolverKind::continuous) {
        throw std::invalid_argument("fig2 supports --solver continuous only");
      }
      return run_records_command(fig2_config, fig2_out, /*with_t=*/true);
    }
    if (reduced->parsed()) {
      if (solver_kind_from_string(reduced_solver) != SolverKind::continuous) {
        throw std::invalid_argument(
            "reduced supports --solver continuous only");
      }
      return run_records_command(reduced_config, reduced_out,
                                 /*with_t=*/false);
    }
    if (verify->parsed()) {
      verify_config.variant = gadget_variant_from_string(verify_variant);
      verify_config.solver = solver_kind_from_string(verify_solver);
      return run_verify_command(verify_config, verify_out, verify_dump);
    }
    if (lasso->parsed()) {
      lasso_options.variant = gadget_variant_from_string(lasso_variant);
      return run_lasso_command(lasso_a, lasso_lambda, lasso_options, lasso_cap,
                               lasso_out);
    }
    if (convert->parsed()) {
      const QuboModel model =
          io::read_model_file(conv_in, parse_format(conv_in_format, conv_in));
      std::ofstream out(conv_out, std::ios::binary);
      if (!out) throw io::ParseError("cannot open " + conv_out);
      if (parse_format(conv_out_format, conv_out) == io::ModelFormat::json) {
        io::write_qubo_json(model, out);
      } else {
        io::write_qubo_coord(model, out);
      }
      if (!out) throw io::ParseError("write to " + conv_out + " failed");
      return kExitOk;
    }
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
