// command-line front end: single runs, the ten-combination suite,
// compressor verification, and dataset export

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "dopt/compressors.hpp"
#include "dopt/dataset.hpp"
#include "dopt/errors.hpp"
#include "dopt/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

dopt::ExperimentConfig load_with_overrides(const std::string& config_path,
                                           const std::optional<std::uint64_t>& seed,
                                           const std::optional<std::string>& out_dir) {
  dopt::ExperimentConfig config =
      config_path.empty() ? dopt::ExperimentConfig{} : dopt::load_config(config_path);
  if (seed) config.seed = *seed;
  if (out_dir) config.output_dir = *out_dir;
  config.validate();
  return config;
}

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& out_dir) {
  const auto config = load_with_overrides(config_path, seed, out_dir);
  dopt::run_experiment(config, &std::cout);
  return kExitOk;
}

int cmd_suite(const std::string& config_path, double threshold,
              const std::optional<std::uint64_t>& seed,
              const std::optional<std::string>& out_dir) {
  const auto config = load_with_overrides(config_path, seed, out_dir);
  const auto entries = dopt::run_suite(config, threshold, &std::cout);
  const auto summary = std::filesystem::path(config.output_dir) / "summary.csv";
  dopt::write_suite_summary(entries, summary.string());

  bool all_ok = true;
  std::cout << "\ncombo,bits_to_threshold,reached\n";
  for (const auto& entry : entries) {
    std::cout << entry.combo << ",";
    if (entry.bits_to_threshold) std::cout << *entry.bits_to_threshold;
    else std::cout << "not_reached";
    std::cout << "," << (entry.reached ? 1 : 0);
    if (!entry.error.empty()) {
      std::cout << "  (error: " << entry.error << ")";
      all_ok = false;
    }
    std::cout << "\n";
  }
  std::cout << "summary written to " << summary.string() << "\n";
  return all_ok ? kExitOk : kExitNumerical;
}

int cmd_verify(long trials, std::uint64_t seed, int dimension) {
  using dopt::AssumptionClass;
  using dopt::Compressor;

  struct Case {
    Compressor compressor;
    AssumptionClass assumption;
  };
  // the benchmark operators with their declared error models
  const std::vector<Case> cases = {
      {Compressor::unbiased_lbit(dimension, 2),
       Compressor::unbiased_lbit(dimension, 2).declared_classes()[0]},
      {Compressor::top_k(dimension, std::min(10, dimension)),
       AssumptionClass::relative_error(std::min(10, dimension) / double(dimension), 1.0)},
      {Compressor::norm_sign(dimension),
       AssumptionClass::relative_error(1.0 / (double(dimension) * dimension), dimension / 2.0)},
      {Compressor::norm_sign(dimension), AssumptionClass::local_absolute(dopt::kPInf, 0.5)},
      {Compressor::uniform_quantizer(dimension, 1.0),
       AssumptionClass::global_absolute(dopt::kPInf, 0.25)},
      {Compressor::one_bit_binary(dimension), AssumptionClass::local_absolute(dopt::kPInf, 0.5)},
      {Compressor::identity(dimension), AssumptionClass::relative_error(1.0, 1.0)},
  };

  bool all_pass = true;
  std::printf("%-32s %-34s %12s  %s\n", "compressor", "assumption", "max_ratio", "status");
  for (const auto& c : cases) {
    dopt::SplitMix64 rng = dopt::make_stream(seed, dopt::StreamPurpose::kVerification);
    const auto report = dopt::verify_assumption(c.compressor, c.assumption, trials, rng);
    all_pass = all_pass && report.pass;
    std::printf("%-32s %-34s %12.6g  %s\n", c.compressor.name().c_str(),
                c.assumption.describe().c_str(), report.max_ratio,
                report.pass ? "pass" : "FAIL");
  }

  // unbiasedness of the stochastic quantizer
  {
    dopt::SplitMix64 rng = dopt::make_stream(seed, dopt::StreamPurpose::kVerification, 1);
    Eigen::VectorXd x(dimension);
    for (int s = 0; s < dimension; ++s) x[s] = rng.normal();
    const auto report = dopt::verify_unbiased(Compressor::unbiased_lbit(dimension, 2), x,
                                              std::max<long>(trials, 10000), rng);
    all_pass = all_pass && report.pass;
    std::printf("%-32s %-34s %12.6g  %s\n", "unbiased_lbit(l=2,b1=64)", "unbiased mean (sigma)",
                report.aggregate_sigma, report.pass ? "pass" : "FAIL");
  }

  return all_pass ? kExitOk : kExitNumerical;
}

int cmd_gen_data(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                 const std::optional<std::string>& out_dir) {
  const auto config = load_with_overrides(config_path, seed, out_dir);
  const auto dataset = dopt::generate_dataset(config.n, config.d, config.m_i, config.seed);
  dopt::save_dataset(dataset, config.output_dir);
  std::cout << "wrote " << config.n << " agent files (" << config.m_i << " x " << config.d
            << " + label) to " << config.output_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed optimization with compressed communication"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  double threshold = 1e-20;
  long trials = 10000;
  int dimension = 50;

  auto* run_cmd = app.add_subcommand("run", "run one algorithm/compressor experiment");
  run_cmd->add_option("--config", config_path, "configuration file");
  run_cmd->add_option("--seed", seed, "override run.seed");
  run_cmd->add_option("--out", out_dir, "override run.output");

  auto* suite_cmd =
      app.add_subcommand("suite", "run the ten-combination benchmark suite");
  suite_cmd->add_option("--config", config_path, "configuration file");
  suite_cmd->add_option("--threshold", threshold, "p_of_t target for the bit accounting");
  suite_cmd->add_option("--seed", seed, "override run.seed");
  suite_cmd->add_option("--out", out_dir, "override run.output");

  auto* verify_cmd =
      app.add_subcommand("verify-compressors", "Monte-Carlo check of the declared error bounds");
  verify_cmd->add_option("--trials", trials, "trials per (compressor, assumption) pair");
  verify_cmd->add_option("--seed", seed, "rng seed");
  verify_cmd->add_option("--dimension", dimension, "vector dimension");

  auto* gen_cmd = app.add_subcommand("gen-data", "write the synthetic per-agent dataset files");
  gen_cmd->add_option("--config", config_path, "configuration file");
  gen_cmd->add_option("--seed", seed, "override run.seed");
  gen_cmd->add_option("--out", out_dir, "override run.output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, seed, out_dir);
    if (suite_cmd->parsed()) return cmd_suite(config_path, threshold, seed, out_dir);
    if (verify_cmd->parsed()) return cmd_verify(trials, seed.value_or(1), dimension);
    if (gen_cmd->parsed()) return cmd_gen_data(config_path, seed, out_dir);
  } catch (const dopt::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const dopt::NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
