#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dopt/algorithms.hpp"
#include "dopt/config.hpp"
#include "dopt/dataset.hpp"

namespace dopt {

Variant parse_variant(const std::string& name);

// building blocks resolved from a validated config; every piece depends on
// the seed only, so runs sharing a seed share the graph, data, and x0
Topology build_topology(const ExperimentConfig& config);
Objective build_objective(const ExperimentConfig& config, int num_agents);
Compressor build_compressor(const ExperimentConfig& config);
Eigen::MatrixXd initial_iterates(int d, int n, std::uint64_t seed, double scale);

// warning when a compressor's declared error model does not match what the
// variant's analysis expects (the run still proceeds, useful for ablations)
std::optional<std::string> combination_warning(Variant variant, const Compressor& compressor);

struct RunOutput {
  std::string trace_path;
  RunResult result;
  std::vector<std::string> warnings;
};

// builds everything, runs config.iterations rounds, and writes the trace
// CSV (config echo header + records) atomically under config.output_dir.
// On a numerical failure the partial trace is persisted with a trailing
// "# aborted" note before the error propagates.
RunOutput run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

struct SuiteEntry {
  std::string combo;
  std::optional<long long> bits_to_threshold;
  bool reached = false;
  std::string error;  // empty on success
};

// DPDA plus the nine compressed algorithm/compressor presets, all sharing
// the base config's seed (hence graph, dataset, and x0). Each run stops
// once p_of_t reaches the threshold; the summary CSV row format is
// "combo,bits_to_threshold,reached".
std::vector<SuiteEntry> run_suite(const ExperimentConfig& base, double threshold,
                                  std::ostream* log = nullptr);

void write_suite_summary(const std::vector<SuiteEntry>& entries, const std::string& path);

// the ten benchmark presets: name plus the config patch that selects them
struct ComboPreset {
  std::string name;
  std::string variant;
  std::string compressor;
  HyperParams hyper;
};
const std::vector<ComboPreset>& benchmark_combinations();

}  // namespace dopt
