#include "dopt/experiment.hpp"

#include <filesystem>
#include <fstream>

#include "dopt/errors.hpp"
#include "dopt/metrics.hpp"

namespace dopt {

namespace fs = std::filesystem;

Variant parse_variant(const std::string& name) {
  if (name == "dpda") return Variant::DPDA;
  if (name == "alg1") return Variant::Alg1;
  if (name == "alg2") return Variant::Alg2;
  if (name == "alg3") return Variant::Alg3;
  throw ConfigError("unknown algorithm variant '" + name + "'");
}

Topology build_topology(const ExperimentConfig& config) {
  Topology topo;
  if (config.graph_kind == "geometric") {
    SplitMix64 rng = make_stream(config.seed, StreamPurpose::kGraph);
    topo = random_geometric_graph(config.n, config.radius, rng, config.graph_max_retries);
  } else if (config.graph_kind == "edge_list") {
    topo = load_edge_list(config.edge_list_path);
    if (topo.n != config.n)
      throw ConfigError("graph.edge_list has " + std::to_string(topo.n) +
                        " nodes but problem.n = " + std::to_string(config.n));
  } else if (config.graph_kind == "path") {
    topo = path_graph(config.n);
  } else if (config.graph_kind == "complete") {
    topo = complete_graph(config.n);
  } else {
    throw ConfigError("unknown graph.kind '" + config.graph_kind + "'");
  }
  if (config.spectral_scale > 0.0)
    topo = topo.scaled_to_spectral_radius(config.spectral_scale);
  return topo;
}

Objective build_objective(const ExperimentConfig& config, int num_agents) {
  if (config.objective == "logistic") {
    Dataset ds = generate_dataset(num_agents, config.d, config.m_i, config.seed);
    return Objective::logistic_nonconvex(std::move(ds.features), std::move(ds.labels),
                                         config.lambda, config.mu);
  }
  if (config.objective == "pl_scalar") return Objective::pl_scalar(num_agents, config.d);
  throw ConfigError("unknown problem.objective '" + config.objective + "'");
}

Compressor build_compressor(const ExperimentConfig& config) {
  const int d = config.d;
  if (config.compressor == "identity") return Compressor::identity(d, config.b1);
  if (config.compressor == "unbiased_lbit")
    return Compressor::unbiased_lbit(d, config.levels, config.b1);
  if (config.compressor == "top_k") return Compressor::top_k(d, config.top_k, config.b1);
  if (config.compressor == "norm_sign") return Compressor::norm_sign(d, config.b1);
  if (config.compressor == "uniform_quantizer")
    return Compressor::uniform_quantizer(d, config.delta, config.b2);
  if (config.compressor == "one_bit_binary") return Compressor::one_bit_binary(d);
  throw ConfigError("unknown compressor.kind '" + config.compressor + "'");
}

Eigen::MatrixXd initial_iterates(int d, int n, std::uint64_t seed, double scale) {
  Eigen::MatrixXd x0(d, n);
  for (int i = 0; i < n; ++i) {
    SplitMix64 rng = make_stream(seed, StreamPurpose::kInitialIterate, i);
    for (int s = 0; s < d; ++s) x0(s, i) = scale * rng.normal();
  }
  return x0;
}

std::optional<std::string> combination_warning(Variant variant, const Compressor& compressor) {
  if (compressor.kind() == CompressorKind::Identity) return std::nullopt;
  bool relative = false, absolute = false;
  for (const auto& a : compressor.declared_classes()) {
    if (a.kind == AssumptionClass::Kind::RelativeError) relative = true;
    else absolute = true;
  }
  if ((variant == Variant::Alg1 || variant == Variant::Alg2) && !relative)
    return compressor.name() + " declares no relative-error bound; " +
           variant_name(variant) + "'s analysis assumes one";
  if (variant == Variant::Alg3 && !absolute)
    return compressor.name() + " declares no absolute-error bound; alg3's analysis assumes one";
  return std::nullopt;
}

namespace {

std::string trace_filename(const ExperimentConfig& config) {
  std::string name = config.variant;
  if (config.variant != "dpda") {
    Compressor c = build_compressor(config);
    name += "_" + c.short_name();
  }
  return name + ".csv";
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& config, std::ostream* log) {
  config.validate();

  const Variant variant = parse_variant(config.variant);
  // dpda broadcasts exact vectors; its bit accounting uses b1 per scalar
  const Compressor compressor = variant == Variant::DPDA
                                    ? Compressor::identity(config.d, config.b1)
                                    : build_compressor(config);

  RunOutput output;
  if (variant == Variant::DPDA && config.compressor != "identity") {
    output.warnings.push_back("dpda ignores compressor.kind = " + config.compressor +
                              " and communicates exact vectors");
  }
  if (auto warning = combination_warning(variant, compressor))
    output.warnings.push_back(*warning);

  const Topology topology = build_topology(config);
  const Objective objective = build_objective(config, topology.n);
  const Eigen::MatrixXd x0 =
      initial_iterates(config.d, topology.n, config.seed, config.x0_scale);

  fs::create_directories(config.output_dir);
  const fs::path path = fs::path(config.output_dir) / trace_filename(config);
  const fs::path tmp = path.string() + ".tmp";

  std::ofstream out(tmp);
  if (!out) throw std::runtime_error("run_experiment: cannot open " + tmp.string());
  out << "# trace of one experiment; resolved configuration follows\n";
  echo_config(out, config, "# ");
  for (const auto& warning : output.warnings) out << "# warning: " << warning << "\n";
  out << kRunRecordCsvHeader << "\n";

  if (log) {
    *log << "run " << config.variant;
    if (variant != Variant::DPDA) *log << " + " << compressor.name();
    *log << ": n=" << topology.n << " d=" << config.d << " T=" << config.iterations
         << " seed=" << config.seed << "\n";
    for (const auto& warning : output.warnings) *log << "  warning: " << warning << "\n";
  }

  const RecordSink sink = [&out](const RunRecord& rec) { write_record_csv(out, rec); };
  try {
    output.result = run(variant, topology, objective, config.hyper, compressor, x0,
                        config.iterations, config.seed, sink, config.stop_threshold);
  } catch (const std::exception& err) {
    out << "# aborted: " << err.what() << "\n";
    out.close();
    fs::rename(tmp, path);  // keep the partial history
    throw;
  }
  out.close();
  if (!out) throw std::runtime_error("run_experiment: write failed for " + tmp.string());
  fs::rename(tmp, path);
  output.trace_path = path.string();

  if (log) {
    const auto& last = output.result.records.back();
    *log << "  finished at k=" << last.k << " p_of_t=" << last.p_of_t
         << " bits=" << last.bits_cumulative << " -> " << output.trace_path << "\n";
  }
  return output;
}

const std::vector<ComboPreset>& benchmark_combinations() {
  auto hp = [](double eta, std::optional<double> psi = {}, std::optional<double> sigma = {},
               std::optional<double> s0 = {}, std::optional<double> gamma = {}) {
    HyperParams h;
    h.alpha = 85.0;
    h.beta = 5.0;
    h.eta = eta;
    h.psi = psi;
    h.sigma = sigma;
    h.s0 = s0;
    h.gamma = gamma;
    return h;
  };
  static const std::vector<ComboPreset> presets = {
      {"dpda", "dpda", "identity", hp(1.4)},
      {"alg1_c1", "alg1", "unbiased_lbit", hp(1.4, 0.2)},
      {"alg1_c2", "alg1", "top_k", hp(1.4, 0.05)},
      {"alg1_c3", "alg1", "norm_sign", hp(1.3, 0.05)},
      {"alg2_c2", "alg2", "top_k", hp(1.4, 0.05, 0.03)},
      {"alg2_c3", "alg2", "norm_sign", hp(1.3, 0.05, 0.03)},
      {"alg3_c2", "alg3", "top_k", hp(0.46, {}, {}, 1.0, 0.99)},
      {"alg3_c3", "alg3", "norm_sign", hp(0.64, {}, {}, 1.0, 0.99)},
      {"alg3_c4", "alg3", "uniform_quantizer", hp(0.46, {}, {}, 0.01, 0.99)},
      {"alg3_c5", "alg3", "one_bit_binary", hp(0.46, {}, {}, 1.0, 0.99)},
  };
  return presets;
}

std::vector<SuiteEntry> run_suite(const ExperimentConfig& base, double threshold,
                                  std::ostream* log) {
  if (!(threshold >= 0.0)) throw ConfigError("suite threshold must be >= 0");
  base.validate();

  std::vector<SuiteEntry> entries;
  for (const auto& preset : benchmark_combinations()) {
    ExperimentConfig config = base;  // same seed: same graph, dataset, x0
    config.variant = preset.variant;
    config.compressor = preset.compressor;
    config.hyper = preset.hyper;
    config.stop_threshold = threshold;

    SuiteEntry entry;
    entry.combo = preset.name;
    try {
      RunOutput output = run_experiment(config, log);
      const auto bits = bits_to_threshold(output.result.records, threshold);
      entry.bits_to_threshold = bits;
      entry.reached = bits.has_value();
    } catch (const std::exception& err) {
      entry.error = err.what();
      if (log) *log << "  " << preset.name << " failed: " << err.what() << "\n";
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

void write_suite_summary(const std::vector<SuiteEntry>& entries, const std::string& path) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = path + ".tmp";
  std::ofstream out(tmp);
  if (!out) throw std::runtime_error("write_suite_summary: cannot open " + tmp.string());
  out << "combo,bits_to_threshold,reached\n";
  for (const auto& entry : entries) {
    out << entry.combo << ",";
    if (entry.bits_to_threshold) out << *entry.bits_to_threshold;
    else out << "not_reached";
    out << "," << (entry.reached ? 1 : 0) << "\n";
  }
  out.close();
  if (!out) throw std::runtime_error("write_suite_summary: write failed");
  fs::rename(tmp, path);
}

}  // namespace dopt
