#include "dopt/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dopt/errors.hpp"

namespace dopt {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": cannot parse '" + value + "' as a number");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": cannot parse '" + value + "' as an integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": cannot parse '" + value + "' as an integer");
  }
}

}  // namespace

void apply_config_entry(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "problem.n") c.n = static_cast<int>(parse_long(key, value));
  else if (key == "problem.d") c.d = static_cast<int>(parse_long(key, value));
  else if (key == "problem.m_i") c.m_i = static_cast<int>(parse_long(key, value));
  else if (key == "problem.lambda") c.lambda = parse_double(key, value);
  else if (key == "problem.mu") c.mu = parse_double(key, value);
  else if (key == "problem.objective") c.objective = value;
  else if (key == "graph.kind") c.graph_kind = value;
  else if (key == "graph.radius") c.radius = parse_double(key, value);
  else if (key == "graph.edge_list") c.edge_list_path = value;
  else if (key == "graph.max_retries") c.graph_max_retries = static_cast<int>(parse_long(key, value));
  else if (key == "graph.spectral_scale") c.spectral_scale = parse_double(key, value);
  else if (key == "algorithm.variant") c.variant = value;
  else if (key == "compressor.kind") c.compressor = value;
  else if (key == "compressor.levels") c.levels = static_cast<int>(parse_long(key, value));
  else if (key == "compressor.k") c.top_k = static_cast<int>(parse_long(key, value));
  else if (key == "compressor.delta") c.delta = parse_double(key, value);
  else if (key == "compressor.b1") c.b1 = static_cast<int>(parse_long(key, value));
  else if (key == "compressor.b2") c.b2 = static_cast<int>(parse_long(key, value));
  else if (key == "hyper.alpha") c.hyper.alpha = parse_double(key, value);
  else if (key == "hyper.beta") c.hyper.beta = parse_double(key, value);
  else if (key == "hyper.eta") c.hyper.eta = parse_double(key, value);
  else if (key == "hyper.psi") c.hyper.psi = parse_double(key, value);
  else if (key == "hyper.sigma") c.hyper.sigma = parse_double(key, value);
  else if (key == "hyper.s0") c.hyper.s0 = parse_double(key, value);
  else if (key == "hyper.gamma") c.hyper.gamma = parse_double(key, value);
  else if (key == "run.iterations") c.iterations = parse_long(key, value);
  else if (key == "run.seed") c.seed = parse_u64(key, value);
  else if (key == "run.output") c.output_dir = value;
  else if (key == "run.x0_scale") c.x0_scale = parse_double(key, value);
  else if (key == "run.stop_threshold") c.stop_threshold = parse_double(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config_text(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trim(line);
    // "# key = value" is the trace-header echo form; plain comments and
    // annotation lines under '#' are skipped
    bool commented = false;
    if (!body.empty() && body[0] == '#') {
      commented = true;
      body = trim(body.substr(1));
    }
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string key = eq == std::string::npos ? "" : trim(body.substr(0, eq));
    const bool looks_like_entry = !key.empty() && key.find('.') != std::string::npos &&
                                  key.find(' ') == std::string::npos;
    if (!looks_like_entry) {
      if (commented) continue;
      throw ConfigError("config: line " + std::to_string(line_no) + " is not 'key = value'");
    }
    const std::string value = trim(body.substr(eq + 1));
    if (value.empty())
      throw ConfigError("config: line " + std::to_string(line_no) + " has an empty value");
    apply_config_entry(c, key, value);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse_config_text(in);
}

ExperimentConfig load_config_from_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream header;
  std::string line;
  while (std::getline(in, line) && !line.empty() && line[0] == '#') header << line << "\n";
  std::istringstream block(header.str());
  return parse_config_text(block);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };

  if (n < 1) fail("problem.n must be >= 1");
  if (d < 1) fail("problem.d must be >= 1");
  if (m_i < 1) fail("problem.m_i must be >= 1");
  if (lambda < 0.0) fail("problem.lambda must be >= 0");
  if (mu < 0.0) fail("problem.mu must be >= 0");
  if (objective != "logistic" && objective != "pl_scalar")
    fail("problem.objective must be logistic or pl_scalar");

  if (graph_kind == "geometric") {
    if (!(radius > 0.0) || radius > std::sqrt(2.0) + 1e-12)
      fail("graph.radius must be in (0, sqrt(2)]");
  } else if (graph_kind == "edge_list") {
    if (edge_list_path.empty()) fail("graph.edge_list path is required for edge_list graphs");
  } else if (graph_kind != "path" && graph_kind != "complete") {
    fail("graph.kind must be geometric, edge_list, path, or complete");
  }
  if (graph_max_retries < 1) fail("graph.max_retries must be >= 1");
  if (spectral_scale < 0.0) fail("graph.spectral_scale must be >= 0");

  if (variant != "dpda" && variant != "alg1" && variant != "alg2" && variant != "alg3")
    fail("algorithm.variant must be dpda, alg1, alg2, or alg3");

  if (compressor != "identity" && compressor != "unbiased_lbit" && compressor != "top_k" &&
      compressor != "norm_sign" && compressor != "uniform_quantizer" &&
      compressor != "one_bit_binary")
    fail("compressor.kind '" + compressor + "' is not known");
  if (levels < 1) fail("compressor.levels must be >= 1");
  if (top_k < 1 || top_k > d) fail("compressor.k must satisfy 1 <= k <= d");
  if (!(delta > 0.0)) fail("compressor.delta must be positive");
  if (b1 < 1 || b2 < 1) fail("compressor.b1 and compressor.b2 must be positive");

  if (iterations < 1) fail("run.iterations must be >= 1");
  if (!(x0_scale >= 0.0)) fail("run.x0_scale must be >= 0");
  if (stop_threshold && !(*stop_threshold >= 0.0)) fail("run.stop_threshold must be >= 0");

  // full hyper-parameter check happens against the variant
  HyperParams h = hyper;
  Variant v = variant == "dpda" ? Variant::DPDA
              : variant == "alg1" ? Variant::Alg1
              : variant == "alg2" ? Variant::Alg2 : Variant::Alg3;
  h.validate(v);
}

void echo_config(std::ostream& out, const ExperimentConfig& c, const std::string& prefix) {
  auto kv = [&](const std::string& key, const auto& value) {
    out << prefix << key << " = " << value << "\n";
  };
  std::ostringstream num;
  num.precision(17);
  auto kvd = [&](const std::string& key, double value) {
    num.str("");
    num << value;
    kv(key, num.str());
  };

  kv("problem.n", c.n);
  kv("problem.d", c.d);
  kv("problem.m_i", c.m_i);
  kvd("problem.lambda", c.lambda);
  kvd("problem.mu", c.mu);
  kv("problem.objective", c.objective);
  kv("graph.kind", c.graph_kind);
  if (c.graph_kind == "geometric") kvd("graph.radius", c.radius);
  if (!c.edge_list_path.empty()) kv("graph.edge_list", c.edge_list_path);
  kv("graph.max_retries", c.graph_max_retries);
  kvd("graph.spectral_scale", c.spectral_scale);
  kv("algorithm.variant", c.variant);
  kv("compressor.kind", c.compressor);
  kv("compressor.levels", c.levels);
  kv("compressor.k", c.top_k);
  kvd("compressor.delta", c.delta);
  kv("compressor.b1", c.b1);
  kv("compressor.b2", c.b2);
  kvd("hyper.alpha", c.hyper.alpha);
  kvd("hyper.beta", c.hyper.beta);
  kvd("hyper.eta", c.hyper.eta);
  if (c.hyper.psi) kvd("hyper.psi", *c.hyper.psi);
  if (c.hyper.sigma) kvd("hyper.sigma", *c.hyper.sigma);
  if (c.hyper.s0) kvd("hyper.s0", *c.hyper.s0);
  if (c.hyper.gamma) kvd("hyper.gamma", *c.hyper.gamma);
  kv("run.iterations", c.iterations);
  kv("run.seed", c.seed);
  kvd("run.x0_scale", c.x0_scale);
  if (c.stop_threshold) kvd("run.stop_threshold", *c.stop_threshold);
}

}  // namespace dopt
