#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dopt/compressors.hpp"
#include "dopt/metrics.hpp"
#include "dopt/objectives.hpp"
#include "dopt/rng.hpp"
#include "dopt/topology.hpp"

namespace dopt {

// DPDA is the exact-communication primal-dual baseline; the other three
// variants compress what the agents broadcast. Alg1 tracks the iterate
// with an auxiliary pair (a, b) and sends one compressed difference per
// round; Alg2 additionally runs error feedback (e, q_hat) and sends two
// compressed vectors; Alg3 scales the compressor input by a geometric
// sequence s_k so bounded absolute error becomes negligible.
enum class Variant { DPDA, Alg1, Alg2, Alg3 };

std::string variant_name(Variant v);

struct HyperParams {
  double alpha = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  std::optional<double> psi;    // Alg1/Alg2
  std::optional<double> sigma;  // Alg2
  std::optional<double> s0;     // Alg3
  std::optional<double> gamma;  // Alg3, in (0,1)

  // throws ConfigError when a variant-required field is missing or invalid
  void validate(Variant v) const;
};

// Per-agent vectors live in the columns of d x n matrices. Between rounds
// the Alg3 fields x_hat/y hold the (k-1)-indexed values the next round
// consumes, and s holds s_k.
struct AlgorithmState {
  Variant variant = Variant::DPDA;
  long k = 0;
  Eigen::MatrixXd x, v;
  Eigen::MatrixXd a, b, q;     // Alg1/Alg2
  Eigen::MatrixXd e, q_hat;    // Alg2
  Eigen::MatrixXd x_hat, y;    // Alg3
  double s = 0.0;              // Alg3 scaling s_k
  std::vector<long long> bits; // per-agent cumulative broadcast bits

  int dimension() const { return static_cast<int>(x.rows()); }
  int num_agents() const { return static_cast<int>(x.cols()); }
  bool finite() const;
};

// State at k = 0 per each variant's initialize step; agent_rngs supplies
// one compression stream per agent (consumed only by stochastic
// compressors). DPDA requires the identity compressor.
AlgorithmState init(Variant variant, const Topology& topology, const Objective& objective,
                    const HyperParams& hyper, const Eigen::MatrixXd& x0,
                    const Compressor& compressor, std::vector<SplitMix64>& agent_rngs);

// One synchronous round: all agents read round-k neighbor values, then the
// round-(k+1) state is committed at once.
void step_dpda(AlgorithmState& state, const Topology& topology, const Objective& objective,
               const HyperParams& hyper, const Compressor& compressor);
void step_alg1(AlgorithmState& state, const Topology& topology, const Objective& objective,
               const HyperParams& hyper, const Compressor& compressor,
               std::vector<SplitMix64>& agent_rngs);
void step_alg2(AlgorithmState& state, const Topology& topology, const Objective& objective,
               const HyperParams& hyper, const Compressor& compressor,
               std::vector<SplitMix64>& agent_rngs);
void step_alg3(AlgorithmState& state, const Topology& topology, const Objective& objective,
               const HyperParams& hyper, const Compressor& compressor,
               std::vector<SplitMix64>& agent_rngs);

void step(AlgorithmState& state, const Topology& topology, const Objective& objective,
          const HyperParams& hyper, const Compressor& compressor,
          std::vector<SplitMix64>& agent_rngs);

// diagnostics for the conserved quantities
// ||sum_i v_i||_inf; zero for every variant when v_0 = 0
double dual_sum_violation(const AlgorithmState& state);
// Alg1/Alg2: max-norm of B - (A - A L); Alg3: max-norm of Y - (Xhat - Xhat L);
// DPDA: 0
double tracking_identity_violation(const AlgorithmState& state, const Topology& topology);

using RecordSink = std::function<void(const RunRecord&)>;

struct RunResult {
  AlgorithmState state;
  std::vector<RunRecord> records;
};

// Executes up to `iterations` rounds, emitting one record per round
// (k = 0..T-1, snapshot taken before the round's update). Deterministic
// given seed: compression streams are derived per agent from it. Stops
// early when p_of_t falls to stop_threshold, if given. Step errors
// propagate after the sink has seen the partial history.
RunResult run(Variant variant, const Topology& topology, const Objective& objective,
              const HyperParams& hyper, const Compressor& compressor,
              const Eigen::MatrixXd& x0, long iterations, std::uint64_t seed,
              const RecordSink& sink = {}, std::optional<double> stop_threshold = {});

}  // namespace dopt
