#include "dopt/algorithms.hpp"

#include <cmath>
#include <limits>

#include "dopt/errors.hpp"

namespace dopt {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::DPDA: return "dpda";
    case Variant::Alg1: return "alg1";
    case Variant::Alg2: return "alg2";
    case Variant::Alg3: return "alg3";
  }
  return "unknown";
}

void HyperParams::validate(Variant v) const {
  auto positive = [](double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
      throw ConfigError(std::string("hyper.") + name + " must be positive");
  };
  positive(alpha, "alpha");
  positive(beta, "beta");
  positive(eta, "eta");
  if (v == Variant::Alg1 || v == Variant::Alg2) {
    if (!psi) throw ConfigError("hyper.psi is required for " + variant_name(v));
    positive(*psi, "psi");
  }
  if (v == Variant::Alg2) {
    if (!sigma) throw ConfigError("hyper.sigma is required for alg2");
    positive(*sigma, "sigma");
  }
  if (v == Variant::Alg3) {
    if (!s0) throw ConfigError("hyper.s0 is required for alg3");
    positive(*s0, "s0");
    if (!gamma) throw ConfigError("hyper.gamma is required for alg3");
    if (!(*gamma > 0.0 && *gamma < 1.0))
      throw ConfigError("hyper.gamma must be in (0,1)");
  }
}

bool AlgorithmState::finite() const {
  auto ok = [](const Eigen::MatrixXd& m) { return m.size() == 0 || m.allFinite(); };
  return ok(x) && ok(v) && ok(a) && ok(b) && ok(q) && ok(e) && ok(q_hat) && ok(x_hat) && ok(y);
}

namespace {

void check_round_inputs(const AlgorithmState& state, const Topology& topology,
                        const Objective& objective, const Compressor& compressor) {
  if (state.num_agents() != topology.n)
    throw std::invalid_argument("step: state/topology agent count mismatch");
  if (objective.num_agents() != topology.n)
    throw std::invalid_argument("step: objective/topology agent count mismatch");
  if (compressor.dimension() != state.dimension())
    throw std::invalid_argument("step: compressor dimension mismatch");
  if (!state.finite())
    throw NumericalError("non-finite state at round " + std::to_string(state.k) +
                         "; reduce the step size");
}

Eigen::MatrixXd gradients(const Objective& objective, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd g(x.rows(), x.cols());
  for (int i = 0; i < x.cols(); ++i) g.col(i) = objective.gradient(i, x.col(i));
  return g;
}

void add_bits(AlgorithmState& state, long long amount) {
  for (auto& b : state.bits) b += amount;
}

// error-feedback compressor argument; keep one expression shape so the
// telescoped e-update cancels exactly
Eigen::MatrixXd feedback_arg(double sigma, const Eigen::MatrixXd& e,
                             const Eigen::MatrixXd& x, const Eigen::MatrixXd& a) {
  return sigma * e + x - a;
}

}  // namespace

AlgorithmState init(Variant variant, const Topology& topology, const Objective& objective,
                    const HyperParams& hyper, const Eigen::MatrixXd& x0,
                    const Compressor& compressor, std::vector<SplitMix64>& agent_rngs) {
  hyper.validate(variant);
  const int n = topology.n;
  const int d = objective.dimension();
  if (x0.rows() != d || x0.cols() != n)
    throw std::invalid_argument("init: x0 must be dimension x num_agents");
  if (compressor.dimension() != d)
    throw std::invalid_argument("init: compressor dimension mismatch");
  if (variant != Variant::DPDA && static_cast<int>(agent_rngs.size()) < n)
    throw std::invalid_argument("init: need one rng stream per agent");
  if (variant == Variant::DPDA && compressor.kind() != CompressorKind::Identity)
    throw ConfigError("init: dpda communicates exact vectors; use the identity compressor");

  AlgorithmState state;
  state.variant = variant;
  state.k = 0;
  state.x = x0;
  state.v = Eigen::MatrixXd::Zero(d, n);
  state.bits.assign(n, 0);

  switch (variant) {
    case Variant::DPDA:
      break;
    case Variant::Alg1:
    case Variant::Alg2: {
      state.a = Eigen::MatrixXd::Zero(d, n);
      state.b = Eigen::MatrixXd::Zero(d, n);
      state.q.resize(d, n);
      for (int i = 0; i < n; ++i) state.q.col(i) = compressor.compress(x0.col(i), &agent_rngs[i]);
      if (variant == Variant::Alg2) {
        state.e = Eigen::MatrixXd::Zero(d, n);
        state.q_hat = state.q;  // q_hat_0 = q_0 = C(x_0)
      }
      break;
    }
    case Variant::Alg3: {
      state.x_hat = Eigen::MatrixXd::Zero(d, n);
      state.y = Eigen::MatrixXd::Zero(d, n);
      state.s = *hyper.s0;
      state.q.resize(d, n);
      for (int i = 0; i < n; ++i)
        state.q.col(i) = compressor.compress(x0.col(i) / state.s, &agent_rngs[i]);
      break;
    }
  }
  return state;
}

void step_dpda(AlgorithmState& state, const Topology& topology, const Objective& objective,
               const HyperParams& hyper, const Compressor& compressor) {
  if (state.variant != Variant::DPDA) throw std::invalid_argument("step_dpda: wrong variant");
  check_round_inputs(state, topology, objective, compressor);

  const Eigen::MatrixXd& lap = topology.laplacian;
  const Eigen::MatrixXd grad = gradients(objective, state.x);
  const Eigen::MatrixXd mix = state.x * lap;  // col i = sum_j L_ij x_j

  Eigen::MatrixXd x_next =
      state.x - hyper.eta * (hyper.alpha * mix + hyper.beta * state.v + grad);
  state.v += hyper.eta * hyper.beta * mix;
  state.x.swap(x_next);

  add_bits(state, compressor.bit_cost());
  ++state.k;
}

void step_alg1(AlgorithmState& state, const Topology& topology, const Objective& objective,
               const HyperParams& hyper, const Compressor& compressor,
               std::vector<SplitMix64>& agent_rngs) {
  if (state.variant != Variant::Alg1) throw std::invalid_argument("step_alg1: wrong variant");
  check_round_inputs(state, topology, objective, compressor);
  const double psi = *hyper.psi;

  const Eigen::MatrixXd& lap = topology.laplacian;
  const Eigen::MatrixXd grad = gradients(objective, state.x);
  const Eigen::MatrixXd lap_q = state.q * lap;

  // agents reconstruct sum_j L_ij xhat_j as a_i - b_i + sum_j L_ij q_j;
  // with b = a - La that equals (a + q) L, which avoids cancelling two
  // O(||a||) quantities down to an O(||L a||) difference
  const Eigen::MatrixXd mix = (state.a + state.q) * lap;

  Eigen::MatrixXd x_next =
      state.x - hyper.eta * (hyper.alpha * mix + hyper.beta * state.v + grad);
  state.v += hyper.eta * hyper.beta * mix;
  state.a += psi * state.q;
  state.b += psi * (state.q - lap_q);
  for (int i = 0; i < state.num_agents(); ++i)
    state.q.col(i) = compressor.compress(x_next.col(i) - state.a.col(i), &agent_rngs[i]);
  state.x.swap(x_next);

  add_bits(state, compressor.bit_cost());
  ++state.k;
}

void step_alg2(AlgorithmState& state, const Topology& topology, const Objective& objective,
               const HyperParams& hyper, const Compressor& compressor,
               std::vector<SplitMix64>& agent_rngs) {
  if (state.variant != Variant::Alg2) throw std::invalid_argument("step_alg2: wrong variant");
  check_round_inputs(state, topology, objective, compressor);
  const double psi = *hyper.psi;
  const double sigma = *hyper.sigma;

  const Eigen::MatrixXd& lap = topology.laplacian;
  const Eigen::MatrixXd grad = gradients(objective, state.x);
  const Eigen::MatrixXd lap_q = state.q * lap;

  // x and v mix the error-compensated broadcast q_hat; a and b track q.
  // a_i - b_i + sum_j L_ij qhat_j = ((a + qhat) L)_i, cancellation-free
  const Eigen::MatrixXd mix = (state.a + state.q_hat) * lap;

  Eigen::MatrixXd x_next =
      state.x - hyper.eta * (hyper.alpha * mix + hyper.beta * state.v + grad);
  state.v += hyper.eta * hyper.beta * mix;

  // e_{k+1} = sigma e_k + x_k - a_k - q_hat_k; q_hat_k was built from the
  // same expression, so the residual telescopes
  Eigen::MatrixXd e_next = feedback_arg(sigma, state.e, state.x, state.a) - state.q_hat;

  state.a += psi * state.q;
  state.b += psi * (state.q - lap_q);
  for (int i = 0; i < state.num_agents(); ++i)
    state.q.col(i) = compressor.compress(x_next.col(i) - state.a.col(i), &agent_rngs[i]);
  const Eigen::MatrixXd hat_arg = feedback_arg(sigma, e_next, x_next, state.a);
  for (int i = 0; i < state.num_agents(); ++i)
    state.q_hat.col(i) = compressor.compress(hat_arg.col(i), &agent_rngs[i]);
  state.e.swap(e_next);
  state.x.swap(x_next);

  add_bits(state, 2 * compressor.bit_cost());
  ++state.k;
}

void step_alg3(AlgorithmState& state, const Topology& topology, const Objective& objective,
               const HyperParams& hyper, const Compressor& compressor,
               std::vector<SplitMix64>& agent_rngs) {
  if (state.variant != Variant::Alg3) throw std::invalid_argument("step_alg3: wrong variant");
  check_round_inputs(state, topology, objective, compressor);

  const Eigen::MatrixXd& lap = topology.laplacian;
  const Eigen::MatrixXd grad = gradients(objective, state.x);
  const Eigen::MatrixXd lap_q = state.q * lap;

  state.x_hat += state.s * state.q;
  state.y += state.s * state.q - state.s * lap_q;
  // xhat_i - y_i telescopes to sum_j L_ij xhat_j; the product form skips
  // the large-minus-large difference
  const Eigen::MatrixXd mix = state.x_hat * lap;

  Eigen::MatrixXd x_next =
      state.x - hyper.eta * (hyper.alpha * mix + hyper.beta * state.v + grad);
  state.v += hyper.eta * hyper.beta * mix;

  const double s_next = state.s * *hyper.gamma;
  if (!std::isnormal(s_next)) {
    throw NumericalError("step_alg3: scaling sequence underflowed at round " +
                         std::to_string(state.k) + "; truncate the run or raise gamma/s0");
  }
  for (int i = 0; i < state.num_agents(); ++i)
    state.q.col(i) =
        compressor.compress((x_next.col(i) - state.x_hat.col(i)) / s_next, &agent_rngs[i]);
  state.s = s_next;
  state.x.swap(x_next);

  add_bits(state, compressor.bit_cost());
  ++state.k;
}

void step(AlgorithmState& state, const Topology& topology, const Objective& objective,
          const HyperParams& hyper, const Compressor& compressor,
          std::vector<SplitMix64>& agent_rngs) {
  switch (state.variant) {
    case Variant::DPDA:
      step_dpda(state, topology, objective, hyper, compressor);
      return;
    case Variant::Alg1:
      step_alg1(state, topology, objective, hyper, compressor, agent_rngs);
      return;
    case Variant::Alg2:
      step_alg2(state, topology, objective, hyper, compressor, agent_rngs);
      return;
    case Variant::Alg3:
      step_alg3(state, topology, objective, hyper, compressor, agent_rngs);
      return;
  }
  throw std::logic_error("step: unknown variant");
}

double dual_sum_violation(const AlgorithmState& state) {
  return state.v.rowwise().sum().lpNorm<Eigen::Infinity>();
}

double tracking_identity_violation(const AlgorithmState& state, const Topology& topology) {
  switch (state.variant) {
    case Variant::DPDA:
      return 0.0;
    case Variant::Alg1:
    case Variant::Alg2: {
      const Eigen::MatrixXd target = state.a - state.a * topology.laplacian;
      return (state.b - target).lpNorm<Eigen::Infinity>();
    }
    case Variant::Alg3: {
      const Eigen::MatrixXd target = state.x_hat - state.x_hat * topology.laplacian;
      return (state.y - target).lpNorm<Eigen::Infinity>();
    }
  }
  throw std::logic_error("tracking_identity_violation: unknown variant");
}

RunResult run(Variant variant, const Topology& topology, const Objective& objective,
              const HyperParams& hyper, const Compressor& compressor,
              const Eigen::MatrixXd& x0, long iterations, std::uint64_t seed,
              const RecordSink& sink, std::optional<double> stop_threshold) {
  if (iterations < 1) throw std::invalid_argument("run: iterations must be >= 1");

  std::vector<SplitMix64> agent_rngs;
  agent_rngs.reserve(topology.n);
  for (int i = 0; i < topology.n; ++i)
    agent_rngs.push_back(make_stream(seed, StreamPurpose::kCompression, i));

  RunResult result;
  result.state = init(variant, topology, objective, hyper, x0, compressor, agent_rngs);
  result.records.reserve(iterations);

  double running_min = std::numeric_limits<double>::infinity();
  for (long t = 0; t < iterations; ++t) {
    RunRecord rec = snapshot(result.state, objective, running_min);
    running_min = rec.p_of_t;
    result.records.push_back(rec);
    if (sink) sink(rec);
    if (stop_threshold && rec.p_of_t <= *stop_threshold) break;
    step(result.state, topology, objective, hyper, compressor, agent_rngs);
  }
  return result;
}

}  // namespace dopt
