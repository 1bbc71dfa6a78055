#include "dopt/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "dopt/algorithms.hpp"
#include "dopt/errors.hpp"

namespace dopt {

RunRecord snapshot(const Eigen::MatrixXd& x_agents, long k, long long bits_cumulative,
                   const Objective& objective, double running_min) {
  if (!x_agents.allFinite())
    throw NumericalError("snapshot: non-finite state at round " + std::to_string(k));

  const int n = static_cast<int>(x_agents.cols());
  const Eigen::VectorXd x_bar = x_agents.rowwise().mean();

  double consensus = 0.0;
  for (int i = 0; i < n; ++i) consensus += (x_agents.col(i) - x_bar).squaredNorm();
  consensus /= static_cast<double>(n);

  const auto [f_bar, grad] = objective.global_value_and_gradient(x_bar);

  RunRecord rec;
  rec.k = k;
  rec.grad_norm_sq = grad.squaredNorm();
  rec.consensus_err = consensus;
  rec.p_of_t = std::min(running_min, rec.grad_norm_sq + rec.consensus_err);
  rec.f_bar = f_bar;
  rec.bits_cumulative = bits_cumulative;
  return rec;
}

RunRecord snapshot(const AlgorithmState& state, const Objective& objective,
                   double running_min) {
  return snapshot(state.x, state.k, state.bits.empty() ? 0 : state.bits[0], objective,
                  running_min);
}

std::optional<long long> bits_to_threshold(const std::vector<RunRecord>& records,
                                           double threshold) {
  for (const auto& rec : records)
    if (rec.p_of_t <= threshold) return rec.bits_cumulative;
  return std::nullopt;
}

const char* const kRunRecordCsvHeader = "k,grad_norm_sq,consensus_err,p_of_t,f_bar,bits_cumulative";

void write_record_csv(std::ostream& out, const RunRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g,%lld", r.k, r.grad_norm_sq,
                r.consensus_err, r.p_of_t, r.f_bar, r.bits_cumulative);
  out << buf << "\n";
}

}  // namespace dopt
