#pragma once

#include <Eigen/Core>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dopt/objectives.hpp"

namespace dopt {

struct AlgorithmState;

// One iteration row of the performance trace. p_of_t is the running
// minimum over k' <= k of ||grad f(x_bar)||^2 + (1/n) sum_i ||x_i - x_bar||^2,
// taken over k in {0,...,T} including the initial iterate. bits_cumulative
// counts per-agent broadcast bits spent to reach iterate k, i.e. rounds
// 0..k-1.
struct RunRecord {
  long k = 0;
  double grad_norm_sq = 0.0;
  double consensus_err = 0.0;
  double p_of_t = 0.0;
  double f_bar = 0.0;
  long long bits_cumulative = 0;
};

// columns of x_agents are the per-agent iterates
RunRecord snapshot(const Eigen::MatrixXd& x_agents, long k, long long bits_cumulative,
                   const Objective& objective, double running_min);
RunRecord snapshot(const AlgorithmState& state, const Objective& objective,
                   double running_min);

// bits_cumulative at the first record with p_of_t <= threshold
std::optional<long long> bits_to_threshold(const std::vector<RunRecord>& records,
                                           double threshold);

// CSV schema: header row "k,grad_norm_sq,consensus_err,p_of_t,f_bar,bits_cumulative",
// floating-point fields with 17 significant digits
extern const char* const kRunRecordCsvHeader;
void write_record_csv(std::ostream& out, const RunRecord& record);

}  // namespace dopt
