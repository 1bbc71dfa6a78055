#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace dopt {

// Synthetic classification data: features are i.i.d. standard normal and
// labels follow a planted logistic model y ~ Bernoulli(sigmoid(z' w*)) with
// a hidden w* ~ N(0, (9/d) I) drawn once per seed, so ||w*|| ~ 3 at every
// dimension. Draw order per agent stream: the d feature normals of a
// sample, then its label uniform.
struct Dataset {
  std::vector<Eigen::MatrixXd> features;  // one m_i x d block per agent
  std::vector<Eigen::VectorXd> labels;    // entries in {0,1}
  Eigen::VectorXd ground_truth;           // the hidden w*

  long total_samples() const;
};

Dataset generate_dataset(int n, int d, int m_i, std::uint64_t seed);

// one plain-text file per agent, "agent_000.txt" ...; each row is the d
// feature values followed by the label
void save_dataset(const Dataset& dataset, const std::string& directory);

}  // namespace dopt
