#include "dopt/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "dopt/rng.hpp"

namespace dopt {

long Dataset::total_samples() const {
  long m = 0;
  for (const auto& z : features) m += z.rows();
  return m;
}

Dataset generate_dataset(int n, int d, int m_i, std::uint64_t seed) {
  if (n < 1 || d < 1 || m_i < 1)
    throw std::invalid_argument("generate_dataset: n, d, m_i must be positive");

  Dataset ds;
  SplitMix64 truth_rng = make_stream(seed, StreamPurpose::kGroundTruth);
  ds.ground_truth.resize(d);
  // dimension-free signal scale ||w*|| ~ 3 keeps a stable fraction of
  // samples near the decision boundary, so the loss keeps curvature at
  // the optimum instead of saturating as d grows
  const double scale = 3.0 / std::sqrt(static_cast<double>(d));
  for (int s = 0; s < d; ++s) ds.ground_truth[s] = scale * truth_rng.normal();

  ds.features.reserve(n);
  ds.labels.reserve(n);
  for (int i = 0; i < n; ++i) {
    SplitMix64 rng = make_stream(seed, StreamPurpose::kDataset, i);
    Eigen::MatrixXd z(m_i, d);
    Eigen::VectorXd y(m_i);
    for (int l = 0; l < m_i; ++l) {
      for (int s = 0; s < d; ++s) z(l, s) = rng.normal();
      const double t = z.row(l).dot(ds.ground_truth);
      const double prob = t >= 0.0 ? 1.0 / (1.0 + std::exp(-t))
                                   : std::exp(t) / (1.0 + std::exp(t));
      y[l] = rng.uniform01() < prob ? 1.0 : 0.0;
    }
    ds.features.push_back(std::move(z));
    ds.labels.push_back(std::move(y));
  }
  return ds;
}

void save_dataset(const Dataset& dataset, const std::string& directory) {
  std::filesystem::create_directories(directory);
  char name[32];
  for (std::size_t i = 0; i < dataset.features.size(); ++i) {
    std::snprintf(name, sizeof(name), "agent_%03zu.txt", i);
    const auto path = std::filesystem::path(directory) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_dataset: cannot open " + path.string());
    out.precision(17);
    const auto& z = dataset.features[i];
    const auto& y = dataset.labels[i];
    for (int l = 0; l < z.rows(); ++l) {
      for (int s = 0; s < z.cols(); ++s) out << z(l, s) << " ";
      out << y[l] << "\n";
    }
    if (!out) throw std::runtime_error("save_dataset: write failed for " + path.string());
  }
}

}  // namespace dopt
