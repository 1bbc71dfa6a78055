#include "dopt/topology.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dopt {

namespace {

void validate_adjacency(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("adjacency must be square");
  const int n = static_cast<int>(a.rows());
  if (n < 1) throw std::invalid_argument("adjacency must have at least one node");
  for (int i = 0; i < n; ++i) {
    if (a(i, i) != 0.0) throw std::invalid_argument("adjacency diagonal must be zero");
    for (int j = 0; j < n; ++j) {
      if (a(i, j) < 0.0) throw std::invalid_argument("adjacency weights must be nonnegative");
      if (a(i, j) != a(j, i)) throw std::invalid_argument("adjacency must be symmetric");
    }
  }
}

}  // namespace

Eigen::MatrixXd laplacian(const Eigen::MatrixXd& adjacency) {
  validate_adjacency(adjacency);
  Eigen::MatrixXd lap = -adjacency;
  lap.diagonal() = adjacency.rowwise().sum();
  return lap;
}

std::pair<double, double> spectral_bounds(const Eigen::MatrixXd& lap) {
  const int n = static_cast<int>(lap.rows());
  if (n == 1) return {0.0, 0.0};

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectral_bounds: eigenvalue computation failed");
  const Eigen::VectorXd eig = solver.eigenvalues();  // ascending

  const double rho = eig[n - 1];
  const double zero_threshold = 1e-9 * std::max(rho, 1.0);
  int num_zero = 0;
  double rho2 = 0.0;
  for (int i = 0; i < n; ++i) {
    if (eig[i] <= zero_threshold) {
      ++num_zero;
    } else if (rho2 == 0.0) {
      rho2 = eig[i];
    }
  }
  if (num_zero != 1) {
    throw std::runtime_error(
        "spectral_bounds: graph is disconnected (" + std::to_string(num_zero) +
        " eigenvalues at zero)");
  }
  return {rho2, rho};
}

bool adjacency_connected(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::vector<int> queue{0};
  seen[0] = true;
  int reached = 1;
  while (!queue.empty()) {
    const int i = queue.back();
    queue.pop_back();
    for (int j = 0; j < n; ++j) {
      if (!seen[j] && a(i, j) > 0.0) {
        seen[j] = true;
        ++reached;
        queue.push_back(j);
      }
    }
  }
  return reached == n;
}

bool is_connected(const Topology& t) { return adjacency_connected(t.adjacency); }

Topology Topology::from_adjacency(Eigen::MatrixXd a) {
  Topology t;
  t.laplacian = dopt::laplacian(a);  // validates
  t.adjacency = std::move(a);
  t.n = static_cast<int>(t.adjacency.rows());
  auto [rho2, rho] = spectral_bounds(t.laplacian);
  t.rho2 = rho2;
  t.rho = rho;
  return t;
}

Topology Topology::scaled_to_spectral_radius(double target) const {
  if (target <= 0.0)
    throw std::invalid_argument("scaled_to_spectral_radius: target must be positive");
  if (rho == 0.0)
    throw std::invalid_argument("scaled_to_spectral_radius: graph has no edges");
  const double factor = target / rho;
  Topology t;
  t.n = n;
  t.adjacency = adjacency * factor;
  t.laplacian = laplacian * factor;
  t.rho2 = rho2 * factor;
  t.rho = rho * factor;
  return t;
}

Topology random_geometric_graph(int n, double radius, SplitMix64& rng, int max_retries) {
  if (n < 2) throw std::invalid_argument("random_geometric_graph: n must be >= 2");
  if (!(radius > 0.0) || radius > std::sqrt(2.0) + 1e-12)
    throw std::invalid_argument("random_geometric_graph: radius must be in (0, sqrt(2)]");
  if (max_retries < 1)
    throw std::invalid_argument("random_geometric_graph: max_retries must be >= 1");

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<double> px(n), py(n);
    for (int i = 0; i < n; ++i) {
      px[i] = rng.uniform01();
      py[i] = rng.uniform01();
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double dx = px[i] - px[j];
        const double dy = py[i] - py[j];
        if (std::sqrt(dx * dx + dy * dy) <= radius) {
          a(i, j) = 1.0;
          a(j, i) = 1.0;
        }
      }
    }
    if (adjacency_connected(a)) return Topology::from_adjacency(std::move(a));
  }
  throw std::runtime_error(
      "random_geometric_graph: no connected graph within max_retries; "
      "increase the radius or the retry budget");
}

Topology path_graph(int n) {
  if (n < 1) throw std::invalid_argument("path_graph: n must be >= 1");
  if (n == 1) return single_node();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = 1.0;
    a(i + 1, i) = 1.0;
  }
  return Topology::from_adjacency(std::move(a));
}

Topology complete_graph(int n) {
  if (n < 1) throw std::invalid_argument("complete_graph: n must be >= 1");
  if (n == 1) return single_node();
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(n, n);
  a.diagonal().setZero();
  return Topology::from_adjacency(std::move(a));
}

Topology single_node() {
  Topology t;
  t.n = 1;
  t.adjacency = Eigen::MatrixXd::Zero(1, 1);
  t.laplacian = Eigen::MatrixXd::Zero(1, 1);
  t.rho2 = 0.0;
  t.rho = 0.0;
  return t;
}

void save_edge_list(const Topology& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_edge_list: cannot open " + path);
  out.precision(17);
  out << "# nodes " << t.n << "\n";
  for (int i = 0; i < t.n; ++i)
    for (int j = i + 1; j < t.n; ++j)
      if (t.adjacency(i, j) > 0.0) out << i << " " << j << " " << t.adjacency(i, j) << "\n";
  if (!out) throw std::runtime_error("save_edge_list: write failed for " + path);
}

Topology load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_edge_list: cannot open " + path);

  int n = -1;
  struct Edge { int i, j; double w; };
  std::vector<Edge> edges;
  int max_node = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string tag;
      if (is >> tag && tag == "nodes") is >> n;
      continue;
    }
    std::istringstream is(line);
    Edge e{};
    if (!(is >> e.i >> e.j >> e.w))
      throw std::runtime_error("load_edge_list: malformed line: " + line);
    if (e.i < 0 || e.j < 0 || e.w < 0.0)
      throw std::runtime_error("load_edge_list: negative entry in line: " + line);
    max_node = std::max(max_node, std::max(e.i, e.j));
    edges.push_back(e);
  }
  if (n < 0) n = max_node + 1;
  if (n < 1) throw std::runtime_error("load_edge_list: no nodes in " + path);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    if (e.i >= n || e.j >= n)
      throw std::runtime_error("load_edge_list: node index out of range");
    a(e.i, e.j) = e.w;
    a(e.j, e.i) = e.w;
  }
  return Topology::from_adjacency(std::move(a));
}

}  // namespace dopt
