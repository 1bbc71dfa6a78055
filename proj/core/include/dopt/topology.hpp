#pragma once

#include <Eigen/Core>

#include <string>
#include <utility>

#include "dopt/rng.hpp"

namespace dopt {

// Undirected weighted graph with its Laplacian and the two spectral
// quantities the algorithms' analysis is phrased in: rho2 (smallest
// positive Laplacian eigenvalue, the algebraic connectivity) and rho
// (spectral radius). Immutable after construction.
struct Topology {
  int n = 0;
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd laplacian;
  double rho2 = 0.0;
  double rho = 0.0;

  // validates symmetry/nonnegativity/zero diagonal, builds L = Deg - A and
  // computes the spectral bounds; throws on disconnected graphs with n >= 2
  static Topology from_adjacency(Eigen::MatrixXd a);

  // same graph with all edge weights multiplied so that the Laplacian's
  // spectral radius equals target (eigenvalues scale exactly linearly)
  Topology scaled_to_spectral_radius(double target) const;
};

// L = Deg - A; rejects asymmetric, negative, or nonzero-diagonal input
Eigen::MatrixXd laplacian(const Eigen::MatrixXd& adjacency);

// (rho2, rho) of a connected-graph Laplacian; throws naming disconnection
// when two or more eigenvalues fall below the zero threshold. The
// threshold is 1e-9 relative to rho. n == 1 returns (0, 0).
std::pair<double, double> spectral_bounds(const Eigen::MatrixXd& lap);

// breadth-first search over positive-weight edges from node 0
bool is_connected(const Topology& t);
bool adjacency_connected(const Eigen::MatrixXd& a);

// n points uniform on the unit square, unit-weight edge when the pair is
// within radius; the whole point set is resampled until connected
Topology random_geometric_graph(int n, double radius, SplitMix64& rng,
                                int max_retries = 100);

// deterministic helpers used by tests and small experiments
Topology path_graph(int n);
Topology complete_graph(int n);
Topology single_node();

// plain-text edge list, one "i j weight" per line, 0-indexed
void save_edge_list(const Topology& t, const std::string& path);
Topology load_edge_list(const std::string& path);

}  // namespace dopt
