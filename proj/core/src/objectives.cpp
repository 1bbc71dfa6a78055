#include "dopt/objectives.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace dopt {

namespace {

// log(1 + e^t) without overflow for |t| > 700
inline double softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void check_finite(const Eigen::VectorXd& x, const char* where) {
  if (!x.allFinite()) throw std::invalid_argument(std::string(where) + ": non-finite input");
}

void check_agent(int agent, int n, const char* where) {
  if (agent < 0 || agent >= n)
    throw std::invalid_argument(std::string(where) + ": agent index out of range");
}

}  // namespace

Objective Objective::logistic_nonconvex(std::vector<Eigen::MatrixXd> features,
                                        std::vector<Eigen::VectorXd> labels,
                                        double lambda, double mu) {
  if (features.empty() || features.size() != labels.size())
    throw std::invalid_argument("logistic: need matching per-agent features and labels");
  if (lambda < 0.0 || mu < 0.0)
    throw std::invalid_argument("logistic: lambda and mu must be nonnegative");

  Objective o;
  o.kind_ = ObjectiveKind::LogisticNonconvex;
  o.num_agents_ = static_cast<int>(features.size());
  o.dimension_ = static_cast<int>(features[0].cols());
  o.lambda_ = lambda;
  o.mu_ = mu;

  long m = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].cols() != o.dimension_)
      throw std::invalid_argument("logistic: inconsistent feature dimension");
    if (features[i].rows() != labels[i].size())
      throw std::invalid_argument("logistic: feature/label row mismatch");
    for (int l = 0; l < labels[i].size(); ++l)
      if (labels[i][l] != 0.0 && labels[i][l] != 1.0)
        throw std::invalid_argument("logistic: labels must be 0 or 1");
    m += features[i].rows();
  }
  if (m == 0) throw std::invalid_argument("logistic: no samples");
  o.total_samples_ = m;

  // L_f <= (n/m) * 0.25 * sigma_max(Z)^2 + 2 lambda mu, Z all rows stacked
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(o.dimension_, o.dimension_);
  for (const auto& z : features) gram.noalias() += z.transpose() * z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  const double sigma_sq = std::max(0.0, solver.eigenvalues().maxCoeff());
  o.smoothness_ = static_cast<double>(o.num_agents_) / static_cast<double>(m) * 0.25 * sigma_sq +
                  2.0 * lambda * mu;

  o.features_ = std::move(features);
  o.labels_ = std::move(labels);
  return o;
}

Objective Objective::pl_scalar(int num_agents, int dimension) {
  if (num_agents < 1 || dimension < 1)
    throw std::invalid_argument("pl_scalar: num_agents and dimension must be positive");
  Objective o;
  o.kind_ = ObjectiveKind::PLScalar;
  o.num_agents_ = num_agents;
  o.dimension_ = dimension;
  o.smoothness_ = 8.0;  // |f''| = |2 + 6 cos(2x)| <= 8
  o.pl_constant_ = 1.0 / 32.0;
  o.optimal_value_ = 0.0;
  return o;
}

Objective Objective::quadratic(std::vector<Eigen::MatrixXd> q, std::vector<Eigen::VectorXd> b) {
  if (q.empty() || q.size() != b.size())
    throw std::invalid_argument("quadratic: need matching Q and b per agent");

  Objective o;
  o.kind_ = ObjectiveKind::Quadratic;
  o.num_agents_ = static_cast<int>(q.size());
  o.dimension_ = static_cast<int>(q[0].rows());

  double max_eig = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i].rows() != o.dimension_ || q[i].cols() != o.dimension_ ||
        b[i].size() != o.dimension_)
      throw std::invalid_argument("quadratic: inconsistent dimensions");
    if (!q[i].isApprox(q[i].transpose(), 1e-12))
      throw std::invalid_argument("quadratic: Q must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q[i], Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
      throw std::invalid_argument("quadratic: Q must be positive semidefinite");
    max_eig = std::max(max_eig, solver.eigenvalues().maxCoeff());
  }
  o.smoothness_ = max_eig;

  // global quadratic: nu and f* are available when mean(Q) is definite
  Eigen::MatrixXd q_bar = Eigen::MatrixXd::Zero(o.dimension_, o.dimension_);
  Eigen::VectorXd b_bar = Eigen::VectorXd::Zero(o.dimension_);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q_bar += q[i];
    b_bar += b[i];
  }
  q_bar /= static_cast<double>(q.size());
  b_bar /= static_cast<double>(q.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bar_solver(q_bar, Eigen::EigenvaluesOnly);
  const double min_eig = bar_solver.eigenvalues().minCoeff();
  if (min_eig > 1e-12) {
    o.pl_constant_ = min_eig;
    const Eigen::VectorXd x_star = q_bar.ldlt().solve(-b_bar);
    o.optimal_value_ = 0.5 * x_star.dot(q_bar * x_star) + b_bar.dot(x_star);
  }

  o.q_ = std::move(q);
  o.b_ = std::move(b);
  return o;
}

Objective Objective::quadratic_shared(const Eigen::MatrixXd& q, const Eigen::VectorXd& b,
                                      int num_agents) {
  if (num_agents < 1) throw std::invalid_argument("quadratic_shared: num_agents must be positive");
  return quadratic(std::vector<Eigen::MatrixXd>(num_agents, q),
                   std::vector<Eigen::VectorXd>(num_agents, b));
}

double Objective::value(int agent, const Eigen::VectorXd& x) const {
  check_agent(agent, num_agents_, "value");
  check_finite(x, "value");
  if (x.size() != dimension_) throw std::invalid_argument("value: dimension mismatch");

  switch (kind_) {
    case ObjectiveKind::LogisticNonconvex: {
      const Eigen::MatrixXd& z = features_[agent];
      const Eigen::VectorXd& y = labels_[agent];
      const Eigen::VectorXd t = z * x;
      double loss = 0.0;
      for (int l = 0; l < t.size(); ++l)
        loss += (1.0 - y[l]) * softplus(t[l]) + y[l] * softplus(-t[l]);
      loss *= static_cast<double>(num_agents_) / static_cast<double>(total_samples_);
      double reg = 0.0;
      for (int s = 0; s < dimension_; ++s) {
        const double xs2 = x[s] * x[s];
        reg += lambda_ * mu_ * xs2 / (1.0 + mu_ * xs2);
      }
      return loss + reg;
    }
    case ObjectiveKind::PLScalar: {
      double f = 0.0;
      for (int s = 0; s < dimension_; ++s) {
        const double sn = std::sin(x[s]);
        f += x[s] * x[s] + 3.0 * sn * sn;
      }
      return f;
    }
    case ObjectiveKind::Quadratic:
      return 0.5 * x.dot(q_[agent] * x) + b_[agent].dot(x);
  }
  throw std::logic_error("value: unknown objective kind");
}

Eigen::VectorXd Objective::gradient(int agent, const Eigen::VectorXd& x) const {
  check_agent(agent, num_agents_, "gradient");
  check_finite(x, "gradient");
  if (x.size() != dimension_) throw std::invalid_argument("gradient: dimension mismatch");

  switch (kind_) {
    case ObjectiveKind::LogisticNonconvex: {
      const Eigen::MatrixXd& z = features_[agent];
      const Eigen::VectorXd& y = labels_[agent];
      const Eigen::VectorXd t = z * x;
      Eigen::VectorXd residual(t.size());
      for (int l = 0; l < t.size(); ++l) residual[l] = sigmoid(t[l]) - y[l];
      Eigen::VectorXd g = z.transpose() * residual;
      g *= static_cast<double>(num_agents_) / static_cast<double>(total_samples_);
      for (int s = 0; s < dimension_; ++s) {
        const double denom = 1.0 + mu_ * x[s] * x[s];
        g[s] += 2.0 * lambda_ * mu_ * x[s] / (denom * denom);
      }
      return g;
    }
    case ObjectiveKind::PLScalar: {
      Eigen::VectorXd g(dimension_);
      for (int s = 0; s < dimension_; ++s) g[s] = 2.0 * x[s] + 3.0 * std::sin(2.0 * x[s]);
      return g;
    }
    case ObjectiveKind::Quadratic:
      return q_[agent] * x + b_[agent];
  }
  throw std::logic_error("gradient: unknown objective kind");
}

std::pair<double, Eigen::VectorXd> Objective::global_value_and_gradient(
    const Eigen::VectorXd& x) const {
  double f = 0.0;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dimension_);
  for (int i = 0; i < num_agents_; ++i) {
    f += value(i, x);
    g += gradient(i, x);
  }
  const double inv_n = 1.0 / static_cast<double>(num_agents_);
  return {f * inv_n, g * inv_n};
}

double Objective::pl_residual(const Eigen::VectorXd& x) const {
  if (!pl_constant_ || !optimal_value_)
    throw std::invalid_argument("pl_residual: nu or f* unknown for this objective");
  const auto [f, g] = global_value_and_gradient(x);
  return 0.5 * g.squaredNorm() - *pl_constant_ * (f - *optimal_value_);
}

std::string Objective::name() const {
  switch (kind_) {
    case ObjectiveKind::LogisticNonconvex: return "logistic_nonconvex";
    case ObjectiveKind::PLScalar: return "pl_scalar";
    case ObjectiveKind::Quadratic: return "quadratic";
  }
  return "unknown";
}

}  // namespace dopt
