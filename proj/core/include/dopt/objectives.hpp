#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dopt {

enum class ObjectiveKind {
  LogisticNonconvex,  // logistic loss with a smooth nonconvex regularizer
  PLScalar,           // sum_s x_s^2 + 3 sin^2(x_s); nonconvex but PL with nu = 1/32
  Quadratic,          // 0.5 x'Qx + b'x per agent
};

// A collection of n per-agent differentiable costs f_i with the global
// objective f = (1/n) sum_i f_i. Immutable after construction.
class Objective {
 public:
  static Objective logistic_nonconvex(std::vector<Eigen::MatrixXd> features,
                                      std::vector<Eigen::VectorXd> labels,
                                      double lambda, double mu);
  static Objective pl_scalar(int num_agents, int dimension);
  static Objective quadratic(std::vector<Eigen::MatrixXd> q,
                             std::vector<Eigen::VectorXd> b);
  static Objective quadratic_shared(const Eigen::MatrixXd& q, const Eigen::VectorXd& b,
                                    int num_agents);

  ObjectiveKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  int num_agents() const { return num_agents_; }

  double value(int agent, const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(int agent, const Eigen::VectorXd& x) const;

  // f(x) = (1/n) sum_i f_i(x) and its gradient
  std::pair<double, Eigen::VectorXd> global_value_and_gradient(const Eigen::VectorXd& x) const;

  // 0.5 ||grad f(x)||^2 - nu (f(x) - f*); nonnegative wherever the PL
  // inequality holds. Throws when nu or f* is unknown.
  double pl_residual(const Eigen::VectorXd& x) const;

  // smoothness constant L_f (exact for the analytic objectives, a spectral
  // bound for the logistic one); diagnostics only, steps come from config
  double smoothness() const { return smoothness_; }
  std::optional<double> pl_constant() const { return pl_constant_; }
  std::optional<double> optimal_value() const { return optimal_value_; }

  std::string name() const;

 private:
  Objective() = default;

  ObjectiveKind kind_ = ObjectiveKind::Quadratic;
  int dimension_ = 0;
  int num_agents_ = 0;
  double smoothness_ = 0.0;
  std::optional<double> pl_constant_;
  std::optional<double> optimal_value_;

  // logistic
  std::vector<Eigen::MatrixXd> features_;
  std::vector<Eigen::VectorXd> labels_;
  double lambda_ = 0.0;
  double mu_ = 0.0;
  long total_samples_ = 0;

  // quadratic
  std::vector<Eigen::MatrixXd> q_;
  std::vector<Eigen::VectorXd> b_;
};

}  // namespace dopt
