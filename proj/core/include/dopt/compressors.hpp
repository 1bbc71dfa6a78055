#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "dopt/rng.hpp"

namespace dopt {

enum class CompressorKind {
  UnbiasedLBit,      // stochastic l-bit quantizer, unbiased
  TopK,              // keep the k largest-magnitude coordinates
  NormSign,          // (||x||_inf / 2) * sign(x)
  UniformQuantizer,  // componentwise rounding to a Delta grid
  OneBitBinary,      // +-0.5 per coordinate
  Identity,
};

// One of the three error models a compressor may declare:
//   RelativeError:  E||C(x)/r - x||^2      <= (1-phi) ||x||^2
//   GlobalAbsolute: ||C(x)-x||_p^2         <= C        for all x
//   LocalAbsolute:  ||C(x)-x||_p           <= (1-phi)  whenever ||x||_p <= 1
// p may be infinity (use kPInf).
struct AssumptionClass {
  enum class Kind { RelativeError, GlobalAbsolute, LocalAbsolute };

  Kind kind;
  double r = 0.0;
  double phi = 0.0;
  double p = 0.0;
  double C = 0.0;

  static AssumptionClass relative_error(double phi, double r);
  static AssumptionClass global_absolute(double p, double C);
  static AssumptionClass local_absolute(double p, double phi);

  // one-sided error constant implied by the relative bound:
  // r0 = 2r^2(1-phi) + 2(1-r)^2, so E||C(x)-x||^2 <= r0 ||x||^2
  double relative_r0() const;

  std::string describe() const;
};

inline constexpr double kPInf = std::numeric_limits<double>::infinity();

class Compressor {
 public:
  static Compressor unbiased_lbit(int dimension, int levels, int bits_per_scalar = 64);
  static Compressor top_k(int dimension, int k, int bits_per_scalar = 64);
  static Compressor norm_sign(int dimension, int bits_per_scalar = 64);
  static Compressor uniform_quantizer(int dimension, double delta, int bits_per_integer = 8);
  static Compressor one_bit_binary(int dimension);
  static Compressor identity(int dimension, int bits_per_scalar = 64);

  CompressorKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  int levels() const { return levels_; }
  int k() const { return k_; }
  double delta() const { return delta_; }
  int bits_per_scalar() const { return bits_per_scalar_; }
  int bits_per_integer() const { return bits_per_integer_; }

  // true only for the stochastic quantizer; everything else is a pure
  // function of (parameters, x)
  bool stochastic() const { return kind_ == CompressorKind::UnbiasedLBit; }

  // rng is consumed only by the stochastic quantizer and must be non-null
  // for it; deterministic operators ignore it
  Eigen::VectorXd compress(const Eigen::VectorXd& x, SplitMix64* rng = nullptr) const;

  // bits one agent transmits per broadcast of a compressed vector
  long long bit_cost() const;

  // the error models this operator is known to satisfy, constants filled in
  std::vector<AssumptionClass> declared_classes() const;

  std::string name() const;
  std::string short_name() const;

 private:
  Compressor(CompressorKind kind, int dimension);

  CompressorKind kind_;
  int dimension_;
  int levels_ = 2;
  int k_ = 1;
  double delta_ = 1.0;
  int bits_per_scalar_ = 64;
  int bits_per_integer_ = 8;
};

struct VerificationReport {
  double max_ratio = 0.0;  // worst observed error / declared bound
  bool pass = false;
  long trials = 0;
  std::string detail;
};

// Monte-Carlo check of a declared error model. Deterministic bounds are
// required to hold exactly (tolerance ~ 0); the stochastic quantizer's
// expectation bound is averaged over inner_samples draws per trial and
// allowed a small sampling slack. tolerance < 0 selects those defaults.
VerificationReport verify_assumption(const Compressor& c, const AssumptionClass& a,
                                     long trials, SplitMix64& rng,
                                     double tolerance = -1.0, int inner_samples = 100);

struct UnbiasednessReport {
  double max_standard_errors = 0.0;   // worst single coordinate, diagnostic
  double aggregate_sigma = 0.0;       // sum of squared z-scores vs chi^2 mean, in sigmas
  bool pass = false;
  long draws = 0;
};

// Compares the empirical mean of repeated compressions against x. Each
// coordinate's deviation is standardized by its standard error; the pass
// verdict uses the aggregate sum of squares, which is chi^2(dof) under
// unbiasedness, demanding it stay within max_sigma standard deviations of
// its mean. (The per-coordinate maximum alone is miscalibrated for large d.)
UnbiasednessReport verify_unbiased(const Compressor& c, const Eigen::VectorXd& x,
                                   long draws, SplitMix64& rng, double max_sigma = 3.0);

// ||v||_p with p in [1, inf]
double lp_norm(const Eigen::VectorXd& v, double p);

}  // namespace dopt
