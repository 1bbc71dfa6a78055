#include "dopt/compressors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dopt {

namespace {

// sign convention: +1 at zero, matching the one-bit quantizer's rule
inline double sign_pos(double v) { return v >= 0.0 ? 1.0 : -1.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

AssumptionClass AssumptionClass::relative_error(double phi, double r) {
  require(phi > 0.0 && phi <= 1.0, "relative_error: phi must be in (0,1]");
  require(r > 0.0, "relative_error: r must be positive");
  AssumptionClass a;
  a.kind = Kind::RelativeError;
  a.phi = phi;
  a.r = r;
  return a;
}

AssumptionClass AssumptionClass::global_absolute(double p, double C) {
  require(p >= 1.0, "global_absolute: p must be >= 1");
  require(C >= 0.0, "global_absolute: C must be >= 0");
  AssumptionClass a;
  a.kind = Kind::GlobalAbsolute;
  a.p = p;
  a.C = C;
  return a;
}

AssumptionClass AssumptionClass::local_absolute(double p, double phi) {
  require(p >= 1.0, "local_absolute: p must be >= 1");
  require(phi > 0.0 && phi <= 1.0, "local_absolute: phi must be in (0,1]");
  AssumptionClass a;
  a.kind = Kind::LocalAbsolute;
  a.p = p;
  a.phi = phi;
  return a;
}

double AssumptionClass::relative_r0() const {
  require(kind == Kind::RelativeError, "relative_r0: not a relative-error class");
  return 2.0 * r * r * (1.0 - phi) + 2.0 * (1.0 - r) * (1.0 - r);
}

std::string AssumptionClass::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::RelativeError:
      os << "relative(r=" << r << ",phi=" << phi << ")";
      break;
    case Kind::GlobalAbsolute:
      os << "global_absolute(p=" << p << ",C=" << C << ")";
      break;
    case Kind::LocalAbsolute:
      os << "local_absolute(p=" << p << ",phi=" << phi << ")";
      break;
  }
  return os.str();
}

double lp_norm(const Eigen::VectorXd& v, double p) {
  require(p >= 1.0, "lp_norm: p must be >= 1");
  if (std::isinf(p)) return v.lpNorm<Eigen::Infinity>();
  if (p == 1.0) return v.lpNorm<1>();
  if (p == 2.0) return v.norm();
  double acc = 0.0;
  for (int s = 0; s < v.size(); ++s) acc += std::pow(std::abs(v[s]), p);
  return std::pow(acc, 1.0 / p);
}

Compressor::Compressor(CompressorKind kind, int dimension)
    : kind_(kind), dimension_(dimension) {
  require(dimension >= 1, "compressor: dimension must be positive");
}

Compressor Compressor::unbiased_lbit(int dimension, int levels, int bits_per_scalar) {
  Compressor c(CompressorKind::UnbiasedLBit, dimension);
  require(levels >= 1, "unbiased_lbit: levels must be positive");
  require(bits_per_scalar >= 1, "unbiased_lbit: bits_per_scalar must be positive");
  c.levels_ = levels;
  c.bits_per_scalar_ = bits_per_scalar;
  return c;
}

Compressor Compressor::top_k(int dimension, int k, int bits_per_scalar) {
  Compressor c(CompressorKind::TopK, dimension);
  require(k >= 1 && k <= dimension, "top_k: k must satisfy 1 <= k <= dimension");
  require(bits_per_scalar >= 1, "top_k: bits_per_scalar must be positive");
  c.k_ = k;
  c.bits_per_scalar_ = bits_per_scalar;
  return c;
}

Compressor Compressor::norm_sign(int dimension, int bits_per_scalar) {
  Compressor c(CompressorKind::NormSign, dimension);
  require(bits_per_scalar >= 1, "norm_sign: bits_per_scalar must be positive");
  c.bits_per_scalar_ = bits_per_scalar;
  return c;
}

Compressor Compressor::uniform_quantizer(int dimension, double delta, int bits_per_integer) {
  Compressor c(CompressorKind::UniformQuantizer, dimension);
  require(delta > 0.0, "uniform_quantizer: delta must be positive");
  require(bits_per_integer >= 1, "uniform_quantizer: bits_per_integer must be positive");
  c.delta_ = delta;
  c.bits_per_integer_ = bits_per_integer;
  return c;
}

Compressor Compressor::one_bit_binary(int dimension) {
  return Compressor(CompressorKind::OneBitBinary, dimension);
}

Compressor Compressor::identity(int dimension, int bits_per_scalar) {
  Compressor c(CompressorKind::Identity, dimension);
  require(bits_per_scalar >= 1, "identity: bits_per_scalar must be positive");
  c.bits_per_scalar_ = bits_per_scalar;
  return c;
}

Eigen::VectorXd Compressor::compress(const Eigen::VectorXd& x, SplitMix64* rng) const {
  require(static_cast<int>(x.size()) == dimension_,
          "compress: input dimension does not match compressor dimension");
  const int d = dimension_;

  switch (kind_) {
    case CompressorKind::Identity:
      return x;

    case CompressorKind::UnbiasedLBit: {
      require(rng != nullptr, "compress: stochastic quantizer needs an rng stream");
      const double norm_inf = x.lpNorm<Eigen::Infinity>();
      Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
      const double half_levels = std::ldexp(1.0, levels_ - 1);  // 2^(l-1)
      // draw the perturbation for every coordinate, even when the input is
      // zero, so stream consumption is a fixed function of d
      for (int s = 0; s < d; ++s) {
        const double w = rng->uniform01();
        if (norm_inf == 0.0) continue;
        const double u = half_levels * std::abs(x[s]) / norm_inf;
        out[s] = sign_pos(x[s]) * (norm_inf / half_levels) * std::floor(u + w);
      }
      return out;
    }

    case CompressorKind::TopK: {
      std::vector<int> idx(d);
      std::iota(idx.begin(), idx.end(), 0);
      // ties between equal magnitudes keep the lowest index
      std::partial_sort(idx.begin(), idx.begin() + k_, idx.end(),
                        [&x](int a, int b) {
                          const double fa = std::abs(x[a]), fb = std::abs(x[b]);
                          if (fa != fb) return fa > fb;
                          return a < b;
                        });
      Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
      for (int s = 0; s < k_; ++s) out[idx[s]] = x[idx[s]];
      return out;
    }

    case CompressorKind::NormSign: {
      const double norm_inf = x.lpNorm<Eigen::Infinity>();
      if (norm_inf == 0.0) return Eigen::VectorXd::Zero(d);
      Eigen::VectorXd out(d);
      for (int s = 0; s < d; ++s) out[s] = 0.5 * norm_inf * sign_pos(x[s]);
      return out;
    }

    case CompressorKind::UniformQuantizer: {
      Eigen::VectorXd out(d);
      for (int s = 0; s < d; ++s) out[s] = delta_ * std::floor(x[s] / delta_ + 0.5);
      return out;
    }

    case CompressorKind::OneBitBinary: {
      Eigen::VectorXd out(d);
      for (int s = 0; s < d; ++s) out[s] = x[s] >= 0.0 ? 0.5 : -0.5;
      return out;
    }
  }
  throw std::logic_error("compress: unknown compressor kind");
}

long long Compressor::bit_cost() const {
  const long long d = dimension_;
  switch (kind_) {
    case CompressorKind::UnbiasedLBit:
      return (static_cast<long long>(levels_) + 1) * d + bits_per_scalar_;
    case CompressorKind::TopK:
      return static_cast<long long>(k_) * bits_per_scalar_;
    case CompressorKind::NormSign:
      return 2 * d + bits_per_scalar_;
    case CompressorKind::UniformQuantizer:
      return d * bits_per_integer_;
    case CompressorKind::OneBitBinary:
      return d;
    case CompressorKind::Identity:
      return d * bits_per_scalar_;
  }
  throw std::logic_error("bit_cost: unknown compressor kind");
}

std::vector<AssumptionClass> Compressor::declared_classes() const {
  const double d = dimension_;
  switch (kind_) {
    case CompressorKind::UnbiasedLBit: {
      const double r1 = d / std::pow(4.0, levels_);
      return {AssumptionClass::relative_error(1.0 / (1.0 + r1), 1.0 + r1)};
    }
    case CompressorKind::TopK: {
      const double phi = static_cast<double>(k_) / d;
      return {AssumptionClass::relative_error(phi, 1.0),
              AssumptionClass::local_absolute(2.0, phi)};
    }
    case CompressorKind::NormSign:
      return {AssumptionClass::relative_error(1.0 / (d * d), d / 2.0),
              AssumptionClass::local_absolute(kPInf, 0.5)};
    case CompressorKind::UniformQuantizer:
      return {AssumptionClass::global_absolute(kPInf, delta_ * delta_ / 4.0)};
    case CompressorKind::OneBitBinary:
      return {AssumptionClass::local_absolute(kPInf, 0.5)};
    case CompressorKind::Identity:
      return {AssumptionClass::relative_error(1.0, 1.0)};
  }
  throw std::logic_error("declared_classes: unknown compressor kind");
}

std::string Compressor::name() const {
  std::ostringstream os;
  switch (kind_) {
    case CompressorKind::UnbiasedLBit:
      os << "unbiased_lbit(l=" << levels_ << ",b1=" << bits_per_scalar_ << ")";
      break;
    case CompressorKind::TopK:
      os << "top_k(k=" << k_ << ",b1=" << bits_per_scalar_ << ")";
      break;
    case CompressorKind::NormSign:
      os << "norm_sign(b1=" << bits_per_scalar_ << ")";
      break;
    case CompressorKind::UniformQuantizer:
      os << "uniform_quantizer(delta=" << delta_ << ",b2=" << bits_per_integer_ << ")";
      break;
    case CompressorKind::OneBitBinary:
      os << "one_bit_binary";
      break;
    case CompressorKind::Identity:
      os << "identity(b1=" << bits_per_scalar_ << ")";
      break;
  }
  return os.str();
}

std::string Compressor::short_name() const {
  switch (kind_) {
    case CompressorKind::UnbiasedLBit: return "c1";
    case CompressorKind::TopK: return "c2";
    case CompressorKind::NormSign: return "c3";
    case CompressorKind::UniformQuantizer: return "c4";
    case CompressorKind::OneBitBinary: return "c5";
    case CompressorKind::Identity: return "id";
  }
  throw std::logic_error("short_name: unknown compressor kind");
}

namespace {

bool pairing_supported(CompressorKind c, AssumptionClass::Kind a) {
  using AK = AssumptionClass::Kind;
  switch (c) {
    case CompressorKind::UnbiasedLBit:
      return a == AK::RelativeError;
    case CompressorKind::TopK:
    case CompressorKind::NormSign:
      return a == AK::RelativeError || a == AK::LocalAbsolute;
    case CompressorKind::UniformQuantizer:
      return a == AK::GlobalAbsolute || a == AK::LocalAbsolute;
    case CompressorKind::OneBitBinary:
      return a == AK::LocalAbsolute;
    case CompressorKind::Identity:
      return true;
  }
  return false;
}

// sample for the relative / global checks: gaussian direction, magnitude
// swept over several decades
Eigen::VectorXd sample_free(int d, SplitMix64& rng) {
  Eigen::VectorXd x(d);
  for (int s = 0; s < d; ++s) x[s] = rng.normal();
  return x * std::pow(10.0, rng.uniform(-2.0, 2.0));
}

// sample inside the unit p-ball; alternates gaussian directions with
// flat-magnitude sign vectors (the worst case for sparsifiers), half of
// each on the boundary where the local bounds are tight
Eigen::VectorXd sample_unit_ball(int d, double p, long trial, SplitMix64& rng) {
  const bool boundary = trial % 2 == 0;
  const bool flat = trial % 4 >= 2;
  Eigen::VectorXd x(d);
  if (flat) {
    const double magnitude = std::isinf(p) ? 1.0 : std::pow(double(d), -1.0 / p);
    for (int s = 0; s < d; ++s)
      x[s] = (rng.next_u64() & 1 ? magnitude : -magnitude);
    if (!boundary) x *= rng.uniform01();
    return x;
  }
  if (std::isinf(p)) {
    for (int s = 0; s < d; ++s) x[s] = rng.uniform(-1.0, 1.0);
    const double norm = x.lpNorm<Eigen::Infinity>();
    if (boundary && norm > 0.0) x /= norm;
    return x;
  }
  for (int s = 0; s < d; ++s) x[s] = rng.normal();
  const double norm = lp_norm(x, p);
  if (norm == 0.0) return Eigen::VectorXd::Zero(d);
  x /= norm;
  if (!boundary) x *= rng.uniform01();
  return x;
}

}  // namespace

VerificationReport verify_assumption(const Compressor& c, const AssumptionClass& a,
                                     long trials, SplitMix64& rng,
                                     double tolerance, int inner_samples) {
  if (trials < 1) throw std::invalid_argument("verify_assumption: trials must be >= 1");
  if (!pairing_supported(c.kind(), a.kind)) {
    throw std::invalid_argument("verify_assumption: " + c.name() +
                                " is not declared under " + a.describe());
  }
  if (tolerance < 0.0) tolerance = c.stochastic() ? 0.05 : 1e-12;
  const int d = c.dimension();
  const int inner = c.stochastic() ? std::max(1, inner_samples) : 1;

  double max_ratio = 0.0;
  for (long t = 0; t < trials; ++t) {
    Eigen::VectorXd x;
    double bound = 0.0;
    double err = 0.0;

    switch (a.kind) {
      case AssumptionClass::Kind::RelativeError: {
        x = sample_free(d, rng);
        const double xx = x.squaredNorm();
        if (xx == 0.0) continue;
        bound = (1.0 - a.phi) * xx;
        double acc = 0.0;
        for (int i = 0; i < inner; ++i)
          acc += (c.compress(x, &rng) / a.r - x).squaredNorm();
        err = acc / inner;
        break;
      }
      case AssumptionClass::Kind::GlobalAbsolute: {
        x = sample_free(d, rng);
        bound = a.C;
        double acc = 0.0;
        for (int i = 0; i < inner; ++i) {
          const double e = lp_norm(c.compress(x, &rng) - x, a.p);
          acc += e * e;
        }
        err = acc / inner;
        break;
      }
      case AssumptionClass::Kind::LocalAbsolute: {
        x = sample_unit_ball(d, a.p, t, rng);
        bound = 1.0 - a.phi;
        double acc = 0.0;
        for (int i = 0; i < inner; ++i)
          acc += lp_norm(c.compress(x, &rng) - x, a.p);
        err = acc / inner;
        break;
      }
    }

    if (bound == 0.0) {
      // phi == 1 leaves no slack: the error itself must vanish
      if (err > 0.0) max_ratio = std::numeric_limits<double>::infinity();
      continue;
    }
    max_ratio = std::max(max_ratio, err / bound);
  }

  VerificationReport report;
  report.max_ratio = max_ratio;
  report.trials = trials;
  report.pass = max_ratio <= 1.0 + tolerance;
  report.detail = c.name() + " vs " + a.describe();
  return report;
}

UnbiasednessReport verify_unbiased(const Compressor& c, const Eigen::VectorXd& x,
                                   long draws, SplitMix64& rng, double max_sigma) {
  if (!c.stochastic())
    throw std::invalid_argument("verify_unbiased: compressor is deterministic");
  if (draws < 2) throw std::invalid_argument("verify_unbiased: need at least 2 draws");

  const int d = c.dimension();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(d);
  for (long i = 0; i < draws; ++i) {
    const Eigen::VectorXd y = c.compress(x, &rng);
    const Eigen::VectorXd delta = y - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta.cwiseProduct(y - mean);
  }

  double worst = 0.0;
  double sum_sq = 0.0;
  int dof = 0;
  bool exact_mismatch = false;
  for (int s = 0; s < d; ++s) {
    const double sd = std::sqrt(m2[s] / static_cast<double>(draws - 1));
    const double se = sd / std::sqrt(static_cast<double>(draws));
    const double dev = std::abs(mean[s] - x[s]);
    if (se == 0.0) {
      // deterministic coordinates (0 or +-||x||_inf) must match bit-for-bit
      if (dev > 0.0) exact_mismatch = true;
      continue;
    }
    const double z = dev / se;
    worst = std::max(worst, z);
    sum_sq += z * z;
    ++dof;
  }

  UnbiasednessReport report;
  report.max_standard_errors = exact_mismatch ? std::numeric_limits<double>::infinity() : worst;
  report.draws = draws;
  if (dof == 0) {
    report.aggregate_sigma = exact_mismatch ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    // sum of squared z-scores is chi^2(dof): mean dof, variance 2 dof
    report.aggregate_sigma = (sum_sq - dof) / std::sqrt(2.0 * dof);
    if (exact_mismatch) report.aggregate_sigma = std::numeric_limits<double>::infinity();
  }
  report.pass = report.aggregate_sigma <= max_sigma;
  return report;
}

}  // namespace dopt
