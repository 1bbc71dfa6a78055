#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace dopt {

// SplitMix64 (Steele, Lea & Flood 2014), the generator behind every random
// draw in this library. It is trivially portable, which keeps traces
// reproducible across platforms and languages. Streams are derived from a
// master seed via stream_seed(), so per-agent draws are independent of
// execution order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform on [0,1) with 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on [lo,hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // standard normal via Box-Muller; the spare value is cached so draws come
  // in a fixed per-stream order
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] avoids log(0)
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stateless SplitMix64 finalizer, used to hash (seed, purpose, index)
// triples into stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Purposes keep the draws for unrelated jobs (dataset, initial iterates,
// per-agent compression, ...) on disjoint streams of the same master seed.
enum class StreamPurpose : std::uint64_t {
  kDataset = 1,
  kGroundTruth = 2,
  kInitialIterate = 3,
  kCompression = 4,
  kGraph = 5,
  kVerification = 6,
};

inline std::uint64_t stream_seed(std::uint64_t master, StreamPurpose purpose,
                                 std::uint64_t index = 0) {
  const std::uint64_t p = static_cast<std::uint64_t>(purpose);
  return mix64(master + 0x9e3779b97f4a7c15ULL * (p + 1) + mix64(index + 1));
}

inline SplitMix64 make_stream(std::uint64_t master, StreamPurpose purpose,
                              std::uint64_t index = 0) {
  return SplitMix64(stream_seed(master, purpose, index));
}

}  // namespace dopt
