#include <benchmark/benchmark.h>

#include "dopt/algorithms.hpp"
#include "dopt/config.hpp"
#include "dopt/experiment.hpp"

namespace {

using namespace dopt;

struct BenchSetup {
  Topology topo;
  Objective obj;
  Eigen::MatrixXd x0;

  static const BenchSetup& instance() {
    static const BenchSetup setup = [] {
      ExperimentConfig config;  // benchmark scale: n=20, d=50, m_i=200
      BenchSetup s{build_topology(config), build_objective(config, 20),
                   initial_iterates(config.d, 20, config.seed, config.x0_scale)};
      return s;
    }();
    return setup;
  }
};

void BM_step_dpda(benchmark::State& state) {
  const auto& s = BenchSetup::instance();
  HyperParams h;
  h.alpha = 85;
  h.beta = 5;
  h.eta = 1.4;
  const Compressor id = Compressor::identity(50);
  std::vector<SplitMix64> rngs;
  for (int i = 0; i < 20; ++i) rngs.push_back(make_stream(1, StreamPurpose::kCompression, i));
  auto st = init(Variant::DPDA, s.topo, s.obj, h, s.x0, id, rngs);
  for (auto _ : state) step_dpda(st, s.topo, s.obj, h, id);
}
BENCHMARK(BM_step_dpda);

void BM_step_alg1_top_k(benchmark::State& state) {
  const auto& s = BenchSetup::instance();
  HyperParams h;
  h.alpha = 85;
  h.beta = 5;
  h.eta = 1.4;
  h.psi = 0.05;
  const Compressor comp = Compressor::top_k(50, 10);
  std::vector<SplitMix64> rngs;
  for (int i = 0; i < 20; ++i) rngs.push_back(make_stream(1, StreamPurpose::kCompression, i));
  auto st = init(Variant::Alg1, s.topo, s.obj, h, s.x0, comp, rngs);
  for (auto _ : state) step_alg1(st, s.topo, s.obj, h, comp, rngs);
}
BENCHMARK(BM_step_alg1_top_k);

void BM_step_alg3_one_bit(benchmark::State& state) {
  const auto& s = BenchSetup::instance();
  HyperParams h;
  h.alpha = 85;
  h.beta = 5;
  h.eta = 0.46;
  h.s0 = 1.0;
  h.gamma = 0.9999;  // keep s_k normal over a long benchmark loop
  const Compressor comp = Compressor::one_bit_binary(50);
  std::vector<SplitMix64> rngs;
  for (int i = 0; i < 20; ++i) rngs.push_back(make_stream(1, StreamPurpose::kCompression, i));
  auto st = init(Variant::Alg3, s.topo, s.obj, h, s.x0, comp, rngs);
  for (auto _ : state) step_alg3(st, s.topo, s.obj, h, comp, rngs);
}
BENCHMARK(BM_step_alg3_one_bit);

void BM_snapshot(benchmark::State& state) {
  const auto& s = BenchSetup::instance();
  const double inf = std::numeric_limits<double>::infinity();
  for (auto _ : state) benchmark::DoNotOptimize(snapshot(s.x0, 0, 0, s.obj, inf));
}
BENCHMARK(BM_snapshot);

}  // namespace
