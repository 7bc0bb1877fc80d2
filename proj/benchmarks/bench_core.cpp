// Microbenchmarks for the hot paths: reachable-set propagation, per-step
// bound evaluation, Riccati solves, and full end-to-end synthesis.

#include <benchmark/benchmark.h>

#include "shieldsynth/lqr.hpp"
#include "shieldsynth/pipeline.hpp"
#include "shieldsynth/reach.hpp"
#include "shieldsynth/search.hpp"
#include "shieldsynth/shield.hpp"

using namespace shieldsynth;

namespace {

void BM_PropagateChain(benchmark::State& state) {
  const SystemSpec spec = shieldsynth::benchmark(
      state.range(0) == 1 ? "Pendulum" : std::to_string(state.range(0)) + "-Pendulum");
  const ControllerFamily fam = sample_family(spec, 1, 3);
  const Eigen::MatrixXd T = closed_loop_matrix(spec, 0, fam.gains[0]);
  for (auto _ : state) {
    ReachSetTuple rs = ReachSetTuple::initial(spec.init_box, spec.noise_verified);
    for (int t = 0; t < spec.horizon_M; ++t) rs = propagate(rs, T);
    ::benchmark::DoNotOptimize(rs.T_w);
  }
}
BENCHMARK(BM_PropagateChain)->Arg(1)->Arg(4)->Arg(8);

void BM_SafetyBound(benchmark::State& state) {
  const SystemSpec spec = shieldsynth::benchmark("Helicopter");
  const ControllerFamily fam = sample_family(spec, 1, 3);
  ReachSetTuple rs = ReachSetTuple::initial(spec.init_box, spec.noise_verified);
  const Eigen::MatrixXd T = closed_loop_matrix(spec, 0, fam.gains[0]);
  for (int t = 0; t < 100; ++t) rs = propagate(rs, T);
  for (auto _ : state) {
    const SafetyBound sb =
        safety_lower_bound(rs, spec.safe_box, spec.noise_dist);
    ::benchmark::DoNotOptimize(sb.p_hat);
  }
}
BENCHMARK(BM_SafetyBound);

void BM_RiccatiGain(benchmark::State& state) {
  const SystemSpec spec = shieldsynth::benchmark("Carplatoon");
  auto [A0, B0] = matrices_at(spec, 0);
  const Eigen::MatrixXd A_d =
      Eigen::MatrixXd::Identity(spec.n, spec.n) + spec.dt * A0;
  const Eigen::MatrixXd B_d = spec.dt * B0;
  const Eigen::VectorXd q = Eigen::VectorXd::Constant(spec.n, 5.0);
  const Eigen::VectorXd r = Eigen::VectorXd::Constant(spec.m, 2.0);
  for (auto _ : state) {
    const auto res = riccati_gain(A_d, B_d, q, r);
    ::benchmark::DoNotOptimize(res.K);
  }
}
BENCHMARK(BM_RiccatiGain);

void BM_SynthesizePendulum(benchmark::State& state) {
  const SystemSpec spec = shieldsynth::benchmark("Pendulum");
  const ControllerFamily fam = sample_family(spec, 10, 3);
  for (auto _ : state) {
    const SearchResult res = synthesize(spec, fam, {});
    ::benchmark::DoNotOptimize(res.L_opt);
  }
}
BENCHMARK(BM_SynthesizePendulum);

void BM_VerifyEndToEnd(benchmark::State& state) {
  const SystemSpec spec = shieldsynth::benchmark("Oscillator");
  VerifyOptions opts;
  opts.seed = 3;
  for (auto _ : state) {
    const VerifyOutcome out = run_verification(spec, opts);
    ::benchmark::DoNotOptimize(out.report.L_opt);
  }
}
BENCHMARK(BM_VerifyEndToEnd);

void BM_ShieldAction(benchmark::State& state) {
  const SystemSpec spec = shieldsynth::benchmark("Pendulum");
  const ControllerFamily fam = sample_family(spec, 3, 21);
  const SearchResult res = synthesize(spec, fam, {});
  const ShieldConfig cfg(spec, fam, res.phi_opt);
  Eigen::VectorXd s(2);
  s << 0.2, -0.1;
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, 1.0);
  for (auto _ : state) {
    auto [chosen, d] = shield_action(cfg, 10, s, a);
    ::benchmark::DoNotOptimize(chosen);
  }
}
BENCHMARK(BM_ShieldAction);

}  // namespace

BENCHMARK_MAIN();
