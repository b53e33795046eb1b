// Serial reference vs OpenMP kernel timings.

#include <benchmark/benchmark.h>

#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "xlris/bench.hpp"
#include "xlris/serial_ref.hpp"

namespace {

xlris::SystemConfig bench_config() {
  xlris::SystemConfig cfg;
  cfg.n_t = 2;
  cfg.n_y = 16;
  cfg.n_z = 4;
  cfg.f_c = 100e9;
  cfg.bandwidth = 10e9;
  cfg.n_subcarriers = 16;
  cfg.seed = 7;
  return cfg;
}

struct Fixture {
  xlris::SystemConfig cfg = bench_config();
  xlris::FrequencyGrid grid = xlris::subcarrier_grid(cfg);
  xlris::PathSet paths;
  xlris::UnifiedDictionary dict = xlris::unified_dictionary(cfg);
  xlris::CMatrix y;
  xlris::CMatrix omega;
  double noise_var = 0.0;

  Fixture() {
    std::mt19937_64 rng(cfg.seed);
    paths = xlris::sample_paths(cfg, rng);
    const auto channel =
        xlris::build_channel(cfg, grid, paths, xlris::NearFieldMode::kExact);
    const auto pilots = xlris::gen_pilots(cfg, 64, rng);
    const auto obs = xlris::synthesize_observations(channel.h_stacked, pilots,
                                                    dict, 10.0, rng);
    y = obs.y;
    omega = obs.omega;
    noise_var = obs.noise_var;
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void bm_channel_build_serial(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    auto h = xlris::serial::build_channel_ref(f.cfg, f.grid, f.paths,
                                              xlris::NearFieldMode::kExact);
    benchmark::DoNotOptimize(h.data());
  }
}
BENCHMARK(bm_channel_build_serial);

void bm_channel_build_parallel(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    auto ch = xlris::build_channel(f.cfg, f.grid, f.paths,
                                   xlris::NearFieldMode::kExact);
    benchmark::DoNotOptimize(ch.h_stacked.data());
  }
}
BENCHMARK(bm_channel_build_parallel);

void bm_pcsbl2d_threads(benchmark::State& state) {
#ifdef _OPENMP
  omp_set_num_threads(int(state.range(0)));
#endif
  auto& f = fixture();
  xlris::SolverConfig scfg;
  scfg.block_size = xlris::default_block_size(f.cfg);
  scfg.max_iterations = 20;
  for (auto _ : state) {
    auto res = xlris::pcsbl_2d(f.y, f.omega, scfg, f.noise_var);
    benchmark::DoNotOptimize(res.x_hat.data());
  }
#ifdef _OPENMP
  omp_set_num_threads(omp_get_num_procs());
#endif
}
BENCHMARK(bm_pcsbl2d_threads)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
