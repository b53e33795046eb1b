#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "xlris/bench.hpp"
#include "xlris/io.hpp"
#include "xlris/validate.hpp"

using namespace xlris;

namespace {

SystemConfig desk_cfg() {
  SystemConfig cfg;
  cfg.n_t = 2;
  cfg.n_y = 16;
  cfg.n_z = 4;
  cfg.f_c = 100e9;
  cfg.bandwidth = 10e9;
  cfg.n_subcarriers = 16;
  cfg.seed = 77;
  return cfg;
}

ExperimentPlan tiny_plan() {
  ExperimentPlan plan;
  plan.config = desk_cfg();
  plan.axis = ExperimentPlan::Axis::kPilotLength;
  plan.sweep_values = {48.0};
  plan.methods = {"oracle", "bomp"};
  plan.trials = 3;
  plan.solver.block_size = default_block_size(plan.config);
  return plan;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("experiment plan validation") {
  ExperimentPlan plan = tiny_plan();
  CHECK_NOTHROW(plan.validate());
  plan.sweep_values = {64.0, 32.0};
  CHECK_THROWS(plan.validate());
  plan = tiny_plan();
  plan.methods = {"no-such-method"};
  CHECK_THROWS(plan.validate());
  plan = tiny_plan();
  plan.trials = 0;
  CHECK_THROWS(plan.validate());
}

TEST_CASE("plan JSON round trip") {
  ExperimentPlan plan = tiny_plan();
  plan.axis = ExperimentPlan::Axis::kSnr;
  plan.sweep_values = {0.0, 5.0, 10.0};
  plan.fixed_pilot_length = 56;
  plan.channel_mode = NearFieldMode::kFresnel;
  plan.solver.noise_mode = NoiseVarMode::kEmEstimated;
  plan.solver.beta_c = 0.7;
  const auto text = plan_to_json(plan);
  const auto back = plan_from_json(text);
  CHECK(back.axis == ExperimentPlan::Axis::kSnr);
  CHECK(back.sweep_values == plan.sweep_values);
  CHECK(back.fixed_pilot_length == 56);
  CHECK(back.methods == plan.methods);
  CHECK(back.channel_mode == NearFieldMode::kFresnel);
  CHECK(back.solver.noise_mode == NoiseVarMode::kEmEstimated);
  CHECK(back.solver.beta_c == doctest::Approx(0.7));
  CHECK(plan_to_json(back) == text);
}

TEST_CASE("oracle reconstruction sits at the error floor") {
  ExperimentPlan plan = tiny_plan();
  plan.methods = {"oracle"};
  plan.trials = 2;
  const auto table = run_sweep(plan);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].failures == 0);
  CHECK(table.rows[0].nmse_db <= -240.0);
}

TEST_CASE("sweep results are reproducible and deterministic on disk") {
  ExperimentPlan plan = tiny_plan();
  const auto t1 = run_sweep(plan);
  const auto t2 = run_sweep(plan);
  REQUIRE(t1.rows.size() == t2.rows.size());
  for (std::size_t i = 0; i < t1.rows.size(); ++i) {
    CHECK(t1.rows[i].mean_linear_nmse == t2.rows[i].mean_linear_nmse);
    CHECK(t1.rows[i].trials == t2.rows[i].trials);
  }
  const auto dir1 = std::filesystem::temp_directory_path() / "xlris_det_a";
  const auto dir2 = std::filesystem::temp_directory_path() / "xlris_det_b";
  emit_results(t1, plan, dir1.string());
  emit_results(t2, plan, dir2.string());
  CHECK(slurp((dir1 / "results.csv").string()) ==
        slurp((dir2 / "results.csv").string()));
  CHECK(slurp((dir1 / "metadata.json").string()) ==
        slurp((dir2 / "metadata.json").string()));
  for (const auto& m : plan.methods)
    CHECK(slurp((dir1 / ("series_" + m + ".csv")).string()) ==
          slurp((dir2 / ("series_" + m + ".csv")).string()));
  CHECK(std::filesystem::exists(dir1 / "timings.csv"));
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("different seeds give different draws") {
  ExperimentPlan plan = tiny_plan();
  plan.methods = {"bomp"};
  plan.trials = 2;
  const auto a = run_sweep(plan);
  plan.config.seed = 78;
  const auto b = run_sweep(plan);
  CHECK(a.rows[0].mean_linear_nmse != b.rows[0].mean_linear_nmse);
}

TEST_CASE("matrix container round trip") {
  const auto path =
      (std::filesystem::temp_directory_path() / "xlris_io_test.bin").string();
  MatrixContainer c;
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss;
  CMatrix m(5, 3);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 5; ++i) m(i, j) = cplx(gauss(rng), gauss(rng));
  c["M"] = m;
  put_scalar(c, "alpha", 2.5);
  save_container(path, c);
  const auto back = load_container(path);
  REQUIRE(back.count("M") == 1);
  CHECK((back.at("M") - m).cwiseAbs().maxCoeff() == 0.0);
  CHECK(get_scalar(back, "alpha") == 2.5);
  std::filesystem::remove(path);
}

TEST_CASE("observation dump and replay") {
  ExperimentPlan plan = tiny_plan();
  const auto& cfg = plan.config;
  const auto grid = subcarrier_grid(cfg);
  const auto dict = unified_dictionary(cfg);
  std::mt19937_64 rng(cfg.seed);
  const auto paths = sample_paths(cfg, rng);
  const auto channel = build_channel(cfg, grid, paths, NearFieldMode::kExact);
  const auto pilots = gen_pilots(cfg, 48, rng);
  const auto obs =
      synthesize_observations(channel.h_stacked, pilots, dict, 10.0, rng);

  const auto path =
      (std::filesystem::temp_directory_path() / "xlris_replay.bin").string();
  dump_observations(path, obs, channel.h_stacked);

  const auto direct = run_method("bomp", cfg, grid, dict, channel.h_stacked,
                                 obs, plan);
  const double direct_db = nmse_db(direct, channel.h_stacked);
  const auto replayed = replay(path, "bomp", plan);
  CHECK(replayed.nmse_db == doctest::Approx(direct_db).epsilon(1e-9));
  std::filesystem::remove(path);
}

TEST_CASE("energy profile bookkeeping") {
  const auto cfg = desk_cfg();
  const auto profile = energy_profile(cfg, 2, NearFieldMode::kFresnel);
  REQUIRE(profile.block_energy.size() == 2);
  const int nb = default_block_size(cfg);
  const int n_blocks = (cfg.n_ris() * cfg.n_t + nb - 1) / nb;
  for (const auto& e : profile.block_energy) {
    CHECK(e.rows() == n_blocks);
    CHECK(e.cols() == cfg.n_subcarriers);
    CHECK(e.minCoeff() >= 0.0);
    CHECK(e.sum() > 0.0);
  }
}

TEST_CASE("energy-fraction block count") {
  RVector e(4);
  e << 4.0, 3.0, 2.0, 1.0;
  CHECK(blocks_for_energy_fraction(e, 0.65) == 2);
  CHECK(blocks_for_energy_fraction(e, 1.0) == 4);
  CHECK(blocks_for_energy_fraction(e, 0.1) == 1);
  CHECK(blocks_for_energy_fraction(RVector::Zero(4), 0.9) == 0);
}

TEST_CASE("algebraic identity suite passes at desk scale") {
  const auto checks = validate_identities(desk_cfg());
  REQUIRE(!checks.empty());
  for (const auto& c : checks) {
    INFO(c.name, ": ", c.value, " vs ", c.bound);
    CHECK(c.pass);
  }
}
