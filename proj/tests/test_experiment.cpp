#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "aevqe/runners.hpp"
#include "test_oracles.hpp"

using namespace aevqe;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

QuantumState exact_ground(int n, double hj) {
  oracle::Mat Hm = oracle::tfim_matrix(n, 1.0, hj);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(Hm);
  QuantumState s(n);
  for (int i = 0; i < (1 << n); ++i) s.amplitudes[i] = es.eigenvectors()(i, 0);
  return s;
}

}  // namespace

TEST(Magnetization, FullyOrderedState) {
  QuantumState all_up(3);
  EXPECT_NEAR(magnetization(all_up, 3), 1.0, 1e-15);
}

TEST(Magnetization, UniformSuperposition) {
  QuantumState s(3);
  s.amplitudes.assign(8, cplx{1.0 / std::sqrt(8.0), 0});
  EXPECT_NEAR(magnetization(s, 3), 0.5, 1e-12);
  // counts front end agrees
  MeasurementOutcome counts;
  for (int i = 0; i < 8; ++i) counts.counts[bits_to_string(i, 3)] = 125;
  counts.shots = 1000;
  EXPECT_NEAR(magnetization(counts, 3), 0.5, 1e-12);
}

TEST(Magnetization, EmptyCountsRejected) {
  MeasurementOutcome empty;
  EXPECT_THROW(magnetization(empty, 3), std::invalid_argument);
}

TEST(Magnetization, BoundsOnRandomDistributions) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::map<std::string, double> probs;
    double total = 0;
    for (int i = 0; i < 16; ++i) {
      const double w = u(rng);
      probs[bits_to_string(i, 4)] = w;
      total += w;
    }
    for (auto& [k, v] : probs) v /= total;
    const double m = magnetization(probs, 4);
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0);
  }
}

TEST(Magnetization, ExactCurveMonotoneAndSharpening) {
  const std::vector<double> grid{0.2, 0.3, 0.4, 0.5, 1.0, 2.0};
  std::map<int, std::vector<double>> curves;
  for (int n : {3, 5}) {
    for (double hj : grid) curves[n].push_back(magnetization(exact_ground(n, hj), n));
    for (std::size_t i = 1; i < grid.size(); ++i)
      EXPECT_LT(curves[n][i], curves[n][i - 1]) << "n=" << n << " i=" << i;
  }
  // frozen oracle values
  EXPECT_NEAR(curves[3][3], 0.711381003587979, 1e-9);
  EXPECT_NEAR(curves[5][3], 0.637845117103635, 1e-9);
  // finite-size sharpening at h/J = 0.5 (central difference on the grid)
  const double slope3 = (curves[3][4] - curves[3][2]) / (1.0 - 0.4);
  const double slope5 = (curves[5][4] - curves[5][2]) / (1.0 - 0.4);
  EXPECT_GT(std::abs(slope5), std::abs(slope3));
  // ordered limit
  EXPECT_NEAR(magnetization(exact_ground(3, 0.0), 3), 1.0, 1e-9);
  EXPECT_NEAR(magnetization(exact_ground(5, 0.0), 5), 1.0, 1e-9);
}

TEST(PostselectCounts, FiltersAncillaBits) {
  MeasurementOutcome full;
  full.counts = {{"000", 10}, {"100", 20}, {"011", 30}, {"111", 40}};
  full.shots = 100;
  auto kept = postselect_counts(full, 1, 1);
  // ancilla is character 0; outcome 1 keeps "100" and "111"
  EXPECT_EQ(kept.shots, 60);
  EXPECT_EQ(kept.counts.at("00"), 20);
  EXPECT_EQ(kept.counts.at("11"), 40);
}

TEST(Summarize, FixtureStatistics) {
  std::vector<RunRecord> recs(4);
  recs[0].converged = true;
  recs[0].iterations_to_converge = 10;
  recs[1].converged = true;
  recs[1].iterations_to_converge = 10;
  recs[2].converged = true;
  recs[2].iterations_to_converge = 10;
  recs[3].converged = false;
  recs[3].iterations = 200;
  auto st = summarize(recs);
  EXPECT_EQ(st.success_count, 3);
  EXPECT_EQ(st.failed_count, 1);
  EXPECT_NEAR(st.mean_iterations, 10.0, 1e-12);
  EXPECT_NEAR(st.std_iterations, 0.0, 1e-12);
  // hand-computed mixed fixture: successes {20, 30}, mean 25, sample std
  // sqrt(50); the failed 999 must not enter
  std::vector<RunRecord> mixed(3);
  mixed[0].converged = true;
  mixed[0].iterations_to_converge = 20;
  mixed[1].converged = true;
  mixed[1].iterations_to_converge = 30;
  mixed[2].converged = false;
  mixed[2].iterations = 999;
  auto st2 = summarize(mixed);
  EXPECT_EQ(st2.success_count, 2);
  EXPECT_NEAR(st2.mean_iterations, 25.0, 1e-12);
  EXPECT_NEAR(st2.std_iterations, std::sqrt(50.0), 1e-12);
}

TEST(Summarize, EmptySuccessSetIsNull) {
  std::vector<RunRecord> recs(2);
  auto st = summarize(recs);
  EXPECT_EQ(st.success_count, 0);
  EXPECT_EQ(st.failed_count, 2);
  EXPECT_TRUE(std::isnan(st.mean_iterations));
}

TEST(Records, JsonlRoundTrip) {
  RunRecord r;
  r.seed = 42;
  r.config = "algorithm=aevqe K=2";
  r.loss_trace = {-0.5, -1.25, -1.4};
  r.converged = true;
  r.converged_by = "oracle";
  r.iterations = 3;
  r.iterations_to_converge = 3;
  r.wall_seconds = 0.25;
  r.final_energies = {-1.5, -1.2};
  r.final_params = {0.1, -0.2};
  const std::string path = ::testing::TempDir() + "records.jsonl";
  write_records(path, {r, r});
  auto back = read_records(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].seed, r.seed);
  EXPECT_EQ(back[0].loss_trace, r.loss_trace);
  EXPECT_EQ(back[0].converged_by, "oracle");
  EXPECT_EQ(back[0].final_energies, r.final_energies);
}

TEST(Config, ParseRoundTrip) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::TfimLevels;
  cfg.n_spins = 5;
  cfg.h_over_J = {0.2, 0.5};
  cfg.trials = 7;
  cfg.base_seed = 99;
  cfg.exact = false;
  cfg.shots = 2048;
  cfg.noise_on = true;
  cfg.layers = 2;
  const std::string path = ::testing::TempDir() + "exp.cfg";
  {
    std::ofstream out(path);
    out << config_to_text(cfg);
  }
  auto back = load_config(path);
  EXPECT_EQ(back.kind, cfg.kind);
  EXPECT_EQ(back.n_spins, 5);
  EXPECT_EQ(back.trials, 7);
  EXPECT_EQ(back.base_seed, 99u);
  EXPECT_EQ(back.shots, 2048);
  EXPECT_EQ(back.layers, 2);
  ASSERT_EQ(back.h_over_J.size(), 2u);
  EXPECT_NEAR(back.h_over_J[1], 0.5, 1e-12);
}

TEST(Config, UnknownKeyRejected) {
  ExperimentConfig cfg;
  EXPECT_THROW(apply_config_line(cfg, "bogus", "1"), std::invalid_argument);
  EXPECT_THROW(apply_config_line(cfg, "algorithm", "nope"), std::invalid_argument);
  apply_config_line(cfg, "shots", "exact");
  EXPECT_TRUE(cfg.exact);
}

TEST(ParallelMap, DeterministicOrderAndCrashContainment) {
  auto safe = parallel_map<int>(16, 4, [](int i) { return i * i; });
  for (int i = 0; i < 16; ++i) EXPECT_EQ(safe[i], i * i);
  // a throwing trial is contained by the run_experiment-style wrapper
  auto guarded = parallel_map<RunRecord>(5, 2, [](int i) {
    RunRecord r;
    try {
      if (i == 3) throw std::runtime_error("boom");
      r.converged = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    return r;
  });
  EXPECT_EQ(guarded[3].error, "boom");
  EXPECT_TRUE(guarded[2].converged);
}

TEST(ShotBudgetExperiment, WritesAllocationTable) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::ShotBudget;
  cfg.shots = 15360;
  cfg.out_dir = ::testing::TempDir() + "shot_budget_out";
  auto tables = run_experiment(cfg);
  ASSERT_EQ(tables.size(), 1u);
  bool found = false;
  for (const auto& row : tables[0].rows) {
    if (row[0] == "mcvqe" && row[1] == "2" && row[3] == "0")
      found = (row[5] == "7680");
    if (found) break;
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(std::filesystem::exists(cfg.out_dir + "/shot_budget.csv"));
  EXPECT_TRUE(std::filesystem::exists(cfg.out_dir + "/manifest.txt"));
}

TEST(Experiments, RerunIsBitIdentical) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::TfimLevels;
  cfg.n_spins = 3;
  cfg.h_over_J = {0.5};
  cfg.trials = 2;
  cfg.base_seed = 11;
  cfg.workers = 2;
  cfg.exact = false;
  cfg.shots = 512;
  cfg.noise_on = true;
  cfg.max_iterations = 10;
  cfg.layers = 1;
  cfg.out_dir = ::testing::TempDir() + "rerun_a";
  run_experiment(cfg);
  const std::string a_csv = read_file(cfg.out_dir + "/tfim_levels.csv");
  auto a_rec = read_records(cfg.out_dir + "/records.jsonl");
  cfg.out_dir = ::testing::TempDir() + "rerun_b";
  cfg.workers = 1;  // scheduling must not matter
  run_experiment(cfg);
  EXPECT_EQ(a_csv, read_file(cfg.out_dir + "/tfim_levels.csv"));
  EXPECT_FALSE(a_csv.empty());
  // records identical up to wall-clock timing
  auto b_rec = read_records(cfg.out_dir + "/records.jsonl");
  ASSERT_EQ(a_rec.size(), b_rec.size());
  for (std::size_t i = 0; i < a_rec.size(); ++i) {
    EXPECT_EQ(a_rec[i].seed, b_rec[i].seed);
    EXPECT_EQ(a_rec[i].loss_trace, b_rec[i].loss_trace);
    EXPECT_EQ(a_rec[i].final_energies, b_rec[i].final_energies);
    EXPECT_EQ(a_rec[i].converged, b_rec[i].converged);
  }
}

TEST(Experiments, DefaultLayerPolicies) {
  EXPECT_EQ(default_layers(1), 1);
  EXPECT_EQ(default_layers(2), 1);
  EXPECT_EQ(default_layers(3), 2);  // ancilla-scaling auto-selection
  EXPECT_EQ(default_study_layers(3), 3);
  EXPECT_EQ(default_study_layers(5), 2);
  EXPECT_EQ(default_iteration_cap(3), 200);
  EXPECT_EQ(default_iteration_cap(5), 500);
  EXPECT_EQ(default_iteration_cap(9), 2500);
}
