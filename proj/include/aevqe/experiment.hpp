#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "aevqe/mitigate.hpp"
#include "aevqe/solver.hpp"
#include "aevqe/version.hpp"

namespace aevqe {

enum class ExperimentKind {
  H2Pec,
  TfimLevels,
  TfimK4,
  Magnetization,
  ScalingQubits,
  ScalingAncilla,
  OptimizerCompare,
  HyperparamScan,
  AlgoCompare,
  ShotBudget,
};

inline const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::H2Pec: return "h2-pec";
    case ExperimentKind::TfimLevels: return "tfim-levels";
    case ExperimentKind::TfimK4: return "tfim-k4";
    case ExperimentKind::Magnetization: return "magnetization";
    case ExperimentKind::ScalingQubits: return "scaling-qubits";
    case ExperimentKind::ScalingAncilla: return "scaling-ancilla";
    case ExperimentKind::OptimizerCompare: return "optimizers";
    case ExperimentKind::HyperparamScan: return "hyperparams";
    case ExperimentKind::AlgoCompare: return "algo-compare";
    case ExperimentKind::ShotBudget: return "shot-budget";
  }
  return "?";
}

inline ExperimentKind experiment_from_name(const std::string& s) {
  for (ExperimentKind k :
       {ExperimentKind::H2Pec, ExperimentKind::TfimLevels, ExperimentKind::TfimK4,
        ExperimentKind::Magnetization, ExperimentKind::ScalingQubits,
        ExperimentKind::ScalingAncilla, ExperimentKind::OptimizerCompare,
        ExperimentKind::HyperparamScan, ExperimentKind::AlgoCompare,
        ExperimentKind::ShotBudget})
    if (s == experiment_name(k)) return k;
  throw std::invalid_argument("unknown experiment: " + s);
}

/// Iteration cap used in the convergence studies, by system size.
inline int default_iteration_cap(int n_physical) {
  if (n_physical <= 3) return 200;
  if (n_physical <= 5) return 500;
  if (n_physical <= 7) return 1000;
  return 2500;
}

/// Ancilla-scaling layer policy: one variational layer up to two ancillas,
/// two layers for three (the ancilla-scaling study auto-selects this).
inline int default_layers(int n_ancilla) { return n_ancilla >= 3 ? 2 : 1; }

/// Depth used by the level-resolved studies: exact subspace floors need
/// three layers on the 3-spin chain, two suffice within tolerance at 5+.
inline int default_study_layers(int n_physical) { return n_physical <= 3 ? 3 : 2; }

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::TfimLevels;
  // model
  std::vector<double> h2_distances;  // empty => whole bundled table
  int n_spins = 3;
  double J = 1.0;
  std::vector<double> h_over_J = {0.2, 0.3, 0.4, 0.5};
  std::vector<int> sizes = {3, 5, 7};
  std::vector<int> ancillas = {1, 2, 3};
  std::vector<std::pair<int, int>> algo_cases = {{3, 1}, {3, 2}, {5, 1}};
  // solver
  Algorithm algorithm = Algorithm::AEVQE;
  int K = 2;
  int layers = 0;  // 0 = auto
  long shots = 15360;
  bool exact = false;
  bool noise_on = true;
  double p1 = 0.001, p2 = 0.01;
  int max_iterations = 0;  // 0 = per-size default
  double tol = 0.05;
  OptimizerKind optimizer = OptimizerKind::SPSA;
  double eta = 0.2, epsilon = 0.1;
  std::vector<double> eta_grid = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> epsilon_grid = {0.01, 0.05, 0.1, 0.15, 0.2};
  int ga_population = 20;
  // batch
  int trials = 20;
  std::uint64_t base_seed = 1;
  int workers = 0;  // 0 = hardware concurrency
  std::string out_dir = "out";
  long shots_per_traj = 512;
  std::string h2_table = "data/h2_coefficients.txt";

  std::optional<NoiseModel> noise() const {
    if (!noise_on) return std::nullopt;
    return NoiseModel(p1, p2);
  }
};

/// Parses `key = value` lines ('#' comments). Unknown keys are an error.
inline void apply_config_line(ExperimentConfig& cfg, const std::string& key,
                              const std::string& value) {
  auto parse_list_d = [](const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
  };
  auto parse_list_i = [](const std::string& v) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
  };
  if (key == "experiment") cfg.kind = experiment_from_name(value);
  else if (key == "cases") {  // e.g. "3:1,3:2,5:1"
    cfg.algo_cases.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto colon = item.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("config: cases entries are np:na pairs");
      cfg.algo_cases.push_back({std::stoi(item.substr(0, colon)),
                                std::stoi(item.substr(colon + 1))});
    }
  }
  else if (key == "n_spins") cfg.n_spins = std::stoi(value);
  else if (key == "J") cfg.J = std::stod(value);
  else if (key == "h_list") cfg.h_over_J = parse_list_d(value);
  else if (key == "d_list") cfg.h2_distances = parse_list_d(value);
  else if (key == "sizes") cfg.sizes = parse_list_i(value);
  else if (key == "ancillas") cfg.ancillas = parse_list_i(value);
  else if (key == "algorithm") {
    if (value == "aevqe") cfg.algorithm = Algorithm::AEVQE;
    else if (value == "wssvqe") cfg.algorithm = Algorithm::WSSVQE;
    else if (value == "mcvqe") cfg.algorithm = Algorithm::MCVQE;
    else throw std::invalid_argument("config: unknown algorithm " + value);
  } else if (key == "K") cfg.K = std::stoi(value);
  else if (key == "layers") cfg.layers = std::stoi(value);
  else if (key == "shots") {
    if (value == "exact") cfg.exact = true;
    else { cfg.exact = false; cfg.shots = std::stol(value); }
  } else if (key == "noise") cfg.noise_on = (value == "on" || value == "1" || value == "true");
  else if (key == "p1") cfg.p1 = std::stod(value);
  else if (key == "p2") cfg.p2 = std::stod(value);
  else if (key == "max_iterations") cfg.max_iterations = std::stoi(value);
  else if (key == "tol") cfg.tol = std::stod(value);
  else if (key == "optimizer") {
    if (value == "spsa") cfg.optimizer = OptimizerKind::SPSA;
    else if (value == "bgd") cfg.optimizer = OptimizerKind::BGD;
    else if (value == "powell") cfg.optimizer = OptimizerKind::Powell;
    else if (value == "ga") cfg.optimizer = OptimizerKind::GA;
    else throw std::invalid_argument("config: unknown optimizer " + value);
  } else if (key == "eta") cfg.eta = std::stod(value);
  else if (key == "epsilon") cfg.epsilon = std::stod(value);
  else if (key == "eta_list") cfg.eta_grid = parse_list_d(value);
  else if (key == "epsilon_list") cfg.epsilon_grid = parse_list_d(value);
  else if (key == "ga_population") cfg.ga_population = std::stoi(value);
  else if (key == "trials") cfg.trials = std::stoi(value);
  else if (key == "seed") cfg.base_seed = std::stoull(value);
  else if (key == "workers") cfg.workers = std::stoi(value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "shots_per_traj") cfg.shots_per_traj = std::stol(value);
  else if (key == "h2_table") cfg.h2_table = value;
  else throw std::invalid_argument("config: unknown key " + key);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const char* ws = " \t\r\n";
      s.erase(0, s.find_first_not_of(ws));
      auto last = s.find_last_not_of(ws);
      s.erase(last == std::string::npos ? 0 : last + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) apply_config_line(cfg, key, value);
  }
  return cfg;
}

inline std::string config_to_text(const ExperimentConfig& c) {
  std::ostringstream s;
  s << "experiment = " << experiment_name(c.kind) << "\n";
  s << "n_spins = " << c.n_spins << "\nJ = " << c.J << "\n";
  auto join_d = [](const std::vector<double>& v) {
    std::ostringstream o;
    for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
    return o.str();
  };
  auto join_i = [](const std::vector<int>& v) {
    std::ostringstream o;
    for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
    return o.str();
  };
  s << "h_list = " << join_d(c.h_over_J) << "\n";
  if (!c.h2_distances.empty()) s << "d_list = " << join_d(c.h2_distances) << "\n";
  s << "sizes = " << join_i(c.sizes) << "\nancillas = " << join_i(c.ancillas) << "\n";
  s << "cases = ";
  for (std::size_t i = 0; i < c.algo_cases.size(); ++i)
    s << (i ? "," : "") << c.algo_cases[i].first << ":" << c.algo_cases[i].second;
  s << "\n";
  s << "algorithm = " << algorithm_name(c.algorithm) << "\nK = " << c.K
    << "\nlayers = " << c.layers << "\n";
  s << "shots = " << (c.exact ? std::string("exact") : std::to_string(c.shots)) << "\n";
  s << "noise = " << (c.noise_on ? "on" : "off") << "\np1 = " << c.p1
    << "\np2 = " << c.p2 << "\n";
  s << "max_iterations = " << c.max_iterations << "\ntol = " << c.tol << "\n";
  s << "optimizer = " << optimizer_name(c.optimizer) << "\neta = " << c.eta
    << "\nepsilon = " << c.epsilon << "\n";
  s << "eta_list = " << join_d(c.eta_grid) << "\nepsilon_list = "
    << join_d(c.epsilon_grid) << "\n";
  s << "ga_population = " << c.ga_population << "\n";
  s << "trials = " << c.trials << "\nseed = " << c.base_seed
    << "\nworkers = " << c.workers << "\nout = " << c.out_dir << "\n";
  s << "shots_per_traj = " << c.shots_per_traj << "\nh2_table = " << c.h2_table << "\n";
  return s.str();
}

/// Deterministic parallel map: task i writes slot i, aggregation order is
/// the index order regardless of scheduling.
template <typename T>
std::vector<T> parallel_map(int count, int workers, const std::function<T(int)>& fn) {
  std::vector<T> out(count);
  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        out[i] = fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

/// Per-trial batch statistics. Only successful trials enter the mean/std;
/// failures are counted separately.
struct TrialStats {
  int success_count = 0;
  int failed_count = 0;
  double mean_iterations = std::nan("");
  double std_iterations = std::nan("");
  std::vector<int> iterations;  // successful trials, in seed order
};

inline TrialStats summarize(const std::vector<RunRecord>& records,
                            const std::function<bool(const RunRecord&)>& success =
                                [](const RunRecord& r) { return r.converged; }) {
  TrialStats st;
  for (const auto& r : records) {
    if (success(r)) {
      ++st.success_count;
      st.iterations.push_back(r.iterations_to_converge > 0 ? r.iterations_to_converge
                                                           : r.iterations);
    } else {
      ++st.failed_count;
    }
  }
  if (st.success_count > 0) {
    double mean = 0;
    for (int it : st.iterations) mean += it;
    mean /= st.success_count;
    st.mean_iterations = mean;
    if (st.success_count > 1) {
      double var = 0;
      for (int it : st.iterations) var += (it - mean) * (it - mean);
      st.std_iterations = std::sqrt(var / (st.success_count - 1));
    } else {
      st.std_iterations = 0.0;
    }
  }
  return st;
}

/// Average absolute magnetization m = (1/N) sum_s |N - 2s| P(s) with P(s)
/// the probability of finding s spins in the down (bit 1) state.
inline double magnetization(const std::map<std::string, double>& probs, int n_spins) {
  if (probs.empty()) throw std::invalid_argument("magnetization: empty distribution");
  double m = 0, total = 0;
  for (const auto& [bits, p] : probs) {
    if (static_cast<int>(bits.size()) != n_spins)
      throw std::invalid_argument("magnetization: bitstring width mismatch");
    int s = 0;
    for (char c : bits) s += (c == '1');
    m += std::abs(n_spins - 2 * s) * p;
    total += p;
  }
  if (total <= 0) throw std::invalid_argument("magnetization: zero weight");
  return m / (n_spins * total);
}

inline double magnetization(const MeasurementOutcome& counts, int n_spins) {
  if (counts.shots <= 0 || counts.counts.empty())
    throw std::invalid_argument("magnetization: empty counts");
  std::map<std::string, double> probs;
  for (const auto& [bits, c] : counts.counts)
    probs[bits] = static_cast<double>(c) / counts.shots;
  return magnetization(probs, n_spins);
}

inline double magnetization(const QuantumState& state, int n_spins) {
  if (state.n_qubits != n_spins)
    throw std::invalid_argument("magnetization: register mismatch");
  double m = 0;
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    const int s = __builtin_popcountll(i);
    m += std::abs(n_spins - 2 * s) * std::norm(state.amplitudes[i]);
  }
  return m / n_spins;
}

/// Drops the ancilla characters from counts, keeping shots whose ancilla
/// bits equal outcome m.
inline MeasurementOutcome postselect_counts(const MeasurementOutcome& full,
                                            int n_ancilla, std::uint64_t m) {
  MeasurementOutcome out;
  for (const auto& [bits, c] : full.counts) {
    std::uint64_t b = string_to_bits(bits);
    const std::uint64_t amask = (n_ancilla == 0) ? 0 : ((1ULL << n_ancilla) - 1);
    if ((b & amask) != m) continue;
    out.counts[bits.substr(n_ancilla)] += c;
    out.shots += c;
  }
  return out;
}

// ---------------------------------------------------------------------------
// output helpers

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

struct OutputTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> r) { rows.push_back(std::move(r)); }
  void write_csv(const std::string& dir) const {
    std::ofstream out(dir + "/" + name + ".csv");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << "\n";
    }
  }
};

inline nlohmann::json record_to_json(const RunRecord& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["config"] = r.config;
  j["losses"] = r.loss_trace;
  j["converged"] = r.converged;
  j["converged_by"] = r.converged_by;
  j["iterations"] = r.iterations;
  j["iterations_to_converge"] = r.iterations_to_converge;
  j["wall_seconds"] = r.wall_seconds;
  j["final_energies"] = r.final_energies;
  j["final_params"] = r.final_params;
  j["error"] = r.error;
  return j;
}

inline RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config = j.value("config", "");
  r.loss_trace = j.value("losses", std::vector<double>{});
  r.converged = j.value("converged", false);
  r.converged_by = j.value("converged_by", "none");
  r.iterations = j.value("iterations", 0);
  r.iterations_to_converge = j.value("iterations_to_converge", -1);
  r.wall_seconds = j.value("wall_seconds", 0.0);
  r.final_energies = j.value("final_energies", std::vector<double>{});
  r.final_params = j.value("final_params", std::vector<double>{});
  r.error = j.value("error", "");
  return r;
}

inline void write_records(const std::string& path, const std::vector<RunRecord>& recs) {
  std::ofstream out(path);
  for (const auto& r : recs) out << record_to_json(r).dump() << "\n";
}

inline std::vector<RunRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_records: cannot open " + path);
  std::vector<RunRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(record_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

}  // namespace aevqe
