#pragma once

#include <filesystem>

#include "aevqe/experiment.hpp"

namespace aevqe {

/// One optimization trial plus the per-level follow-up measurements used by
/// the level-resolved studies.
struct TrialResult {
  RunRecord record;
  std::vector<double> raw_energies;      // re-measured on eigenstate circuits
  std::vector<double> sym_energies;      // after symmetry verification
  std::vector<double> acceptance_rates;  // Tr[P_s rho] per level
  std::vector<double> m_abs;             // ground-state magnetization (level 0)
};

namespace detail {

inline SolverConfig solver_config_from(const ExperimentConfig& c, int n_physical,
                                       int n_ancilla) {
  SolverConfig s;
  s.algorithm = c.algorithm;
  s.K = c.K;
  s.shots = c.shots;
  s.exact_expectation = c.exact;
  s.noise = c.noise();
  s.max_iterations =
      c.max_iterations > 0 ? c.max_iterations : default_iteration_cap(n_physical);
  s.convergence_tol = c.tol;
  s.optimizer = c.optimizer;
  s.spsa.eta = c.eta;
  s.spsa.epsilon = c.epsilon;
  s.ga.population = c.ga_population;
  s.shots_per_traj = c.shots_per_traj;
  (void)n_ancilla;
  return s;
}

inline Circuit ansatz_for(const ExperimentConfig& c, int n_physical, int n_ancilla) {
  const int layers = c.layers > 0 ? c.layers : default_study_layers(n_physical);
  return build_hw_efficient(n_physical, layers, n_ancilla);
}

inline std::string ensure_out_dir(const ExperimentConfig& c) {
  std::filesystem::create_directories(c.out_dir);
  return c.out_dir;
}

inline void write_manifest(const ExperimentConfig& c,
                           const std::vector<std::string>& files) {
  std::ofstream out(c.out_dir + "/manifest.txt");
  out << "aevqe-lab " << AEVQE_VERSION << "\n";
  out << "seeds = " << c.base_seed << ".." << (c.base_seed + c.trials - 1) << "\n";
  out << "files =";
  for (const auto& f : files) out << " " << f;
  out << "\n";
  out << "--- config ---\n" << config_to_text(c);
}

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

inline double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double var = 0;
  for (double x : v) var += (x - m) * (x - m);
  return std::sqrt(var / (v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace detail

/// Potential-energy-curve study: for each bundled distance, run the
/// two-level solver with the coupled-cluster ansatz; table rows carry the
/// trial-mean energies, their standard errors and the dense-oracle values.
inline OutputTable run_h2_pec(const ExperimentConfig& cfg,
                              std::vector<RunRecord>* all_records = nullptr) {
  auto table = load_h2_table(cfg.h2_table);
  std::vector<H2Coefficients> grid;
  if (cfg.h2_distances.empty()) {
    grid = table;
  } else {
    for (double d : cfg.h2_distances) {
      auto it = std::find_if(table.begin(), table.end(), [&](const H2Coefficients& r) {
        return std::abs(r.distance - d) < 1e-9;
      });
      if (it == table.end())
        throw std::invalid_argument("h2-pec: distance not in bundled table");
      grid.push_back(*it);
    }
  }
  OutputTable out;
  out.name = "h2_pec";
  out.header = {"distance", "E0_mean", "E0_stderr", "E0_exact", "E0_absdev",
                "E1_mean", "E1_stderr", "E1_exact", "E1_absdev", "converged_trials"};
  for (const auto& row : grid) {
    PauliSum H = build_h2(row);
    Eigen::VectorXd exact = dense_spectrum(H, 2);
    SolverConfig sc = detail::solver_config_from(cfg, 2, 1);
    sc.algorithm = Algorithm::AEVQE;
    sc.K = 2;
    sc.target_loss = 0.5 * (exact(0) + exact(1));
    Circuit ansatz = build_uccgsd_h2(1);
    auto results = parallel_map<TrialResult>(cfg.trials, cfg.workers, [&](int t) {
      TrialResult tr;
      try {
        auto [rec, spec] = run_solver(sc, H, ansatz, cfg.base_seed + t);
        tr.record = std::move(rec);
        if (spec.energies.size() == 2) tr.raw_energies = spec.energies;
      } catch (const std::exception& e) {
        tr.record.seed = cfg.base_seed + t;
        tr.record.error = e.what();
      }
      return tr;
    });
    std::vector<double> e0s, e1s;
    int conv = 0;
    for (const auto& tr : results) {
      if (all_records) all_records->push_back(tr.record);
      if (!tr.record.converged || tr.raw_energies.size() != 2) continue;
      ++conv;
      e0s.push_back(tr.raw_energies[0]);
      e1s.push_back(tr.raw_energies[1]);
    }
    const double e0m = detail::mean_of(e0s), e1m = detail::mean_of(e1s);
    out.add_row({detail::fmt(row.distance), detail::fmt(e0m),
                 detail::fmt(detail::stderr_of(e0s)), detail::fmt(exact(0)),
                 detail::fmt(std::abs(e0m - exact(0))), detail::fmt(e1m),
                 detail::fmt(detail::stderr_of(e1s)), detail::fmt(exact(1)),
                 detail::fmt(std::abs(e1m - exact(1))), std::to_string(conv)});
  }
  return out;
}

/// Two-level TFIM study with symmetry verification: per h/J, the
/// trial-mean raw and verified energies of both levels plus the parity
/// acceptance rates.
inline OutputTable run_tfim_levels(const ExperimentConfig& cfg,
                                   std::vector<RunRecord>* all_records = nullptr) {
  OutputTable out;
  out.name = "tfim_levels";
  out.header = {"h_over_J", "E0_raw", "E0_sym", "E0_exact", "E1_raw", "E1_sym",
                "E1_exact", "accept_E0", "accept_E1", "converged_trials"};
  const int np = cfg.n_spins;
  for (double hj : cfg.h_over_J) {
    PauliSum H = build_tfim(np, cfg.J, hj * cfg.J);
    Eigen::MatrixXcd Hm = dense_matrix(H, np);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hm);
    Eigen::VectorXd exact = es.eigenvalues();
    // sector per level from the exact eigenvector parity (for the +h field
    // convention the ground-state sector is -1 on odd chains)
    Eigen::MatrixXcd PXm = dense_matrix(parity_operator(np), np);
    std::array<int, 2> sectors{};
    for (int m = 0; m < 2; ++m) {
      const double par =
          (es.eigenvectors().col(m).adjoint() * PXm * es.eigenvectors().col(m))(0, 0)
              .real();
      sectors[m] = par >= 0 ? +1 : -1;
    }
    SolverConfig sc = detail::solver_config_from(cfg, np, 1);
    sc.algorithm = Algorithm::AEVQE;
    sc.K = 2;
    sc.target_loss = 0.5 * (exact(0) + exact(1));
    Circuit ansatz = detail::ansatz_for(cfg, np, 1);
    auto results = parallel_map<TrialResult>(cfg.trials, cfg.workers, [&](int t) {
      TrialResult tr;
      try {
        auto [rec, spec] = run_solver(sc, H, ansatz, cfg.base_seed + t);
        tr.record = rec;
        if (spec.eigenstate_circuits.size() != 2) return tr;
        Estimator est = sc.exact_expectation
                            ? Estimator::make_exact()
                            : Estimator::make_sampled(
                                  sc.shots, sc.noise,
                                  derive_seed(cfg.base_seed + t, 0x6d6561ULL));
        est.shots_per_traj = sc.shots_per_traj;
        for (int m = 0; m < 2; ++m) {
          double raw = 0;
          auto v = symmetry_verify_sampled(spec.eigenstate_circuits[m], H, sectors[m],
                                           np, est, static_cast<std::uint64_t>(m), &raw);
          tr.raw_energies.push_back(raw);
          tr.sym_energies.push_back(v.energy);
          tr.acceptance_rates.push_back(v.acceptance_rate);
        }
      } catch (const std::exception& e) {
        tr.record.seed = cfg.base_seed + t;
        tr.record.error = e.what();
      }
      return tr;
    });
    std::vector<double> raw0, raw1, sym0, sym1, acc0, acc1;
    int conv = 0;
    for (const auto& tr : results) {
      if (all_records) all_records->push_back(tr.record);
      if (tr.record.converged) ++conv;
      if (tr.raw_energies.size() != 2) continue;
      raw0.push_back(tr.raw_energies[0]);
      raw1.push_back(tr.raw_energies[1]);
      sym0.push_back(tr.sym_energies[0]);
      sym1.push_back(tr.sym_energies[1]);
      acc0.push_back(tr.acceptance_rates[0]);
      acc1.push_back(tr.acceptance_rates[1]);
    }
    out.add_row({detail::fmt(hj), detail::fmt(detail::mean_of(raw0)),
                 detail::fmt(detail::mean_of(sym0)), detail::fmt(exact(0)),
                 detail::fmt(detail::mean_of(raw1)), detail::fmt(detail::mean_of(sym1)),
                 detail::fmt(exact(1)), detail::fmt(detail::mean_of(acc0)),
                 detail::fmt(detail::mean_of(acc1)), std::to_string(conv)});
  }
  return out;
}

/// Four-level TFIM study (two ancillas): trial-mean energies, standard
/// errors and biases against the dense oracle.
inline OutputTable run_tfim_k4(const ExperimentConfig& cfg,
                               std::vector<RunRecord>* all_records = nullptr) {
  OutputTable out;
  out.name = "tfim_k4";
  out.header = {"h_over_J", "level", "E_mean", "E_stderr", "E_exact", "bias",
                "converged_trials"};
  const int np = cfg.n_spins;
  for (double hj : cfg.h_over_J) {
    PauliSum H = build_tfim(np, cfg.J, hj * cfg.J);
    Eigen::VectorXd exact = dense_spectrum(H, np);
    SolverConfig sc = detail::solver_config_from(cfg, np, 2);
    sc.algorithm = Algorithm::AEVQE;
    sc.K = 4;
    double target = 0;
    for (int i = 0; i < 4; ++i) target += exact(i);
    sc.target_loss = target / 4;
    Circuit ansatz = detail::ansatz_for(cfg, np, 2);
    auto results = parallel_map<TrialResult>(cfg.trials, cfg.workers, [&](int t) {
      TrialResult tr;
      try {
        auto [rec, spec] = run_solver(sc, H, ansatz, cfg.base_seed + t);
        tr.record = rec;
        if (spec.energies.size() == 4) tr.raw_energies = spec.energies;
      } catch (const std::exception& e) {
        tr.record.seed = cfg.base_seed + t;
        tr.record.error = e.what();
      }
      return tr;
    });
    std::vector<std::vector<double>> per_level(4);
    int conv = 0;
    for (const auto& tr : results) {
      if (all_records) all_records->push_back(tr.record);
      if (tr.record.converged) ++conv;
      if (tr.raw_energies.size() != 4) continue;
      for (int m = 0; m < 4; ++m) per_level[m].push_back(tr.raw_energies[m]);
    }
    for (int m = 0; m < 4; ++m) {
      const double em = detail::mean_of(per_level[m]);
      out.add_row({detail::fmt(hj), std::to_string(m), detail::fmt(em),
                   detail::fmt(detail::stderr_of(per_level[m])), detail::fmt(exact(m)),
                   detail::fmt(em - exact(m)), std::to_string(conv)});
    }
  }
  return out;
}

/// Ground-state order parameter versus field: exact curve from the dense
/// oracle plus the sampled value on the solver's post-selected ground
/// eigenstate.
inline OutputTable run_magnetization(const ExperimentConfig& cfg,
                                     std::vector<RunRecord>* all_records = nullptr) {
  OutputTable out;
  out.name = "magnetization";
  out.header = {"n_spins", "h_over_J", "m_abs", "m_stderr", "m_exact",
                "converged_trials"};
  for (int np : cfg.sizes) {
    for (double hj : cfg.h_over_J) {
      PauliSum H = build_tfim(np, cfg.J, hj * cfg.J);
      Eigen::MatrixXcd Hm = dense_matrix(H, np);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hm);
      QuantumState ground(np);
      for (std::uint64_t i = 0; i < ground.dim(); ++i)
        ground.amplitudes[i] = es.eigenvectors()(i, 0);
      const double m_exact = magnetization(ground, np);
      SolverConfig sc = detail::solver_config_from(cfg, np, 1);
      sc.algorithm = Algorithm::AEVQE;
      sc.K = 2;
      sc.target_loss = 0.5 * (es.eigenvalues()(0) + es.eigenvalues()(1));
      Circuit ansatz = detail::ansatz_for(cfg, np, 1);
      auto results = parallel_map<TrialResult>(cfg.trials, cfg.workers, [&](int t) {
        TrialResult tr;
        try {
          auto [rec, spec] = run_solver(sc, H, ansatz, cfg.base_seed + t);
          tr.record = rec;
          if (!rec.converged || spec.eigenstate_circuits.empty()) return tr;
          const Circuit& c0 = spec.eigenstate_circuits[0];
          if (sc.exact_expectation) {
            QuantumState s = run_circuit(c0);
            auto [phys, p] = project_qubits(s, 1ULL, 0);
            tr.m_abs.push_back(magnetization(phys, np));
          } else {
            // computational-basis counts, fresh trajectory per shot batch
            MeasurementOutcome counts;
            Circuit empty(c0.n_ancilla, c0.n_physical);
            const bool noisy = sc.noise && sc.noise->has_gate_noise();
            const long per = noisy ? sc.shots_per_traj : sc.shots;
            long done = 0;
            int traj = 0;
            while (done < sc.shots) {
              const long batch = std::min(per, sc.shots - done);
              QuantumState st(c0.n_qubits());
              auto rng = make_rng(
                  derive_seed(cfg.base_seed + t, 0x6d616731ULL, traj));
              apply_circuit(st, c0, sc.noise, rng);
              auto part = sample(st, empty, batch, sc.noise,
                                 derive_seed(cfg.base_seed + t, 0x6d616732ULL, traj));
              for (const auto& [bits, n] : part.counts) counts.counts[bits] += n;
              counts.shots += part.shots;
              done += batch;
              ++traj;
            }
            auto phys = postselect_counts(counts, c0.n_ancilla, 0);
            if (phys.shots > 0) tr.m_abs.push_back(magnetization(phys, np));
          }
        } catch (const std::exception& e) {
          tr.record.seed = cfg.base_seed + t;
          tr.record.error = e.what();
        }
        return tr;
      });
      std::vector<double> ms;
      int conv = 0;
      for (const auto& tr : results) {
        if (all_records) all_records->push_back(tr.record);
        if (tr.m_abs.empty()) continue;
        ++conv;
        ms.push_back(tr.m_abs[0]);
      }
      out.add_row({std::to_string(np), detail::fmt(hj), detail::fmt(detail::mean_of(ms)),
                   detail::fmt(detail::stderr_of(ms)), detail::fmt(m_exact),
                   std::to_string(conv)});
    }
  }
  return out;
}

/// Iteration scaling in the physical-qubit count (one ancilla).
inline OutputTable run_scaling_qubits(const ExperimentConfig& cfg,
                                      std::vector<RunRecord>* all_records = nullptr) {
  OutputTable out;
  out.name = "scaling_qubits";
  out.header = {"n_physical", "success_count", "failed_count", "mean_iterations",
                "std_iterations"};
  const double hj = cfg.h_over_J.empty() ? 0.5 : cfg.h_over_J.front();
  for (int np : cfg.sizes) {
    PauliSum H = build_tfim(np, cfg.J, hj * cfg.J);
    SolverConfig sc = detail::solver_config_from(cfg, np, 1);
    sc.algorithm = Algorithm::AEVQE;
    sc.K = 2;
    Circuit ansatz = detail::ansatz_for(cfg, np, 1);
    auto recs = parallel_map<RunRecord>(cfg.trials, cfg.workers, [&](int t) {
      try {
        return run_solver(sc, H, ansatz, cfg.base_seed + t).first;
      } catch (const std::exception& e) {
        RunRecord r;
        r.seed = cfg.base_seed + t;
        r.error = e.what();
        return r;
      }
    });
    if (all_records)
      all_records->insert(all_records->end(), recs.begin(), recs.end());
    TrialStats st = summarize(recs);
    out.add_row({std::to_string(np), std::to_string(st.success_count),
                 std::to_string(st.failed_count), detail::fmt(st.mean_iterations),
                 detail::fmt(st.std_iterations)});
  }
  return out;
}

/// Iteration scaling in the ancilla count on a fixed register; three
/// ancillas auto-select the deeper two-layer ansatz.
inline OutputTable run_scaling_ancilla(const ExperimentConfig& cfg,
                                       std::vector<RunRecord>* all_records = nullptr) {
  OutputTable out;
  out.name = "scaling_ancilla";
  out.header = {"n_ancilla", "K", "layers", "success_count", "failed_count",
                "mean_iterations", "std_iterations"};
  const double hj = cfg.h_over_J.empty() ? 0.5 : cfg.h_over_J.front();
  const int np = cfg.n_spins;
  PauliSum H = build_tfim(np, cfg.J, hj * cfg.J);
  for (int na : cfg.ancillas) {
    SolverConfig sc = detail::solver_config_from(cfg, np, na);
    sc.algorithm = Algorithm::AEVQE;
    sc.K = 1 << na;
    const int layers = cfg.layers > 0 ? cfg.layers : default_layers(na);
    Circuit ansatz = build_hw_efficient(np, layers, na);
    auto recs = parallel_map<RunRecord>(cfg.trials, cfg.workers, [&](int t) {
      try {
        return run_solver(sc, H, ansatz, cfg.base_seed + t).first;
      } catch (const std::exception& e) {
        RunRecord r;
        r.seed = cfg.base_seed + t;
        r.error = e.what();
        return r;
      }
    });
    if (all_records)
      all_records->insert(all_records->end(), recs.begin(), recs.end());
    TrialStats st = summarize(recs);
    out.add_row({std::to_string(na), std::to_string(1 << na), std::to_string(layers),
                 std::to_string(st.success_count), std::to_string(st.failed_count),
                 detail::fmt(st.mean_iterations), detail::fmt(st.std_iterations)});
  }
  return out;
}

/// Success counting across the four classical optimizers.
inline OutputTable run_optimizer_compare(const ExperimentConfig& cfg,
                                         std::vector<RunRecord>* all_records = nullptr) {
  OutputTable out;
  out.name = "optimizers";
  out.header = {"optimizer", "success_count", "failed_count", "mean_iterations",
                "std_iterations"};
  const double hj = cfg.h_over_J.empty() ? 0.5 : cfg.h_over_J.front();
  const int np = cfg.n_spins;
  PauliSum H = build_tfim(np, cfg.J, hj * cfg.J);
  Circuit ansatz = detail::ansatz_for(cfg, np, 1);
  for (OptimizerKind opt : {OptimizerKind::SPSA, OptimizerKind::BGD,
                            OptimizerKind::Powell, OptimizerKind::GA}) {
    SolverConfig sc = detail::solver_config_from(cfg, np, 1);
    sc.algorithm = Algorithm::AEVQE;
    sc.K = 2;
    sc.optimizer = opt;
    auto recs = parallel_map<RunRecord>(cfg.trials, cfg.workers, [&](int t) {
      try {
        return run_solver(sc, H, ansatz, cfg.base_seed + t).first;
      } catch (const std::exception& e) {
        RunRecord r;
        r.seed = cfg.base_seed + t;
        r.error = e.what();
        return r;
      }
    });
    if (all_records)
      all_records->insert(all_records->end(), recs.begin(), recs.end());
    TrialStats st = summarize(recs);
    out.add_row({optimizer_name(opt), std::to_string(st.success_count),
                 std::to_string(st.failed_count), detail::fmt(st.mean_iterations),
                 detail::fmt(st.std_iterations)});
  }
  return out;
}

/// SPSA hyperparameter scan: the learning-rate grid at fixed perturbation,
/// then the perturbation grid at fixed learning rate.
inline OutputTable run_hyperparam_scan(const ExperimentConfig& cfg,
                                       std::vector<RunRecord>* all_records = nullptr) {
  OutputTable out;
  out.name = "hyperparams";
  out.header = {"parameter", "value", "success_count", "failed_count",
                "mean_iterations", "std_iterations"};
  const double hj = cfg.h_over_J.empty() ? 0.5 : cfg.h_over_J.front();
  const int np = cfg.n_spins;
  PauliSum H = build_tfim(np, cfg.J, hj * cfg.J);
  Circuit ansatz = detail::ansatz_for(cfg, np, 1);
  auto run_setting = [&](double eta, double eps, const char* name, double value) {
    SolverConfig sc = detail::solver_config_from(cfg, np, 1);
    sc.algorithm = Algorithm::AEVQE;
    sc.K = 2;
    sc.optimizer = OptimizerKind::SPSA;
    sc.spsa.eta = eta;
    sc.spsa.epsilon = eps;
    auto recs = parallel_map<RunRecord>(cfg.trials, cfg.workers, [&](int t) {
      try {
        return run_solver(sc, H, ansatz, cfg.base_seed + t).first;
      } catch (const std::exception& e) {
        RunRecord r;
        r.seed = cfg.base_seed + t;
        r.error = e.what();
        return r;
      }
    });
    if (all_records)
      all_records->insert(all_records->end(), recs.begin(), recs.end());
    TrialStats st = summarize(recs);
    out.add_row({name, detail::fmt(value), std::to_string(st.success_count),
                 std::to_string(st.failed_count), detail::fmt(st.mean_iterations),
                 detail::fmt(st.std_iterations)});
  };
  for (double eta : cfg.eta_grid) run_setting(eta, cfg.epsilon, "eta", eta);
  for (double eps : cfg.epsilon_grid) run_setting(cfg.eta, eps, "epsilon", eps);
  return out;
}

/// Head-to-head iteration comparison of the three algorithms; also emits an
/// iteration histogram table.
inline std::pair<OutputTable, OutputTable> run_algo_compare(
    const ExperimentConfig& cfg, std::vector<RunRecord>* all_records = nullptr) {
  OutputTable stats;
  stats.name = "algo_compare";
  stats.header = {"n_physical", "n_ancilla", "algorithm", "success_count",
                  "failed_count", "mean_iterations", "std_iterations"};
  OutputTable hist;
  hist.name = "algo_compare_hist";
  hist.header = {"n_physical", "n_ancilla", "algorithm", "bin_lo", "bin_hi", "count"};
  const double hj = cfg.h_over_J.empty() ? 0.5 : cfg.h_over_J.front();
  for (const auto& [np, na] : cfg.algo_cases) {
    PauliSum H = build_tfim(np, cfg.J, hj * cfg.J);
    const int K = 1 << na;
    for (Algorithm algo : {Algorithm::AEVQE, Algorithm::MCVQE, Algorithm::WSSVQE}) {
      SolverConfig sc = detail::solver_config_from(cfg, np, na);
      sc.algorithm = algo;
      sc.K = K;
      const int layers = cfg.layers > 0 ? cfg.layers : default_study_layers(np);
      Circuit ansatz = build_hw_efficient(np, layers,
                                          algo == Algorithm::AEVQE ? na : 0);
      auto recs = parallel_map<RunRecord>(cfg.trials, cfg.workers, [&](int t) {
        try {
          return run_solver(sc, H, ansatz, cfg.base_seed + t).first;
        } catch (const std::exception& e) {
          RunRecord r;
          r.seed = cfg.base_seed + t;
          r.error = e.what();
          return r;
        }
      });
      if (all_records)
        all_records->insert(all_records->end(), recs.begin(), recs.end());
      TrialStats st = summarize(recs);
      stats.add_row({std::to_string(np), std::to_string(na), algorithm_name(algo),
                     std::to_string(st.success_count), std::to_string(st.failed_count),
                     detail::fmt(st.mean_iterations), detail::fmt(st.std_iterations)});
      if (!st.iterations.empty()) {
        const int bin = 10;
        std::map<int, int> bins;
        for (int it : st.iterations) bins[it / bin]++;
        for (const auto& [b, n] : bins)
          hist.add_row({std::to_string(np), std::to_string(na), algorithm_name(algo),
                        std::to_string(b * bin), std::to_string((b + 1) * bin),
                        std::to_string(n)});
      }
    }
  }
  return {stats, hist};
}

/// Shots-per-circuit tables from the allocation rule.
inline OutputTable run_shot_budget(const ExperimentConfig& cfg) {
  OutputTable out;
  out.name = "shot_budget";
  out.header = {"algorithm", "K", "M0", "circuit", "weight", "shots_per_circuit"};
  for (int K : {2, 4}) {
    auto weights = default_wssvqe_weights(K);
    auto uniform = std::vector<double>(K, 1.0 / K);
    auto ae = shot_allocation(Algorithm::AEVQE, {}, K, cfg.shots);
    out.add_row({"aevqe", std::to_string(K), std::to_string(cfg.shots), "0", "1",
                 std::to_string(ae[0])});
    auto ws = shot_allocation(Algorithm::WSSVQE, weights, K, cfg.shots);
    for (int i = 0; i < K; ++i)
      out.add_row({"wssvqe", std::to_string(K), std::to_string(cfg.shots),
                   std::to_string(i), detail::fmt(weights[i]), std::to_string(ws[i])});
    auto mc = shot_allocation(Algorithm::MCVQE, uniform, K, cfg.shots);
    for (int i = 0; i < K; ++i)
      out.add_row({"mcvqe", std::to_string(K), std::to_string(cfg.shots),
                   std::to_string(i), detail::fmt(uniform[i]), std::to_string(mc[i])});
  }
  return out;
}

/// Dispatches one experiment, writes records.jsonl, the aggregated CSV
/// table(s) and a manifest into the output directory. Per-trial crashes are
/// recorded as failed trials; the batch continues.
inline std::vector<OutputTable> run_experiment(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  std::vector<RunRecord> records;
  std::vector<OutputTable> tables;
  switch (cfg.kind) {
    case ExperimentKind::H2Pec: tables.push_back(run_h2_pec(cfg, &records)); break;
    case ExperimentKind::TfimLevels: tables.push_back(run_tfim_levels(cfg, &records)); break;
    case ExperimentKind::TfimK4: tables.push_back(run_tfim_k4(cfg, &records)); break;
    case ExperimentKind::Magnetization:
      tables.push_back(run_magnetization(cfg, &records));
      break;
    case ExperimentKind::ScalingQubits:
      tables.push_back(run_scaling_qubits(cfg, &records));
      break;
    case ExperimentKind::ScalingAncilla:
      tables.push_back(run_scaling_ancilla(cfg, &records));
      break;
    case ExperimentKind::OptimizerCompare:
      tables.push_back(run_optimizer_compare(cfg, &records));
      break;
    case ExperimentKind::HyperparamScan:
      tables.push_back(run_hyperparam_scan(cfg, &records));
      break;
    case ExperimentKind::AlgoCompare: {
      auto [a, b] = run_algo_compare(cfg, &records);
      tables.push_back(std::move(a));
      tables.push_back(std::move(b));
      break;
    }
    case ExperimentKind::ShotBudget: tables.push_back(run_shot_budget(cfg)); break;
  }
  std::vector<std::string> files;
  for (const auto& t : tables) {
    t.write_csv(cfg.out_dir);
    files.push_back(t.name + ".csv");
  }
  if (!records.empty()) {
    write_records(cfg.out_dir + "/records.jsonl", records);
    files.push_back("records.jsonl");
  }
  detail::write_manifest(cfg, files);
  return tables;
}

}  // namespace aevqe
