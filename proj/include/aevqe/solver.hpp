#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "aevqe/ansatz.hpp"
#include "aevqe/optimize.hpp"
#include "aevqe/simulate.hpp"

namespace aevqe {

enum class Algorithm { AEVQE, WSSVQE, MCVQE };

enum class OptimizerKind { SPSA, BGD, Powell, GA };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::AEVQE: return "aevqe";
    case Algorithm::WSSVQE: return "wssvqe";
    case Algorithm::MCVQE: return "mcvqe";
  }
  return "?";
}
inline const char* optimizer_name(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::SPSA: return "spsa";
    case OptimizerKind::BGD: return "bgd";
    case OptimizerKind::Powell: return "powell";
    case OptimizerKind::GA: return "ga";
  }
  return "?";
}

/// Default strictly decreasing weights w_i = (K-i)/sum_j(K-j).
inline std::vector<double> default_wssvqe_weights(int K) {
  std::vector<double> w(K);
  double total = 0;
  for (int i = 0; i < K; ++i) total += K - i;
  for (int i = 0; i < K; ++i) w[i] = (K - i) / total;
  return w;
}

struct SolverConfig {
  Algorithm algorithm = Algorithm::AEVQE;
  int K = 2;                     // target level count; AEVQE requires K = 2^{N_a}
  std::vector<double> weights;   // WSSVQE only; default decreasing when empty
  long shots = 15360;            // shots per estimate (M0)
  bool exact_expectation = false;
  std::optional<NoiseModel> noise;
  int max_iterations = 200;
  double convergence_tol = 0.05;        // problem energy units
  std::optional<double> target_loss;    // exact optimal loss; computed when absent
  OptimizerKind optimizer = OptimizerKind::SPSA;
  SpsaConfig spsa{};
  double bgd_learning_rate = 0.05;
  double powell_tol = 1e-10;
  GaConfig ga{};
  int stagnation_window = 30;    // fallback when no oracle target exists
  double stagnation_rel = 1e-4;
  std::optional<ParamVector> initial_params;
  long shots_per_traj = 512;

  void validate(int n_ancilla) const {
    if (K < 1) throw std::invalid_argument("SolverConfig: K must be >= 1");
    if ((K & (K - 1)) != 0) throw std::invalid_argument("SolverConfig: K must be a power of two");
    if (algorithm == Algorithm::AEVQE && K != (1 << n_ancilla))
      throw std::invalid_argument("SolverConfig: AEVQE requires K = 2^{N_a}");
    if (algorithm == Algorithm::WSSVQE && !weights.empty()) {
      if (static_cast<int>(weights.size()) != K)
        throw std::invalid_argument("SolverConfig: weight count != K");
      for (int i = 0; i < K; ++i) {
        if (weights[i] <= 0)
          throw std::invalid_argument("SolverConfig: weights must be positive");
        if (i > 0 && weights[i] >= weights[i - 1])
          throw std::invalid_argument("SolverConfig: weights must be strictly decreasing");
      }
    }
  }
};

/// K x K matrix of H over the optimized variational subspace. `entries` are
/// as measured; `k_rescale` carries the factor that diagonalize_subspace
/// applies to express eigenvalues in energy units.
struct SubspaceHamiltonian {
  Eigen::MatrixXcd entries;
  int k_rescale = 1;
};

struct SpectrumResult {
  std::vector<double> energies;         // ascending, length K
  Eigen::MatrixXcd transform;           // unitary T with H_sub = T^dag D T
  std::vector<Circuit> eigenstate_circuits;
  // AEVQE circuits prepare |E_m> on the physical register after
  // post-selecting ancilla outcome m; baseline circuits prepare it directly.
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::string config = "";       // snapshot (key=value block)
  std::vector<double> loss_trace;
  bool converged = false;
  std::string converged_by = "none";  // "oracle" | "stagnation" | "none"
  int iterations = 0;            // iterations consumed
  int iterations_to_converge = -1;
  double wall_seconds = 0.0;
  std::vector<double> final_energies;
  ParamVector final_params;
  std::string error;
};

/// Loss of the ancilla-entangled solver: expectation of I_a (x) H on the
/// state of the bound circuit, identically (1/K) sum_m <psi_m|U^dag H U|psi_m>.
/// H is given in physical-local indices and must fit the physical register.
inline double aevqe_loss(const Circuit& circuit, const PauliSum& h_physical,
                         const Estimator& est) {
  if (h_physical.max_qubit() >= circuit.n_physical)
    throw std::invalid_argument("aevqe_loss: observable leaves the physical register");
  return est.value(circuit, h_physical.shifted(circuit.n_ancilla));
}

/// Weighted subspace-search loss: sum_i w_i <psi_i|U^dag H U|psi_i> with the
/// K orthogonal initial states produced by `preps` (shared parameters live in
/// `bound_ansatz`). `per_circuit_shots` overrides the estimator's budget per
/// circuit; empty means the estimator default.
inline double ssvqe_loss(const Circuit& bound_ansatz, const std::vector<Circuit>& preps,
                         const PauliSum& h_physical, const std::vector<double>& weights,
                         const Estimator& est,
                         const std::vector<long>& per_circuit_shots = {}) {
  if (weights.size() != preps.size())
    throw std::invalid_argument("ssvqe_loss: weight/circuit count mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < preps.size(); ++i) {
    Circuit c = preps[i];
    c.append(bound_ansatz);
    const long shots = per_circuit_shots.empty() ? est.shots : per_circuit_shots[i];
    acc += weights[i] * est.value(c, h_physical, shots);
  }
  return acc;
}

/// Ancilla observable for H_sub[m,n]: the product over ancilla bits of
/// (I +- Z)/2 for equal bits and (X +- iY)/2 for differing bits.
inline PauliSum ancilla_projector_observable(std::uint64_t m, std::uint64_t n,
                                             int n_ancilla) {
  PauliSum obs = PauliSum::identity();
  for (int b = 0; b < n_ancilla; ++b) {
    const int mb = (m >> b) & 1, nb = (n >> b) & 1;
    PauliSum factor;
    if (mb == 0 && nb == 0) {
      factor = PauliSum::identity({0.5, 0}) + PauliSum::single({0.5, 0}, b, Pauli::Z);
    } else if (mb == 1 && nb == 1) {
      factor = PauliSum::identity({0.5, 0}) - PauliSum::single({0.5, 0}, b, Pauli::Z);
    } else if (mb == 0 && nb == 1) {  // |0><1| = (X + iY)/2
      factor = PauliSum::single({0.5, 0}, b, Pauli::X) +
               PauliSum::single({0, 0.5}, b, Pauli::Y);
    } else {  // |1><0| = (X - iY)/2
      factor = PauliSum::single({0.5, 0}, b, Pauli::X) +
               PauliSum::single({0, -0.5}, b, Pauli::Y);
    }
    obs = obs * factor;
  }
  return obs;
}

/// Measures H_sub[m,n] = <Psi|(|m><n|_a (x) H)|Psi> for every entry, one
/// independent estimate each, then symmetrizes to exactly Hermitian via
/// (M + M^dag)/2. Entries carry a 1/K normalization from the entangled
/// state, recorded in k_rescale for diagonalize_subspace.
inline SubspaceHamiltonian measure_subspace_hamiltonian(const Circuit& opt_circuit,
                                                        const PauliSum& h_physical,
                                                        int K, const Estimator& est) {
  const int na = opt_circuit.n_ancilla;
  if (K != (1 << na))
    throw std::invalid_argument("measure_subspace_hamiltonian: K != 2^{N_a}");
  const PauliSum h_emb = h_physical.shifted(na);
  Eigen::MatrixXcd M(K, K);
  for (int m = 0; m < K; ++m) {
    for (int n = 0; n < K; ++n) {
      PauliSum obs = ancilla_projector_observable(m, n, na) * h_emb;
      M(m, n) = est.value_complex(opt_circuit, obs);
    }
  }
  SubspaceHamiltonian out;
  out.entries = 0.5 * (M + M.adjoint().eval());
  out.k_rescale = K;
  return out;
}

namespace detail {

/// Phase-fix eigenvector columns: largest-magnitude component becomes real
/// positive.
inline void fix_column_phases(Eigen::MatrixXcd& V) {
  for (Eigen::Index c = 0; c < V.cols(); ++c) {
    Eigen::Index imax = 0;
    double best = -1;
    for (Eigen::Index r = 0; r < V.rows(); ++r) {
      if (std::abs(V(r, c)) > best + 1e-15) {
        best = std::abs(V(r, c));
        imax = r;
      }
    }
    const cplx v = V(imax, c);
    if (std::abs(v) > 0) V.col(c) *= std::conj(v) / std::abs(v);
  }
}

/// Unitary completion with first column equal to v (assumed normalized).
inline Eigen::MatrixXcd unitary_from_first_column(const Eigen::VectorXcd& v) {
  const Eigen::Index d = v.size();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(d, d);
  A.col(0) = v;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  Eigen::MatrixXcd Q = qr.householderQ();
  // align Q's first column with v exactly (QR fixes it up to phase)
  cplx phase = v.dot(Q.col(0));  // <v, q0>
  if (std::abs(phase) > 0) Q.col(0) *= std::conj(phase) / std::abs(phase);
  // re-orthogonalize the remainder against the pinned first column
  Q.col(0) = v;
  for (Eigen::Index c = 1; c < d; ++c) {
    for (Eigen::Index p = 0; p < c; ++p)
      Q.col(c) -= Q.col(p) * (Q.col(p).adjoint() * Q.col(c))(0, 0);
    Q.col(c) /= Q.col(c).norm();
  }
  return Q;
}

inline std::vector<cplx> to_row_major(const Eigen::MatrixXcd& m) {
  std::vector<cplx> out(static_cast<std::size_t>(m.rows() * m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
  return out;
}

}  // namespace detail

/// Diagonalizes a Hermitian-symmetrized subspace Hamiltonian. Eigenvalues
/// are rescaled by k_rescale and sorted ascending; T maps the eigenbasis to
/// the computational basis (H_sub = T^dag D T) with each eigenvector's
/// largest component made real positive.
///
/// When `opt_circuit` is provided (ancilla-entangled pipeline), eigenstate
/// circuit m appends the element-wise conjugate of T on the ancilla
/// register; post-selecting ancilla outcome m then leaves |E_m> on the
/// physical register. (The conjugate, not T itself, is what the entangled
/// index requires; see the repo notes.)
inline SpectrumResult diagonalize_subspace(const SubspaceHamiltonian& hsub,
                                           const Circuit* opt_circuit = nullptr) {
  const Eigen::MatrixXcd& M = hsub.entries;
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw std::invalid_argument("diagonalize_subspace: matrix not Hermitian");
  Eigen::MatrixXcd H = static_cast<double>(hsub.k_rescale) * 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  Eigen::MatrixXcd V = es.eigenvectors();  // ascending eigenvalues
  detail::fix_column_phases(V);
  SpectrumResult out;
  out.energies.assign(es.eigenvalues().data(),
                      es.eigenvalues().data() + es.eigenvalues().size());
  out.transform = V.adjoint();
  if (opt_circuit) {
    const int na = opt_circuit->n_ancilla;
    std::vector<int> ancilla_targets(na);
    for (int i = 0; i < na; ++i) ancilla_targets[i] = i;
    Eigen::MatrixXcd A = out.transform.conjugate();
    Circuit c = *opt_circuit;
    c.unitary(ancilla_targets, detail::to_row_major(A));
    out.eigenstate_circuits.assign(out.energies.size(), c);
  }
  return out;
}

/// Subspace matrix for the contracted baseline: diagonal entries from the
/// K basis circuits, off-diagonals from interference states
/// (|m> + e^{i phi}|n>)/sqrt(2) with phi in {0, pi} for the real part and
/// {-pi/2, +pi/2} for the imaginary part:
///   Re z = (A_0 - A_pi)/2,  Im z = (A_{-pi/2} - A_{+pi/2})/2.
inline SubspaceHamiltonian mcvqe_subspace(const Circuit& bound_ansatz,
                                          const PauliSum& h_physical, int K,
                                          const Estimator& est,
                                          const std::vector<long>& per_circuit_shots = {}) {
  const int n_pivot = static_cast<int>(std::round(std::log2(K)));
  if ((1 << n_pivot) != K) throw std::invalid_argument("mcvqe_subspace: K not a power of 2");
  const int np = bound_ansatz.n_physical;
  auto shots_for = [&](int i) {
    return per_circuit_shots.empty() ? est.shots : per_circuit_shots[i % per_circuit_shots.size()];
  };
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(K, K);
  for (int m = 0; m < K; ++m) {
    Circuit c = basis_state_prep(n_pivot, np, m);
    c.append(bound_ansatz);
    M(m, m) = est.value(c, h_physical, shots_for(m));
  }
  for (int m = 0; m < K; ++m) {
    for (int n = m + 1; n < K; ++n) {
      auto measure_phase = [&](double phi) {
        auto prep = interference_state_prep(n_pivot, np, m, n, phi);
        Circuit c = prep.circuit;
        c.append(bound_ansatz);
        return est.value(c, h_physical, shots_for(m));
      };
      const double a0 = measure_phase(0.0);
      const double api = measure_phase(M_PI);
      const double am = measure_phase(-M_PI / 2.0);
      const double ap = measure_phase(M_PI / 2.0);
      const cplx z{0.5 * (a0 - api), 0.5 * (am - ap)};
      M(m, n) = z;
      M(n, m) = std::conj(z);
    }
  }
  SubspaceHamiltonian out;
  out.entries = 0.5 * (M + M.adjoint().eval());
  out.k_rescale = 1;
  return out;
}

/// Shots per circuit per loss evaluation, targeting equal combined variance:
/// one circuit of M0 for the ancilla-entangled solver, w_i^2*K*M0 for the
/// weighted baseline, M0/K (ceil) for the contracted baseline.
inline std::vector<long> shot_allocation(Algorithm algorithm,
                                         const std::vector<double>& weights, int K,
                                         long M0) {
  if (M0 <= 0) throw std::invalid_argument("shot_allocation: M0 must be positive");
  switch (algorithm) {
    case Algorithm::AEVQE:
      return {M0};
    case Algorithm::WSSVQE: {
      if (static_cast<int>(weights.size()) != K)
        throw std::invalid_argument("shot_allocation: weight count != K");
      std::vector<long> out(K);
      for (int i = 0; i < K; ++i) {
        if (weights[i] <= 0.0)
          throw std::invalid_argument("shot_allocation: zero weight");
        out[i] = std::llround(weights[i] * weights[i] * K * static_cast<double>(M0));
        out[i] = std::max<long>(out[i], 1);
      }
      return out;
    }
    case Algorithm::MCVQE: {
      const long per = (M0 + K - 1) / K;
      return std::vector<long>(K, per);
    }
  }
  throw std::logic_error("shot_allocation: bad algorithm");
}

/// Exact optimal loss for the configured algorithm from the dense spectrum.
inline double exact_target_loss(const PauliSum& h_physical, int n_physical,
                                Algorithm algorithm, int K,
                                const std::vector<double>& weights) {
  Eigen::VectorXd ev = dense_spectrum(h_physical, n_physical);
  if (algorithm == Algorithm::WSSVQE) {
    double t = 0;
    for (int i = 0; i < K; ++i) t += weights[i] * ev(i);
    return t;
  }
  double t = 0;
  for (int i = 0; i < K; ++i) t += ev(i);
  return t / K;
}

namespace detail {

inline std::string config_snapshot(const SolverConfig& cfg, int n_physical,
                                   int n_ancilla) {
  std::ostringstream s;
  s << "algorithm=" << algorithm_name(cfg.algorithm) << " K=" << cfg.K
    << " n_physical=" << n_physical << " n_ancilla=" << n_ancilla
    << " shots=" << (cfg.exact_expectation ? std::string("exact")
                                           : std::to_string(cfg.shots))
    << " noise=" << (cfg.noise && cfg.noise->has_gate_noise() ? "on" : "off")
    << " optimizer=" << optimizer_name(cfg.optimizer)
    << " eta=" << cfg.spsa.eta << " epsilon=" << cfg.spsa.epsilon
    << " max_iterations=" << cfg.max_iterations
    << " tol=" << cfg.convergence_tol;
  return s.str();
}

}  // namespace detail

/// Full optimize-then-diagonalize pipeline for one trial. The ansatz is the
/// unbound variational block; for the ancilla-entangled algorithm its
/// register must carry log2(K) ancilla qubits, otherwise none. Optimizer
/// failures surface in the record, not as exceptions; the spectrum is
/// produced from the final parameters regardless of the convergence flag.
inline std::pair<RunRecord, SpectrumResult> run_solver(const SolverConfig& cfg,
                                                       const PauliSum& h_physical,
                                                       const Circuit& ansatz,
                                                       std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const int np = ansatz.n_physical;
  const int na = ansatz.n_ancilla;
  cfg.validate(na);
  if (h_physical.max_qubit() >= np)
    throw std::invalid_argument("run_solver: Hamiltonian exceeds physical register");
  const int K = cfg.K;
  const int n_pivot = static_cast<int>(std::round(std::log2(K)));
  std::vector<double> weights = cfg.weights;
  if (cfg.algorithm == Algorithm::WSSVQE && weights.empty())
    weights = default_wssvqe_weights(K);

  RunRecord rec;
  rec.seed = seed;
  rec.config = detail::config_snapshot(cfg, np, na);

  Estimator est = cfg.exact_expectation
                      ? Estimator::make_exact()
                      : Estimator::make_sampled(cfg.shots, cfg.noise,
                                                derive_seed(seed, 0x657374ULL));
  est.shots_per_traj = cfg.shots_per_traj;

  // loss closure
  std::vector<long> alloc = shot_allocation(
      cfg.algorithm,
      cfg.algorithm == Algorithm::WSSVQE ? weights : std::vector<double>(K, 1.0 / K), K,
      cfg.shots);
  Circuit full;  // AEVQE circuit: initializer + ansatz
  std::vector<Circuit> preps;
  if (cfg.algorithm == Algorithm::AEVQE) {
    if (na > 0) {
      full = build_initializer(na, np);
      full.append(ansatz);
    } else {
      full = ansatz;  // K = 1: plain VQE
    }
  } else {
    if (na != 0) throw std::invalid_argument("run_solver: baselines take no ancilla");
    for (int m = 0; m < K; ++m) preps.push_back(basis_state_prep(n_pivot, np, m));
  }
  std::vector<double> uniform(K, 1.0 / K);
  LossFn loss = [&](const ParamVector& theta) {
    switch (cfg.algorithm) {
      case Algorithm::AEVQE:
        return aevqe_loss(aevqe::bind(full, theta), h_physical, est);
      case Algorithm::WSSVQE:
        return ssvqe_loss(aevqe::bind(ansatz, theta), preps, h_physical, weights, est, alloc);
      case Algorithm::MCVQE:
        return ssvqe_loss(aevqe::bind(ansatz, theta), preps, h_physical, uniform, est, alloc);
    }
    return 0.0;
  };

  double target = 0.0;
  bool have_target = true;
  if (cfg.target_loss) {
    target = *cfg.target_loss;
  } else if (np <= 12) {
    target = exact_target_loss(h_physical, np,
                               cfg.algorithm == Algorithm::MCVQE ? Algorithm::AEVQE
                                                                 : cfg.algorithm,
                               K, weights);
  } else {
    have_target = false;
  }

  int converged_at = -1;
  std::string converged_by = "none";
  std::vector<double> window;
  StopFn stop = [&](int iter, double l, const ParamVector&) {
    if (have_target && std::abs(l - target) < cfg.convergence_tol) {
      converged_at = iter;
      converged_by = "oracle";
      return true;
    }
    if (!have_target) {
      window.push_back(l);
      const int w = cfg.stagnation_window;
      if (static_cast<int>(window.size()) > w) {
        const double then = window[window.size() - 1 - w];
        if (std::abs(l - then) < cfg.stagnation_rel * (std::abs(then) + 1e-12)) {
          converged_at = iter;
          converged_by = "stagnation";
          return true;
        }
      }
    }
    return false;
  };

  ParamVector theta0 = cfg.initial_params
                           ? *cfg.initial_params
                           : random_params(ansatz.n_slots, derive_seed(seed, 0x696e69ULL));
  OptimizerTrace trace;
  try {
    switch (cfg.optimizer) {
      case OptimizerKind::SPSA: {
        SpsaConfig sc = cfg.spsa;
        sc.max_iter = cfg.max_iterations;
        trace = spsa_minimize(theta0, loss, sc, derive_seed(seed, 0x6f7074ULL), stop);
        break;
      }
      case OptimizerKind::BGD:
        trace = bgd_minimize(theta0, loss, cfg.bgd_learning_rate, cfg.max_iterations, stop);
        break;
      case OptimizerKind::Powell:
        trace = powell_minimize(theta0, loss, cfg.max_iterations, cfg.powell_tol, stop);
        break;
      case OptimizerKind::GA: {
        GaConfig gc = cfg.ga;
        gc.generations = std::max(1, cfg.max_iterations);
        trace = ga_minimize(static_cast<int>(theta0.size()), loss, gc,
                            derive_seed(seed, 0x6f7074ULL), stop);
        break;
      }
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }

  rec.loss_trace = trace.losses;
  rec.iterations = static_cast<int>(trace.losses.size());
  rec.converged = converged_at >= 0;
  rec.converged_by = converged_by;
  rec.iterations_to_converge = rec.converged ? converged_at + 1 : -1;
  rec.final_params = trace.params.empty() ? theta0 : trace.params.back();

  // Diagonalization stage from the final parameters.
  SpectrumResult spec;
  try {
    Circuit bound_ansatz = aevqe::bind(ansatz, rec.final_params);
    switch (cfg.algorithm) {
      case Algorithm::AEVQE: {
        Circuit bound_full = aevqe::bind(full, rec.final_params);
        if (na > 0) {
          auto hsub = measure_subspace_hamiltonian(bound_full, h_physical, K, est);
          spec = diagonalize_subspace(hsub, &bound_full);
        } else {
          SpectrumResult s1;
          s1.energies = {est.value(bound_full, h_physical)};
          s1.transform = Eigen::MatrixXcd::Identity(1, 1);
          s1.eigenstate_circuits = {bound_full};
          spec = std::move(s1);
        }
        break;
      }
      case Algorithm::MCVQE: {
        auto hsub = mcvqe_subspace(bound_ansatz, h_physical, K, est, alloc);
        spec = diagonalize_subspace(hsub);
        // eigenstate m: rotate |0..0> into column m of V = T^dag on the
        // pivot qubits, then run the optimized circuit.
        Eigen::MatrixXcd V = spec.transform.adjoint();
        std::vector<int> pivots(n_pivot);
        for (int i = 0; i < n_pivot; ++i) pivots[i] = i;
        for (int m = 0; m < K; ++m) {
          Circuit c(0, np);
          Eigen::MatrixXcd Q = detail::unitary_from_first_column(V.col(m));
          c.unitary(pivots, detail::to_row_major(Q));
          c.append(bound_ansatz);
          spec.eigenstate_circuits.push_back(std::move(c));
        }
        break;
      }
      case Algorithm::WSSVQE: {
        std::vector<std::pair<double, int>> diag(K);
        for (int m = 0; m < K; ++m) {
          Circuit c = preps[m];
          c.append(bound_ansatz);
          diag[m] = {est.value(c, h_physical, cfg.shots), m};
        }
        std::sort(diag.begin(), diag.end());
        SpectrumResult s;
        s.transform = Eigen::MatrixXcd::Identity(K, K);
        for (const auto& [e, m] : diag) {
          s.energies.push_back(e);
          Circuit c = preps[m];
          c.append(bound_ansatz);
          s.eigenstate_circuits.push_back(std::move(c));
        }
        spec = std::move(s);
        break;
      }
    }
  } catch (const std::exception& e) {
    if (rec.error.empty()) rec.error = e.what();
  }
  rec.final_energies = spec.energies;
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {rec, spec};
}

}  // namespace aevqe
