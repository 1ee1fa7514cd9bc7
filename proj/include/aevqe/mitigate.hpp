#pragma once

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aevqe/hamiltonians.hpp"
#include "aevqe/simulate.hpp"

namespace aevqe {

/// Per-qubit 2x2 confusion matrices, columns indexed by the true state:
///   C = [[P(read 0|true 0), P(read 0|true 1)],
///        [P(read 1|true 0), P(read 1|true 1)]].
struct ReadoutCalibration {
  // per qubit: {p10, p01} with p10 = P(read 1|true 0), p01 = P(read 0|true 1)
  std::vector<std::pair<double, double>> flips;

  int n_qubits() const { return static_cast<int>(flips.size()); }

  static ReadoutCalibration identity(int n) {
    ReadoutCalibration c;
    c.flips.assign(n, {0.0, 0.0});
    return c;
  }
  static ReadoutCalibration uniform(int n, double p10, double p01) {
    ReadoutCalibration c;
    c.flips.assign(n, {p10, p01});
    return c;
  }
  static ReadoutCalibration from_noise(const NoiseModel& noise, int n) {
    ReadoutCalibration c;
    c.flips.assign(n, {0.0, 0.0});
    for (int q = 0; q < n && q < static_cast<int>(noise.readout.size()); ++q)
      c.flips[q] = noise.readout[q];
    return c;
  }
  /// Plain-text rows: `qubit p10 p01`, '#' comments.
  static ReadoutCalibration from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ReadoutCalibration: cannot open " + path);
    std::map<int, std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      int q;
      double p10, p01;
      if (ss >> q >> p10 >> p01) rows[q] = {p10, p01};
    }
    if (rows.empty()) throw std::runtime_error("ReadoutCalibration: no rows");
    ReadoutCalibration c;
    c.flips.assign(rows.rbegin()->first + 1, {0.0, 0.0});
    for (const auto& [q, f] : rows) c.flips[q] = f;
    return c;
  }

  void validate() const {
    for (const auto& [p10, p01] : flips) {
      if (p10 < 0 || p10 > 1 || p01 < 0 || p01 > 1)
        throw std::invalid_argument("ReadoutCalibration: probability outside [0,1]");
      if (p10 + p01 >= 1.0)
        throw std::invalid_argument(
            "ReadoutCalibration: singular confusion matrix (p10 + p01 >= 1)");
    }
  }
};

/// Pushes an exact distribution through the readout noise map (test oracle
/// for the inversion).
inline std::vector<double> apply_confusion(const std::vector<double>& probs,
                                           const ReadoutCalibration& cal) {
  const int n = cal.n_qubits();
  if (probs.size() != (std::size_t{1} << n))
    throw std::invalid_argument("apply_confusion: size mismatch");
  std::vector<double> p = probs;
  for (int q = 0; q < n; ++q) {
    const auto& [p10, p01] = cal.flips[q];
    const std::uint64_t mask = 1ULL << q;
    for (std::uint64_t i = 0; i < p.size(); ++i) {
      if (i & mask) continue;
      const double a = p[i], b = p[i | mask];  // true 0, true 1
      p[i] = (1 - p10) * a + p01 * b;
      p[i | mask] = p10 * a + (1 - p01) * b;
    }
  }
  return p;
}

/// Applies the inverse of the tensor-product confusion map along each bit
/// axis, clips negatives to zero and renormalizes. Input and output are
/// dense little-endian distributions of length 2^n.
inline std::vector<double> mitigate_probabilities(const std::vector<double>& probs,
                                                  const ReadoutCalibration& cal) {
  cal.validate();
  const int n = cal.n_qubits();
  if (probs.size() != (std::size_t{1} << n))
    throw std::invalid_argument("mitigate_probabilities: size mismatch");
  std::vector<double> p = probs;
  for (int q = 0; q < n; ++q) {
    const auto& [p10, p01] = cal.flips[q];
    const double det = 1.0 - p10 - p01;  // det of [[1-p10, p01],[p10, 1-p01]]
    const std::uint64_t mask = 1ULL << q;
    for (std::uint64_t i = 0; i < p.size(); ++i) {
      if (i & mask) continue;
      const double a = p[i], b = p[i | mask];
      p[i] = ((1 - p01) * a - p01 * b) / det;
      p[i | mask] = (-p10 * a + (1 - p10) * b) / det;
    }
  }
  double total = 0;
  for (auto& x : p) {
    if (x < 0) x = 0;
    total += x;
  }
  if (total > 0)
    for (auto& x : p) x /= total;
  return p;
}

/// Counts-map front end; returns the mitigated quasi-probability map over
/// the observed register.
inline std::map<std::string, double> mitigate_counts(const MeasurementOutcome& raw,
                                                     const ReadoutCalibration& cal) {
  if (raw.shots <= 0) throw std::invalid_argument("mitigate_counts: empty outcome");
  const int n = cal.n_qubits();
  std::vector<double> p(std::size_t{1} << n, 0.0);
  for (const auto& [bits, c] : raw.counts) {
    if (static_cast<int>(bits.size()) != n)
      throw std::invalid_argument("mitigate_counts: bitstring width mismatch");
    p[string_to_bits(bits)] += static_cast<double>(c) / raw.shots;
  }
  auto q = mitigate_probabilities(p, cal);
  std::map<std::string, double> out;
  for (std::uint64_t i = 0; i < q.size(); ++i)
    if (q[i] > 0) out[bits_to_string(i, n)] = q[i];
  return out;
}

/// Energy after projecting onto one global-parity sector.
struct VerifiedEstimate {
  double energy = 0.0;
  double acceptance_rate = 0.0;  // Tr[P_s rho], in (0, 1]
  int sector = +1;
};

inline void check_parity_symmetry(const PauliSum& h, int n_spins) {
  PauliSum px = parity_operator(n_spins);
  PauliSum comm = h * px - px * h;
  if (!comm.empty())
    throw std::invalid_argument("symmetry_verify: H does not commute with the parity operator");
}

/// Assembles E_s = (<H> + s*<H Px>)/(1 + s*<Px>) and the acceptance rate
/// (1 + s*<Px>)/2 from the three expectation estimates; exact for
/// [H, Px] = 0.
inline VerifiedEstimate symmetry_verify_from_estimates(double h, double h_px, double px,
                                                       int sector) {
  if (sector != 1 && sector != -1)
    throw std::invalid_argument("symmetry_verify: sector must be +-1");
  VerifiedEstimate v;
  v.sector = sector;
  v.acceptance_rate = 0.5 * (1.0 + sector * px);
  if (v.acceptance_rate < 1e-6)
    throw std::runtime_error("symmetry_verify: sector essentially unpopulated");
  v.energy = (h + sector * h_px) / (1.0 + sector * px);
  return v;
}

/// Exact route on a (pure) physical-register state.
inline VerifiedEstimate symmetry_verify(const QuantumState& state, const PauliSum& h,
                                        int sector, int n_spins) {
  check_parity_symmetry(h, n_spins);
  PauliSum px = parity_operator(n_spins);
  const double eh = expectation(state, h);
  const double ehp = expectation(state, h * px);
  const double ep = expectation(state, px);
  return symmetry_verify_from_estimates(eh, ehp, ep, sector);
}

/// Sampled route: joint estimation of <H>, <H Px> and <Px> on the state
/// prepared by `prep`, post-selected on ancilla outcome m when the circuit
/// carries ancillas. Returns the verified estimate plus the raw <H> through
/// the out-parameter.
inline VerifiedEstimate symmetry_verify_sampled(const Circuit& prep, const PauliSum& h,
                                                int sector, int n_spins,
                                                const Estimator& est,
                                                std::uint64_t outcome_m,
                                                double* raw_energy = nullptr) {
  check_parity_symmetry(h, n_spins);
  PauliSum px = parity_operator(n_spins);
  const auto eh = est.value_postselected(prep, h, outcome_m);
  const auto ehp = est.value_postselected(prep, h * px, outcome_m);
  const auto ep = est.value_postselected(prep, px, outcome_m);
  if (raw_energy) *raw_energy = eh.value;
  return symmetry_verify_from_estimates(eh.value, ehp.value, ep.value, sector);
}

}  // namespace aevqe
