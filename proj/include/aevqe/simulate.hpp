#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aevqe/circuit.hpp"
#include "aevqe/rng.hpp"
#include "aevqe/state.hpp"

namespace aevqe {

/// Counts keyed by bitstring; character position i holds qubit i.
struct MeasurementOutcome {
  std::map<std::string, long> counts;
  long shots = 0;
};

inline std::string bits_to_string(std::uint64_t bits, int n_qubits) {
  std::string s(n_qubits, '0');
  for (int q = 0; q < n_qubits; ++q)
    if (bits & (1ULL << q)) s[q] = '1';
  return s;
}

inline std::uint64_t string_to_bits(const std::string& s) {
  std::uint64_t b = 0;
  for (std::size_t q = 0; q < s.size(); ++q)
    if (s[q] == '1') b |= 1ULL << q;
  return b;
}

/// Applies a bound circuit in place. In noisy mode this is one Kraus
/// trajectory: after each gate a random Pauli is inserted on the gate's
/// targets with probability p1 (one target) or p2 (wider).
inline void apply_circuit(QuantumState& s, const Circuit& c,
                          const std::optional<NoiseModel>& noise,
                          std::mt19937_64& rng) {
  if (!c.fully_bound())
    throw std::invalid_argument("apply_circuit: circuit has unbound parameters");
  const bool noisy = noise && noise->has_gate_noise();
  for (const auto& g : c.gates) {
    apply_gate(s, g);
    if (noisy) maybe_insert_noise(s, g, *noise, rng);
  }
}

/// Runs a bound circuit from |0...0>.
inline QuantumState run_circuit(const Circuit& c,
                                const std::optional<NoiseModel>& noise = std::nullopt,
                                std::uint64_t rng_seed = 0) {
  QuantumState s(c.n_qubits());
  auto rng = make_rng(derive_seed(rng_seed, 0x7261ULL));
  apply_circuit(s, c, noise, rng);
  return s;
}

namespace detail {

inline void build_cdf(const QuantumState& s, std::vector<double>& cdf) {
  cdf.resize(s.dim());
  double acc = 0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    acc += std::norm(s.amplitudes[i]);
    cdf[i] = acc;
  }
}

inline std::uint64_t draw_index(const std::vector<double>& cdf, double total,
                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, total);
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u(rng));
  if (it == cdf.end()) --it;
  return static_cast<std::uint64_t>(it - cdf.begin());
}

/// Flips measured bits according to the per-qubit confusion parameters,
/// restricted to the qubits in `mask`.
inline std::uint64_t apply_readout_flips(std::uint64_t bits, std::uint64_t mask,
                                         const NoiseModel& noise,
                                         std::mt19937_64& rng) {
  if (noise.readout.empty()) return bits;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t q = 0; q < noise.readout.size(); ++q) {
    if (!(mask & (1ULL << q))) continue;
    const auto& [p10, p01] = noise.readout[q];
    const bool one = bits & (1ULL << q);
    const double pflip = one ? p01 : p10;
    if (pflip > 0.0 && u(rng) < pflip) bits ^= 1ULL << q;
  }
  return bits;
}

}  // namespace detail

/// Applies the basis-change rotations, then samples computational-basis
/// bitstrings from |amplitude|^2; readout flips applied per qubit.
inline MeasurementOutcome sample(const QuantumState& state, const Circuit& basis_rotations,
                                 long shots,
                                 const std::optional<NoiseModel>& noise = std::nullopt,
                                 std::uint64_t rng_seed = 0) {
  if (shots <= 0) throw std::invalid_argument("sample: shots must be positive");
  QuantumState s = state;
  auto rng = make_rng(derive_seed(rng_seed, 0x73616dULL));
  apply_circuit(s, basis_rotations, noise, rng);
  std::vector<double> cdf;
  detail::build_cdf(s, cdf);
  const double total = cdf.back();
  const std::uint64_t all = (s.n_qubits == 64) ? ~0ULL : ((1ULL << s.n_qubits) - 1);
  std::map<std::uint64_t, long> raw;
  for (long k = 0; k < shots; ++k) {
    std::uint64_t bits = detail::draw_index(cdf, total, rng);
    if (noise && noise->has_readout_noise())
      bits = detail::apply_readout_flips(bits, all, *noise, rng);
    ++raw[bits];
  }
  MeasurementOutcome out;
  out.shots = shots;
  for (const auto& [bits, n] : raw) out.counts[bits_to_string(bits, s.n_qubits)] = n;
  return out;
}

/// Basis-change circuit for a Pauli string: H for X factors, S^dag then H
/// for Y factors (S^dag realized as RZ(-pi/2); fixed convention repo-wide).
inline Circuit basis_rotations_for(const PauliTerm& t, int n_ancilla, int n_physical) {
  Circuit rot(n_ancilla, n_physical);
  for (const auto& [q, p] : t.ops) {
    if (p == Pauli::X) {
      rot.h(q);
    } else if (p == Pauli::Y) {
      rot.rz(q, -M_PI / 2.0);
      rot.h(q);
    }
  }
  return rot;
}

struct TermEstimate {
  double mean = 0.0;  // estimated <P>
  long kept = 0;      // shots surviving post-selection
  long total = 0;
};

/// Sampled estimate of <P> for one Pauli string after running `prep`.
/// When `postselect_mask` is nonzero, only shots whose measured bits match
/// `postselect_value` on the mask contribute. Noisy mode draws fresh Kraus
/// trajectories every `shots_per_traj` shots.
inline TermEstimate sampled_term_mean(const Circuit& prep, const PauliTerm& term,
                                      long shots,
                                      const std::optional<NoiseModel>& noise,
                                      std::uint64_t seed, long shots_per_traj = 512,
                                      std::uint64_t postselect_mask = 0,
                                      std::uint64_t postselect_value = 0) {
  if (shots <= 0) throw std::invalid_argument("sampled_term_mean: shots must be positive");
  const std::uint64_t support = term.support_mask();
  if (support & postselect_mask)
    throw std::invalid_argument("sampled_term_mean: term overlaps post-selected qubits");
  Circuit rot = basis_rotations_for(term, prep.n_ancilla, prep.n_physical);
  const bool gate_noise = noise && noise->has_gate_noise();
  const bool read_noise = noise && noise->has_readout_noise();
  const long per_traj = gate_noise ? std::max<long>(1, shots_per_traj) : shots;
  const std::uint64_t look = support | postselect_mask;

  TermEstimate est;
  est.total = shots;
  double parity_sum = 0.0;
  std::vector<double> cdf;
  long done = 0;
  int traj = 0;
  while (done < shots) {
    const long batch = std::min(per_traj, shots - done);
    auto rng = make_rng(derive_seed(seed, 0x74726aULL, static_cast<std::uint64_t>(traj)));
    QuantumState s(prep.n_qubits());
    apply_circuit(s, prep, noise, rng);
    apply_circuit(s, rot, noise, rng);
    detail::build_cdf(s, cdf);
    const double total = cdf.back();
    for (long k = 0; k < batch; ++k) {
      std::uint64_t bits = detail::draw_index(cdf, total, rng);
      if (read_noise) bits = detail::apply_readout_flips(bits, look, *noise, rng);
      if ((bits & postselect_mask) != postselect_value) continue;
      ++est.kept;
      parity_sum += (__builtin_popcountll(bits & support) & 1) ? -1.0 : 1.0;
    }
    done += batch;
    ++traj;
  }
  est.mean = (est.kept > 0) ? parity_sum / static_cast<double>(est.kept) : 0.0;
  return est;
}

/// Coefficient-weighted sum of per-term sampled parity means; requires a
/// Hermitian observable. Identity terms contribute their coefficient
/// exactly. Per-term sub-seeds come from (seed, term index).
inline double estimate_expectation_sampled(const Circuit& prep, const PauliSum& obs,
                                           long shots_per_term,
                                           const std::optional<NoiseModel>& noise = std::nullopt,
                                           std::uint64_t seed = 0,
                                           long shots_per_traj = 512) {
  if (!obs.is_hermitian())
    throw std::invalid_argument("estimate_expectation_sampled: observable not Hermitian");
  double acc = 0.0;
  int idx = 0;
  for (const auto& t : obs.terms()) {
    if (t.is_identity()) {
      acc += t.coefficient.real();
    } else {
      auto e = sampled_term_mean(prep, t, shots_per_term, noise,
                                 derive_seed(seed, 0x7465726dULL, idx), shots_per_traj);
      acc += t.coefficient.real() * e.mean;
    }
    ++idx;
  }
  return acc;
}

/// Same term-by-term machinery for complex coefficients (each Pauli string
/// itself is Hermitian; the assembled value may be complex).
inline cplx estimate_expectation_sampled_complex(const Circuit& prep, const PauliSum& obs,
                                                 long shots_per_term,
                                                 const std::optional<NoiseModel>& noise,
                                                 std::uint64_t seed,
                                                 long shots_per_traj = 512) {
  cplx acc{0, 0};
  int idx = 0;
  for (const auto& t : obs.terms()) {
    if (t.is_identity()) {
      acc += t.coefficient;
    } else {
      auto e = sampled_term_mean(prep, t, shots_per_term, noise,
                                 derive_seed(seed, 0x7465726dULL, idx), shots_per_traj);
      acc += t.coefficient * e.mean;
    }
    ++idx;
  }
  return acc;
}

/// Expectation estimator shared by all solver paths. Exact mode evaluates
/// the noiseless statevector expectation; sampled mode draws seeded shots
/// (and trajectories when gate noise is on). Each call advances an internal
/// counter so repeated evaluations are independent yet reproducible.
class Estimator {
 public:
  bool exact = true;
  long shots = 15360;
  std::optional<NoiseModel> noise;
  long shots_per_traj = 512;

  Estimator() = default;
  static Estimator make_exact() { return Estimator{}; }
  static Estimator make_sampled(long shots_, std::optional<NoiseModel> noise_,
                                std::uint64_t seed) {
    Estimator e;
    e.exact = false;
    e.shots = shots_;
    e.noise = std::move(noise_);
    e.seed_ = seed;
    return e;
  }

  void reseed(std::uint64_t seed) {
    seed_ = seed;
    counter_ = 0;
  }
  std::uint64_t next_call_seed() const {
    return derive_seed(seed_, 0x63616cULL, counter_++);
  }

  /// <obs> on the state prepared by `prep`; obs given in full-register
  /// qubit indices.
  double value(const Circuit& prep, const PauliSum& obs) const {
    return value(prep, obs, shots);
  }
  double value(const Circuit& prep, const PauliSum& obs, long shots_override) const {
    if (exact) return expectation(run_circuit(prep), obs);
    return estimate_expectation_sampled(prep, obs, shots_override, noise,
                                        next_call_seed(), shots_per_traj);
  }
  cplx value_complex(const Circuit& prep, const PauliSum& obs) const {
    if (exact) return expectation_complex(run_circuit(prep), obs);
    return estimate_expectation_sampled_complex(prep, obs, shots, noise,
                                                next_call_seed(), shots_per_traj);
  }

  struct PostSelected {
    double value = 0.0;
    double acceptance = 0.0;  // fraction of shots (or norm) surviving
  };

  /// <obs> on the physical register after post-selecting the ancilla
  /// outcome m; obs given in physical-local indices (0..n_physical-1).
  PostSelected value_postselected(const Circuit& prep, const PauliSum& obs,
                                  std::uint64_t outcome_m) const {
    const int na = prep.n_ancilla;
    const std::uint64_t amask = (na == 0) ? 0 : ((1ULL << na) - 1);
    if (exact) {
      QuantumState s = run_circuit(prep);
      auto [phys, p] = project_qubits(s, amask, outcome_m);
      PostSelected r;
      r.acceptance = p;
      r.value = (p > 0) ? expectation(phys, obs) : 0.0;
      return r;
    }
    if (!obs.is_hermitian())
      throw std::invalid_argument("value_postselected: observable not Hermitian");
    const std::uint64_t call_seed = next_call_seed();
    PauliSum embedded = obs.shifted(na);
    double acc = 0.0;
    long kept = 0, total = 0;
    int idx = 0;
    for (const auto& t : embedded.terms()) {
      if (t.is_identity()) {
        acc += t.coefficient.real();
      } else {
        auto e = sampled_term_mean(prep, t, shots, noise,
                                   derive_seed(call_seed, 0x706f73ULL, idx),
                                   shots_per_traj, amask, outcome_m);
        acc += t.coefficient.real() * e.mean;
        kept += e.kept;
        total += e.total;
      }
      ++idx;
    }
    if (total == 0) {  // constant observable: one plain round for acceptance
      auto e = sampled_term_mean(prep, PauliTerm{cplx{1, 0}, {{na, Pauli::Z}}}, shots,
                                 noise, derive_seed(call_seed, 0x706f73ULL, idx),
                                 shots_per_traj, amask, outcome_m);
      kept = e.kept;
      total = e.total;
    }
    PostSelected r;
    r.acceptance = (total > 0) ? static_cast<double>(kept) / total : 0.0;
    r.value = acc;
    return r;
  }

 private:
  std::uint64_t seed_ = 0;
  mutable std::uint64_t counter_ = 0;
};

}  // namespace aevqe
