#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "aevqe/pauli.hpp"

namespace aevqe {

/// Full statevector over n qubits; qubit 0 is the least-significant bit of
/// the basis index.
struct QuantumState {
  int n_qubits = 0;
  std::vector<cplx> amplitudes;

  QuantumState() = default;
  explicit QuantumState(int n, std::uint64_t basis = 0)
      : n_qubits(n), amplitudes(std::size_t{1} << n, cplx{0, 0}) {
    if (n < 0 || n > 30) throw std::invalid_argument("QuantumState: bad qubit count");
    if (basis >= amplitudes.size()) throw std::invalid_argument("QuantumState: bad basis index");
    amplitudes[basis] = cplx{1, 0};
  }

  std::size_t dim() const { return amplitudes.size(); }

  double norm() const {
    double s = 0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }

  /// Fidelity |<this|other>|^2.
  double fidelity(const QuantumState& other) const {
    cplx ov{0, 0};
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
      ov += std::conj(amplitudes[i]) * other.amplitudes[i];
    return std::norm(ov);
  }
};

enum class GateKind { RX, RY, RZ, H, S, X, Y, Z, CZ, CNOT, Unitary };

inline bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

/// Validated raw k-qubit matrix, shared between circuit copies.
struct UnitaryMatrix {
  int k = 0;                 // qubit count
  std::vector<cplx> m;       // row-major, dim = 2^k

  UnitaryMatrix(int k_, std::vector<cplx> entries) : k(k_), m(std::move(entries)) {
    const std::size_t d = std::size_t{1} << k;
    if (m.size() != d * d) throw std::invalid_argument("UnitaryMatrix: wrong size");
    // U U^dag = I within 1e-10
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        cplx acc{0, 0};
        for (std::size_t j = 0; j < d; ++j) acc += m[r * d + j] * std::conj(m[c * d + j]);
        const cplx want = (r == c) ? cplx{1, 0} : cplx{0, 0};
        if (std::abs(acc - want) > 1e-10)
          throw std::invalid_argument("UnitaryMatrix: matrix is not unitary");
      }
    }
  }
};

struct Gate {
  GateKind kind;
  std::vector<int> targets;
  std::optional<double> angle;  // rotation kinds only
  int slot = -1;                // parameter slot, -1 when fixed
  std::shared_ptr<const UnitaryMatrix> matrix;  // Unitary kind only

  int arity() const { return static_cast<int>(targets.size()); }
};

inline Gate make_gate(GateKind k, std::vector<int> targets) {
  return Gate{k, std::move(targets), std::nullopt, -1, nullptr};
}
inline Gate make_rotation(GateKind k, int target, double angle) {
  return Gate{k, {target}, angle, -1, nullptr};
}
inline Gate make_rotation_slot(GateKind k, int target, int slot) {
  return Gate{k, {target}, std::nullopt, slot, nullptr};
}
inline Gate make_unitary(std::vector<int> targets, std::vector<cplx> entries) {
  auto um = std::make_shared<UnitaryMatrix>(static_cast<int>(targets.size()),
                                            std::move(entries));
  return Gate{GateKind::Unitary, std::move(targets), std::nullopt, -1, um};
}

/// Per-gate depolarizing rates plus per-qubit readout confusion. p1 applies
/// after single-qubit gates, p2 after anything wider. Readout entry q is
/// (P(read 1 | true 0), P(read 0 | true 1)); empty means ideal readout.
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  std::vector<std::pair<double, double>> readout;

  NoiseModel() = default;
  NoiseModel(double p1_, double p2_) : p1(p1_), p2(p2_) { validate(); }

  void validate() const {
    auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!ok(p1) || !ok(p2)) throw std::invalid_argument("NoiseModel: rate outside [0,1]");
    for (const auto& [a, b] : readout)
      if (!ok(a) || !ok(b)) throw std::invalid_argument("NoiseModel: readout outside [0,1]");
  }
  bool has_gate_noise() const { return p1 > 0.0 || p2 > 0.0; }
  bool has_readout_noise() const {
    for (const auto& [a, b] : readout)
      if (a > 0.0 || b > 0.0) return true;
    return false;
  }
};

namespace detail {

inline void check_targets(const QuantumState& s, const Gate& g) {
  for (std::size_t i = 0; i < g.targets.size(); ++i) {
    int q = g.targets[i];
    if (q < 0 || q >= s.n_qubits)
      throw std::out_of_range("apply_gate: target qubit out of range");
    for (std::size_t j = i + 1; j < g.targets.size(); ++j)
      if (g.targets[j] == q)
        throw std::invalid_argument("apply_gate: duplicate target qubit");
  }
}

inline void apply_1q(QuantumState& s, int q, cplx u00, cplx u01, cplx u10, cplx u11) {
  const std::uint64_t mask = 1ULL << q;
  const std::uint64_t lo = mask - 1, hi = ~lo;
  const std::uint64_t half = s.dim() >> 1;
  auto* a = s.amplitudes.data();
  for (std::uint64_t i = 0; i < half; ++i) {
    const std::uint64_t i0 = ((i & hi) << 1) | (i & lo);
    const std::uint64_t i1 = i0 | mask;
    const cplx t0 = a[i0], t1 = a[i1];
    a[i0] = u00 * t0 + u01 * t1;
    a[i1] = u10 * t0 + u11 * t1;
  }
}

inline void apply_x(QuantumState& s, int q) {
  const std::uint64_t mask = 1ULL << q;
  const std::uint64_t lo = mask - 1, hi = ~lo;
  const std::uint64_t half = s.dim() >> 1;
  auto* a = s.amplitudes.data();
  for (std::uint64_t i = 0; i < half; ++i) {
    const std::uint64_t i0 = ((i & hi) << 1) | (i & lo);
    std::swap(a[i0], a[i0 | mask]);
  }
}

inline void apply_phase_on_one(QuantumState& s, int q, cplx phase) {
  const std::uint64_t mask = 1ULL << q;
  auto* a = s.amplitudes.data();
  for (std::uint64_t i = 0; i < s.dim(); ++i)
    if (i & mask) a[i] *= phase;
}

inline void apply_cz(QuantumState& s, int q0, int q1) {
  const std::uint64_t m = (1ULL << q0) | (1ULL << q1);
  auto* a = s.amplitudes.data();
  for (std::uint64_t i = 0; i < s.dim(); ++i)
    if ((i & m) == m) a[i] = -a[i];
}

inline void apply_cnot(QuantumState& s, int control, int target) {
  const std::uint64_t cm = 1ULL << control, tm = 1ULL << target;
  auto* a = s.amplitudes.data();
  for (std::uint64_t i = 0; i < s.dim(); ++i)
    if ((i & cm) && !(i & tm)) std::swap(a[i], a[i | tm]);
}

inline void apply_kq_unitary(QuantumState& s, const std::vector<int>& targets,
                             const UnitaryMatrix& u) {
  const int k = u.k;
  const std::size_t d = std::size_t{1} << k;
  std::uint64_t tmask = 0;
  for (int q : targets) tmask |= 1ULL << q;
  std::vector<cplx> in(d), out(d);
  auto* a = s.amplitudes.data();
  // Iterate base indices with all target bits clear.
  for (std::uint64_t base = 0; base < s.dim(); ++base) {
    if (base & tmask) continue;
    for (std::size_t sub = 0; sub < d; ++sub) {
      std::uint64_t idx = base;
      for (int b = 0; b < k; ++b)
        if (sub & (1ULL << b)) idx |= 1ULL << targets[b];
      in[sub] = a[idx];
    }
    for (std::size_t r = 0; r < d; ++r) {
      cplx acc{0, 0};
      for (std::size_t c = 0; c < d; ++c) acc += u.m[r * d + c] * in[c];
      out[r] = acc;
    }
    for (std::size_t sub = 0; sub < d; ++sub) {
      std::uint64_t idx = base;
      for (int b = 0; b < k; ++b)
        if (sub & (1ULL << b)) idx |= 1ULL << targets[b];
      a[idx] = out[sub];
    }
  }
}

}  // namespace detail

/// Applies one gate in place; norm is preserved.
inline void apply_gate(QuantumState& s, const Gate& g) {
  detail::check_targets(s, g);
  const double half = g.angle.value_or(0.0) / 2.0;
  const double c = std::cos(half), sn = std::sin(half);
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::RX:
      if (!g.angle) throw std::invalid_argument("apply_gate: unbound rotation");
      detail::apply_1q(s, g.targets[0], {c, 0}, {0, -sn}, {0, -sn}, {c, 0});
      break;
    case GateKind::RY:
      if (!g.angle) throw std::invalid_argument("apply_gate: unbound rotation");
      detail::apply_1q(s, g.targets[0], {c, 0}, {-sn, 0}, {sn, 0}, {c, 0});
      break;
    case GateKind::RZ:
      if (!g.angle) throw std::invalid_argument("apply_gate: unbound rotation");
      detail::apply_1q(s, g.targets[0], {c, -sn}, {0, 0}, {0, 0}, {c, sn});
      break;
    case GateKind::H:
      detail::apply_1q(s, g.targets[0], {inv_sqrt2, 0}, {inv_sqrt2, 0},
                       {inv_sqrt2, 0}, {-inv_sqrt2, 0});
      break;
    case GateKind::S:
      detail::apply_phase_on_one(s, g.targets[0], cplx{0, 1});
      break;
    case GateKind::X:
      detail::apply_x(s, g.targets[0]);
      break;
    case GateKind::Y:
      detail::apply_1q(s, g.targets[0], {0, 0}, {0, -1}, {0, 1}, {0, 0});
      break;
    case GateKind::Z:
      detail::apply_phase_on_one(s, g.targets[0], cplx{-1, 0});
      break;
    case GateKind::CZ:
      if (g.targets.size() != 2) throw std::invalid_argument("CZ needs two targets");
      detail::apply_cz(s, g.targets[0], g.targets[1]);
      break;
    case GateKind::CNOT:
      if (g.targets.size() != 2) throw std::invalid_argument("CNOT needs two targets");
      detail::apply_cnot(s, g.targets[0], g.targets[1]);
      break;
    case GateKind::Unitary:
      if (!g.matrix) throw std::invalid_argument("Unitary gate without matrix");
      detail::apply_kq_unitary(s, g.targets, *g.matrix);
      break;
  }
}

inline QuantumState apply_gate(const QuantumState& s, const Gate& g) {
  QuantumState out = s;
  apply_gate(out, g);
  return out;
}

/// Applies a uniformly random non-identity Pauli string on `targets`
/// (3 choices for one qubit, 4^k-1 for k qubits).
inline void apply_random_pauli(QuantumState& s, const std::vector<int>& targets,
                               std::mt19937_64& rng) {
  const int k = static_cast<int>(targets.size());
  const std::uint64_t n_choices = (1ULL << (2 * k)) - 1;  // 4^k - 1
  std::uniform_int_distribution<std::uint64_t> dist(1, n_choices);
  std::uint64_t code = dist(rng);
  for (int i = 0; i < k; ++i) {
    switch ((code >> (2 * i)) & 3) {
      case 1: apply_gate(s, make_gate(GateKind::X, {targets[i]})); break;
      case 2: apply_gate(s, make_gate(GateKind::Y, {targets[i]})); break;
      case 3: apply_gate(s, make_gate(GateKind::Z, {targets[i]})); break;
      default: break;
    }
  }
}

/// One depolarizing Kraus-trajectory step after a gate.
inline void maybe_insert_noise(QuantumState& s, const Gate& g, const NoiseModel& noise,
                               std::mt19937_64& rng) {
  const double p = (g.arity() == 1) ? noise.p1 : noise.p2;
  if (p <= 0.0) return;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (u01(rng) < p) apply_random_pauli(s, g.targets, rng);
}

/// <state|P|state> for a single Pauli string (coefficient excluded).
inline cplx pauli_string_expectation(const QuantumState& s, const PauliTerm& t) {
  if (t.max_qubit() >= s.n_qubits)
    throw std::invalid_argument("expectation: operator exceeds register");
  const std::uint64_t flip = t.x_mask() | t.y_mask();
  const std::uint64_t sign_mask = t.z_mask() | t.y_mask();
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx yphase = ipow[__builtin_popcountll(t.y_mask()) & 3];
  cplx acc{0, 0};
  const auto* a = s.amplitudes.data();
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    const double sgn = (__builtin_popcountll(i & sign_mask) & 1) ? -1.0 : 1.0;
    acc += std::conj(a[i ^ flip]) * (sgn * a[i]);
  }
  return yphase * acc;
}

/// <state|obs|state> without any hermiticity requirement.
inline cplx expectation_complex(const QuantumState& s, const PauliSum& obs) {
  cplx acc{0, 0};
  for (const auto& t : obs.terms())
    acc += t.coefficient * pauli_string_expectation(s, t);
  return acc;
}

/// <state|obs|state> for a Hermitian observable; imaginary residue below
/// 1e-9 is discarded.
inline double expectation(const QuantumState& s, const PauliSum& obs) {
  if (!obs.is_hermitian())
    throw std::invalid_argument("expectation: observable is not Hermitian");
  cplx v = expectation_complex(s, obs);
  if (std::abs(v.imag()) > 1e-9)
    throw std::logic_error("expectation: imaginary residue above tolerance");
  return v.real();
}

/// Keeps the sub-register where the ancilla bits (mask) equal `outcome`,
/// renormalized. Returns the physical-register state plus the probability
/// of that outcome.
inline std::pair<QuantumState, double> project_qubits(const QuantumState& s,
                                                      std::uint64_t mask,
                                                      std::uint64_t outcome) {
  const int n_kept = s.n_qubits - __builtin_popcountll(mask);
  QuantumState out(n_kept);
  out.amplitudes.assign(out.dim(), cplx{0, 0});
  double p = 0.0;
  std::size_t j = 0;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    if ((i & mask) != outcome) continue;
    out.amplitudes[j] = s.amplitudes[i];
    p += std::norm(s.amplitudes[i]);
    ++j;
  }
  if (p > 0) {
    const double inv = 1.0 / std::sqrt(p);
    for (auto& a : out.amplitudes) a *= inv;
  }
  return {out, p};
}

/// Reduced density matrix of the qubits selected by `mask` (ascending order).
inline Eigen::MatrixXcd reduced_density(const QuantumState& s, std::uint64_t mask) {
  std::vector<int> kept;
  for (int q = 0; q < s.n_qubits; ++q)
    if (mask & (1ULL << q)) kept.push_back(q);
  const int k = static_cast<int>(kept.size());
  const std::size_t dk = std::size_t{1} << k;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
  auto sub_of = [&](std::uint64_t i) {
    std::uint64_t sub = 0;
    for (int b = 0; b < k; ++b)
      if (i & (1ULL << kept[b])) sub |= 1ULL << b;
    return sub;
  };
  // group by the complement bits
  std::uint64_t comp_mask = ((s.n_qubits == 64) ? ~0ULL : ((1ULL << s.n_qubits) - 1)) & ~mask;
  for (std::uint64_t i = 0; i < s.dim(); ++i) {
    for (std::uint64_t j = 0; j < s.dim(); ++j) {
      if ((i & comp_mask) != (j & comp_mask)) continue;
      rho(sub_of(i), sub_of(j)) += s.amplitudes[i] * std::conj(s.amplitudes[j]);
    }
  }
  return rho;
}

}  // namespace aevqe
