#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aevqe/circuit.hpp"
#include "aevqe/rng.hpp"

namespace aevqe {

/// Entangled initializer: each ancilla-physical pair (a_i, p_i) is driven
/// into the Bell pair (|00> + |11>)/sqrt(2) with single-qubit gates plus one
/// CZ (H a_i; H p_i; CZ; H p_i), so post-selecting the ancilla outcome m
/// leaves the computational pattern |m> on the paired physical qubits.
/// Remaining physical qubits stay in |0>. The ancilla marginal is I/K with
/// K = 2^n_ancilla.
inline Circuit build_initializer(int n_ancilla, int n_physical) {
  if (n_ancilla < 1 || n_ancilla > n_physical)
    throw std::invalid_argument("build_initializer: need 1 <= n_ancilla <= n_physical");
  Circuit c(n_ancilla, n_physical);
  for (int i = 0; i < n_ancilla; ++i) {
    const int a = i;
    const int p = c.physical_index(i);
    c.h(a);
    c.h(p);
    c.cz(a, p);
    c.h(p);
  }
  return c;
}

/// Hardware-efficient variational block on the physical register: per layer
/// one RY and one RZ slot on every physical qubit, then an entangler ladder
/// over neighboring physical pairs. Slot count is 2 * n_physical * layers.
/// The ladder uses CNOTs (a CZ dressed with fixed Ry(+-pi/2) rotations);
/// a bare-CZ ladder leaves the low-lying TFIM subspaces unreachable at any
/// practical depth.
inline Circuit build_hw_efficient(int n_physical, int layers, int n_ancilla = 0) {
  if (layers < 1) throw std::invalid_argument("build_hw_efficient: layers >= 1");
  Circuit c(n_ancilla, n_physical);
  int slot = 0;
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < n_physical; ++q) {
      c.ry_slot(c.physical_index(q), slot++);
      c.rz_slot(c.physical_index(q), slot++);
    }
    for (int q = 0; q + 1 < n_physical; ++q)
      c.cnot(c.physical_index(q), c.physical_index(q + 1));
  }
  return c;
}

/// Generalized coupled-cluster style two-qubit ansatz: three RX/RZ rotation
/// blocks separated by one CZ entangler each, 12 slots. With all slots at
/// zero the rotations are identity and the CZ gates act trivially on the
/// |q1=0> initialization subspace.
inline Circuit build_uccgsd_h2(int n_ancilla = 0) {
  Circuit c(n_ancilla, 2);
  const int p0 = c.physical_index(0), p1 = c.physical_index(1);
  int slot = 0;
  for (int block = 0; block < 3; ++block) {
    for (int q : {p0, p1}) {
      c.rx_slot(q, slot++);
      c.rz_slot(q, slot++);
    }
    if (block < 2) c.cz(p0, p1);
  }
  return c;
}

/// Random initial parameters, uniform in [-pi, pi) per slot.
inline ParamVector random_params(int n_slots, std::uint64_t seed) {
  auto rng = make_rng(derive_seed(seed, 0x706172ULL));
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  ParamVector p(n_slots);
  for (auto& x : p) x = u(rng);
  return p;
}

/// Computational-basis preparation |m> on the first n_ancilla physical
/// qubits (the pivot pattern shared with the initializer's post-selected
/// states); other physical qubits stay |0>. Used by the ancilla-free
/// baselines, registers carry no ancilla.
inline Circuit basis_state_prep(int n_pivot, int n_physical, std::uint64_t m) {
  if (n_pivot < 0 || n_pivot > n_physical)
    throw std::invalid_argument("basis_state_prep: bad pivot count");
  if (m >= (1ULL << n_pivot))
    throw std::invalid_argument("basis_state_prep: outcome out of range");
  Circuit c(0, n_physical);
  for (int b = 0; b < n_pivot; ++b)
    if (m & (1ULL << b)) c.x(b);
  return c;
}

/// Prepares (|m> + e^{i phi} |n>)/sqrt(2) over the pivot qubits, phi in
/// {0, pi, +-pi/2}: shared 1-bits via X, one superposition H on the lowest
/// differing bit, CNOT fan-out to the other differing bits, then a phase
/// gate on the pivot branch. Returns the circuit and the phase actually
/// applied to the |n> component (the pivot branch may hold |m>).
struct InterferencePrep {
  Circuit circuit;
  double phase_on_n = 0.0;  // e^{i phase_on_n} multiplies the |n> component
};

inline InterferencePrep interference_state_prep(int n_pivot, int n_physical,
                                                std::uint64_t m, std::uint64_t n,
                                                double phase) {
  if (m == n) throw std::invalid_argument("interference_state_prep: m == n");
  if (m >= (1ULL << n_pivot) || n >= (1ULL << n_pivot))
    throw std::invalid_argument("interference_state_prep: outcome out of range");
  Circuit c(0, n_physical);
  const std::uint64_t diff = m ^ n;
  const std::uint64_t shared_ones = m & n;
  for (int b = 0; b < n_pivot; ++b)
    if (shared_ones & (1ULL << b)) c.x(b);
  int pivot = __builtin_ctzll(diff);
  c.h(pivot);
  for (int b = pivot + 1; b < n_pivot; ++b)
    if (diff & (1ULL << b)) c.cnot(pivot, b);
  // branch pivot=1 currently holds the pattern with every differing bit 1
  // and pivot=0 the pattern with every differing bit 0; X-correct bits where
  // both target patterns disagree with that assignment.
  const bool m_has_pivot = (m >> pivot) & 1;
  const std::uint64_t one_branch = m_has_pivot ? m : n;
  for (int b = 0; b < n_pivot; ++b) {
    if (!(diff & (1ULL << b))) continue;
    if (b == pivot) continue;
    if (!((one_branch >> b) & 1)) {
      // this differing bit should be 0 on the pivot=1 branch: flip both
      c.x(b);
    }
  }
  // phase e^{i phi} on the |n> component
  double branch_phase = m_has_pivot ? -phase : phase;  // pivot=1 branch phase
  // realize diag(1, e^{i branch_phase}) on the pivot (global phase dropped)
  if (std::abs(branch_phase) > 1e-15) {
    const double two_pi = 2.0 * M_PI;
    double ph = std::fmod(branch_phase, two_pi);
    if (std::abs(ph - M_PI) < 1e-12 || std::abs(ph + M_PI) < 1e-12) {
      c.z(pivot);
    } else {
      c.rz(pivot, ph);  // equals diag(1, e^{i ph}) up to global phase
    }
  }
  InterferencePrep out;
  out.circuit = std::move(c);
  out.phase_on_n = phase;
  return out;
}

}  // namespace aevqe
