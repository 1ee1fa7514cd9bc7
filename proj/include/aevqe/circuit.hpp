#pragma once

#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aevqe/state.hpp"

namespace aevqe {

/// Real parameter vector in radians, one entry per circuit slot.
using ParamVector = std::vector<double>;

/// Gate list over a register split into ancilla qubits 0..n_ancilla-1 and
/// physical qubits n_ancilla..n_ancilla+n_physical-1. Parameterized gates
/// reference dense slots 0..n_slots-1; bind() fills their angles.
struct Circuit {
  int n_ancilla = 0;
  int n_physical = 0;
  std::vector<Gate> gates;
  int n_slots = 0;

  Circuit() = default;
  Circuit(int na, int np) : n_ancilla(na), n_physical(np) {
    if (na < 0 || np < 0) throw std::invalid_argument("Circuit: negative register size");
  }

  int n_qubits() const { return n_ancilla + n_physical; }
  int physical_index(int p) const { return n_ancilla + p; }

  Circuit& add(Gate g) {
    for (int q : g.targets)
      if (q < 0 || q >= n_qubits())
        throw std::out_of_range("Circuit::add: target out of range");
    if (g.slot >= 0) n_slots = std::max(n_slots, g.slot + 1);
    gates.push_back(std::move(g));
    return *this;
  }

  // convenience builders (absolute qubit indices)
  Circuit& h(int q) { return add(make_gate(GateKind::H, {q})); }
  Circuit& s(int q) { return add(make_gate(GateKind::S, {q})); }
  Circuit& x(int q) { return add(make_gate(GateKind::X, {q})); }
  Circuit& y(int q) { return add(make_gate(GateKind::Y, {q})); }
  Circuit& z(int q) { return add(make_gate(GateKind::Z, {q})); }
  Circuit& cz(int a, int b) { return add(make_gate(GateKind::CZ, {a, b})); }
  Circuit& cnot(int c, int t) { return add(make_gate(GateKind::CNOT, {c, t})); }
  Circuit& rx(int q, double a) { return add(make_rotation(GateKind::RX, q, a)); }
  Circuit& ry(int q, double a) { return add(make_rotation(GateKind::RY, q, a)); }
  Circuit& rz(int q, double a) { return add(make_rotation(GateKind::RZ, q, a)); }
  Circuit& rx_slot(int q, int s) { return add(make_rotation_slot(GateKind::RX, q, s)); }
  Circuit& ry_slot(int q, int s) { return add(make_rotation_slot(GateKind::RY, q, s)); }
  Circuit& rz_slot(int q, int s) { return add(make_rotation_slot(GateKind::RZ, q, s)); }
  Circuit& unitary(std::vector<int> targets, std::vector<cplx> entries) {
    return add(make_unitary(std::move(targets), std::move(entries)));
  }

  /// Appends another circuit's gates (registers must match).
  Circuit& append(const Circuit& other) {
    if (other.n_qubits() > n_qubits())
      throw std::invalid_argument("Circuit::append: register too small");
    for (const auto& g : other.gates) {
      Gate ng = g;
      if (ng.slot >= 0) ng.slot += n_slots;  // keep slot blocks disjoint
      gates.push_back(std::move(ng));
    }
    n_slots += other.n_slots;
    return *this;
  }

  bool fully_bound() const {
    for (const auto& g : gates)
      if (g.slot >= 0 && !g.angle) return false;
    return true;
  }

  /// Slot index -> positions of the gates carrying it.
  std::vector<std::vector<int>> slot_positions() const {
    std::vector<std::vector<int>> pos(n_slots);
    for (int i = 0; i < static_cast<int>(gates.size()); ++i)
      if (gates[i].slot >= 0) pos[gates[i].slot].push_back(i);
    return pos;
  }
};

/// New circuit with every slotted gate's angle set from `params`; the
/// original is untouched and slots stay attached for rebinding.
inline Circuit bind(const Circuit& c, const ParamVector& params) {
  if (static_cast<int>(params.size()) != c.n_slots)
    throw std::invalid_argument("bind: parameter count does not match slot count");
  Circuit out = c;
  for (auto& g : out.gates)
    if (g.slot >= 0) g.angle = params[g.slot];
  return out;
}

namespace detail {
inline const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::CZ: return "cz";
    case GateKind::CNOT: return "cnot";
    case GateKind::Unitary: return "unitary";
  }
  return "?";
}
inline GateKind kind_from_name(const std::string& s) {
  if (s == "rx") return GateKind::RX;
  if (s == "ry") return GateKind::RY;
  if (s == "rz") return GateKind::RZ;
  if (s == "h") return GateKind::H;
  if (s == "s") return GateKind::S;
  if (s == "x") return GateKind::X;
  if (s == "y") return GateKind::Y;
  if (s == "z") return GateKind::Z;
  if (s == "cz") return GateKind::CZ;
  if (s == "cnot") return GateKind::CNOT;
  if (s == "unitary") return GateKind::Unitary;
  throw std::runtime_error("unknown gate kind: " + s);
}
}  // namespace detail

/// Line-based text format, one gate per line, for run-record reproducibility.
inline std::string serialize_circuit(const Circuit& c) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "circuit ancilla " << c.n_ancilla << " physical " << c.n_physical
      << " slots " << c.n_slots << "\n";
  for (const auto& g : c.gates) {
    out << detail::kind_name(g.kind);
    for (int q : g.targets) out << ' ' << q;
    if (g.slot >= 0) out << " slot " << g.slot;
    if (g.angle) out << " angle " << *g.angle;
    if (g.kind == GateKind::Unitary) {
      out << " matrix";
      for (const auto& e : g.matrix->m) out << ' ' << e.real() << ' ' << e.imag();
    }
    out << "\n";
  }
  return out.str();
}

inline Circuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("parse_circuit: empty input");
  std::istringstream head(line);
  std::string word;
  Circuit c;
  int slots = 0;
  head >> word;
  if (word != "circuit") throw std::runtime_error("parse_circuit: bad header");
  while (head >> word) {
    if (word == "ancilla") head >> c.n_ancilla;
    else if (word == "physical") head >> c.n_physical;
    else if (word == "slots") head >> slots;
  }
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind_s;
    ls >> kind_s;
    GateKind kind = detail::kind_from_name(kind_s);
    std::vector<int> targets;
    std::optional<double> angle;
    int slot = -1;
    std::vector<cplx> entries;
    std::string tok;
    while (ls >> tok) {
      if (tok == "slot") { ls >> slot; }
      else if (tok == "angle") { double a; ls >> a; angle = a; }
      else if (tok == "matrix") {
        double re, im;
        while (ls >> re >> im) entries.emplace_back(re, im);
      } else {
        targets.push_back(std::stoi(tok));
      }
    }
    Gate g;
    if (kind == GateKind::Unitary) {
      g = make_unitary(targets, std::move(entries));
    } else {
      g = make_gate(kind, targets);
      g.angle = angle;
      g.slot = slot;
    }
    c.add(std::move(g));
  }
  if (c.n_slots > slots) throw std::runtime_error("parse_circuit: slot header mismatch");
  c.n_slots = slots;
  return c;
}

}  // namespace aevqe
