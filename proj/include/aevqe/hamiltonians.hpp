#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aevqe/pauli.hpp"

namespace aevqe {

/// Open-chain transverse-field Ising model,
///   H = -(J/2) * sum_i Z_i Z_{i+1} + h * sum_i X_i.
inline PauliSum build_tfim(int n_spins, double J, double h) {
  if (n_spins < 2) throw std::invalid_argument("build_tfim: need at least 2 spins");
  std::vector<PauliTerm> terms;
  for (int i = 0; i + 1 < n_spins; ++i)
    terms.push_back(PauliTerm{cplx{-J / 2.0, 0.0},
                              {{i, Pauli::Z}, {i + 1, Pauli::Z}}});
  for (int i = 0; i < n_spins; ++i)
    terms.push_back(PauliTerm{cplx{h, 0.0}, {{i, Pauli::X}}});
  return PauliSum(std::move(terms));
}

/// Coefficients of the two-qubit molecular Hamiltonian
///   H = c0 + c1*Z0 + c2*X0 + c3*Z0Z1 + c4*X0X1
/// at one H-H bond distance (angstrom / hartree).
struct H2Coefficients {
  double distance = 0.0;
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0;
};

inline PauliSum build_h2(const H2Coefficients& c) {
  if (c.distance <= 0) throw std::invalid_argument("build_h2: distance must be positive");
  std::vector<PauliTerm> terms;
  terms.push_back(PauliTerm{cplx{c.c0, 0}, {}});
  terms.push_back(PauliTerm{cplx{c.c1, 0}, {{0, Pauli::Z}}});
  terms.push_back(PauliTerm{cplx{c.c2, 0}, {{0, Pauli::X}}});
  terms.push_back(PauliTerm{cplx{c.c3, 0}, {{0, Pauli::Z}, {1, Pauli::Z}}});
  terms.push_back(PauliTerm{cplx{c.c4, 0}, {{0, Pauli::X}, {1, Pauli::X}}});
  return PauliSum(std::move(terms));
}

/// Projectors P+/- = (I +- X^{otimes n})/2 onto the global-parity sectors.
inline std::pair<PauliSum, PauliSum> parity_projectors(int n_spins) {
  if (n_spins < 1) throw std::invalid_argument("parity_projectors: need at least 1 spin");
  PauliTerm px;
  px.coefficient = cplx{0.5, 0};
  for (int i = 0; i < n_spins; ++i) px.ops[i] = Pauli::X;
  PauliSum half_px({px});
  PauliSum half_id = PauliSum::identity(cplx{0.5, 0});
  return {half_id + half_px, half_id - half_px};
}

/// X^{otimes n} itself.
inline PauliSum parity_operator(int n_spins) {
  PauliTerm px;
  for (int i = 0; i < n_spins; ++i) px.ops[i] = Pauli::X;
  return PauliSum({px});
}

/// Loads the bundled coefficient table: columns
///   distance c0 c1 c2 c3 c4
/// one row per distance, '#' comment lines. Rows keep file order.
inline std::vector<H2Coefficients> load_h2_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_h2_table: cannot open " + path);
  std::vector<H2Coefficients> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    H2Coefficients c;
    if (ss >> c.distance >> c.c0 >> c.c1 >> c.c2 >> c.c3 >> c.c4) {
      if (c.distance <= 0)
        throw std::runtime_error("load_h2_table: nonpositive distance");
      rows.push_back(c);
    }
  }
  if (rows.empty()) throw std::runtime_error("load_h2_table: no rows in " + path);
  return rows;
}

/// Companion reference file: columns `distance E0 E1`.
inline std::vector<std::array<double, 3>> load_h2_reference(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_h2_reference: cannot open " + path);
  std::vector<std::array<double, 3>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::array<double, 3> r{};
    if (ss >> r[0] >> r[1] >> r[2]) rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error("load_h2_reference: no rows in " + path);
  return rows;
}

}  // namespace aevqe
