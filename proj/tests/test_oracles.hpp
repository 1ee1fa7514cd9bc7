// Test-local brute-force oracles, independent of the library's operator
// algebra: dense matrices are assembled directly from gate/model
// definitions, never through PauliSum or the statevector kernels.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat pauli(char p) {
  Mat m(2, 2);
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Operator with single-qubit factors on selected qubits (little-endian:
/// qubit 0 is the least-significant bit, i.e. the rightmost kron factor).
inline Mat embed(int n, const std::vector<std::pair<int, char>>& factors) {
  Mat out = Mat::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    char p = 'I';
    for (const auto& [fq, fp] : factors)
      if (fq == q) p = fp;
    out = kron(pauli(p), out);
  }
  return out;
}

/// Open-chain transverse-field Ising matrix, built term by term.
inline Mat tfim_matrix(int n, double J, double h) {
  const int dim = 1 << n;
  Mat H = Mat::Zero(dim, dim);
  for (int i = 0; i + 1 < n; ++i)
    H += -J / 2.0 * embed(n, {{i, 'Z'}, {i + 1, 'Z'}});
  for (int i = 0; i < n; ++i) H += h * embed(n, {{i, 'X'}});
  return H;
}

inline Mat parity_matrix(int n) {
  std::vector<std::pair<int, char>> f;
  for (int i = 0; i < n; ++i) f.push_back({i, 'X'});
  return embed(n, f);
}

inline Eigen::VectorXd eigenvalues(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  return es.eigenvalues();
}

/// Energies of the classical open Ising chain (h = 0), by configuration
/// enumeration: E = -(J/2) * sum_i s_i s_{i+1}.
inline std::vector<double> classical_ising_energies(int n, double J) {
  std::vector<double> out;
  for (int cfgbits = 0; cfgbits < (1 << n); ++cfgbits) {
    double e = 0;
    for (int i = 0; i + 1 < n; ++i) {
      const int si = ((cfgbits >> i) & 1) ? -1 : 1;
      const int sj = ((cfgbits >> (i + 1)) & 1) ? -1 : 1;
      e += -J / 2.0 * si * sj;
    }
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Random normalized state from a seeded generator.
inline Vec random_state(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vec v(1 << n);
  for (int i = 0; i < v.size(); ++i) v(i) = cd(g(rng), g(rng));
  v.normalize();
  return v;
}

/// Single-qubit depolarizing channel applied to a density matrix.
inline Mat depolarize(const Mat& rho, int n, int q, double p) {
  Mat out = (1.0 - p) * rho;
  for (char c : {'X', 'Y', 'Z'}) {
    Mat P = embed(n, {{q, c}});
    out += (p / 3.0) * P * rho * P.adjoint();
  }
  return out;
}

}  // namespace oracle
