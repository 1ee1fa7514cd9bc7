#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace aevqe {

using cplx = std::complex<double>;

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

/// One Pauli string with a complex coefficient. Qubits absent from `ops`
/// carry the identity.
struct PauliTerm {
  cplx coefficient{1.0, 0.0};
  std::map<int, Pauli> ops;  // qubit index -> letter, ordered by qubit

  PauliTerm() = default;
  PauliTerm(cplx c, std::map<int, Pauli> o) : coefficient(c), ops(std::move(o)) {}

  bool is_identity() const { return ops.empty(); }

  int max_qubit() const { return ops.empty() ? -1 : ops.rbegin()->first; }

  // Bit masks over the term's support, for fast statevector kernels.
  std::uint64_t x_mask() const { return mask_of(Pauli::X); }
  std::uint64_t y_mask() const { return mask_of(Pauli::Y); }
  std::uint64_t z_mask() const { return mask_of(Pauli::Z); }
  std::uint64_t support_mask() const {
    std::uint64_t m = 0;
    for (const auto& [q, p] : ops) m |= (1ULL << q);
    return m;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [q, p] : ops) {
      if (!s.empty()) s += ' ';
      s += static_cast<char>(p);
      s += std::to_string(q);
    }
    return s.empty() ? "I" : s;
  }

 private:
  std::uint64_t mask_of(Pauli which) const {
    std::uint64_t m = 0;
    for (const auto& [q, p] : ops)
      if (p == which) m |= (1ULL << q);
    return m;
  }
};

namespace detail {
// Single-qubit product table: a*b = phase * c, with identity encoded as 0.
// Letters: 0=I, 1=X, 2=Y, 3=Z.
inline int pauli_code(Pauli p) {
  switch (p) {
    case Pauli::X: return 1;
    case Pauli::Y: return 2;
    case Pauli::Z: return 3;
  }
  return 0;
}
inline Pauli pauli_from_code(int c) {
  return c == 1 ? Pauli::X : (c == 2 ? Pauli::Y : Pauli::Z);
}
inline void pauli_mul(int a, int b, int& out, cplx& phase) {
  static const cplx one{1, 0}, i{0, 1}, mi{0, -1};
  if (a == 0) { out = b; phase = one; return; }
  if (b == 0) { out = a; phase = one; return; }
  if (a == b) { out = 0; phase = one; return; }
  // XY=iZ, YZ=iX, ZX=iY and the reversed order picks up -i.
  if (a == 1 && b == 2) { out = 3; phase = i; return; }
  if (a == 2 && b == 3) { out = 1; phase = i; return; }
  if (a == 3 && b == 1) { out = 2; phase = i; return; }
  if (a == 2 && b == 1) { out = 3; phase = mi; return; }
  if (a == 3 && b == 2) { out = 1; phase = mi; return; }
  if (a == 1 && b == 3) { out = 2; phase = mi; return; }
  throw std::logic_error("pauli_mul: bad codes");
}
}  // namespace detail

/// Canonicalized sum of Pauli strings. Terms are kept merged, ordered by
/// their operator maps, with coefficients below 1e-12 dropped.
class PauliSum {
 public:
  static constexpr double kDropTol = 1e-12;

  PauliSum() = default;
  explicit PauliSum(std::vector<PauliTerm> terms) { assign(std::move(terms)); }

  static PauliSum identity(cplx coeff = cplx{1, 0}) {
    PauliSum s;
    if (std::abs(coeff) >= kDropTol) s.terms_.push_back(PauliTerm{coeff, {}});
    return s;
  }
  static PauliSum single(cplx coeff, int qubit, Pauli p) {
    return PauliSum({PauliTerm{coeff, {{qubit, p}}}});
  }

  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  int max_qubit() const {
    int m = -1;
    for (const auto& t : terms_) m = std::max(m, t.max_qubit());
    return m;
  }

  bool is_hermitian(double tol = 1e-9) const {
    for (const auto& t : terms_)
      if (std::abs(t.coefficient.imag()) > tol) return false;
    return true;
  }

  PauliSum& operator+=(const PauliSum& other) {
    std::vector<PauliTerm> all = terms_;
    all.insert(all.end(), other.terms_.begin(), other.terms_.end());
    assign(std::move(all));
    return *this;
  }
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }

  PauliSum& operator*=(cplx scale) {
    for (auto& t : terms_) t.coefficient *= scale;
    prune();
    return *this;
  }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
  friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) {
    PauliSum nb = b;
    nb *= cplx{-1, 0};
    return a += nb;
  }

  /// Operator product, with the full single-qubit phase bookkeeping.
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
    std::vector<PauliTerm> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        PauliTerm t;
        t.coefficient = ta.coefficient * tb.coefficient;
        t.ops = ta.ops;
        for (const auto& [q, p] : tb.ops) {
          auto it = t.ops.find(q);
          int left = (it == t.ops.end()) ? 0 : detail::pauli_code(it->second);
          int code;
          cplx phase;
          detail::pauli_mul(left, detail::pauli_code(p), code, phase);
          t.coefficient *= phase;
          if (code == 0) {
            if (it != t.ops.end()) t.ops.erase(it);
          } else {
            t.ops[q] = detail::pauli_from_code(code);
          }
        }
        out.push_back(std::move(t));
      }
    }
    return PauliSum(std::move(out));
  }

  /// Same operator on a register shifted up by `offset` qubits.
  PauliSum shifted(int offset) const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      PauliTerm nt;
      nt.coefficient = t.coefficient;
      for (const auto& [q, p] : t.ops) nt.ops[q + offset] = p;
      out.push_back(std::move(nt));
    }
    return PauliSum(std::move(out));
  }

  std::string to_string() const {
    std::string s;
    for (const auto& t : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + std::to_string(t.coefficient.real()) + "," +
           std::to_string(t.coefficient.imag()) + ") " + t.to_string();
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::vector<PauliTerm> terms_;

  void assign(std::vector<PauliTerm> raw) {
    std::map<std::map<int, Pauli>, cplx> merged;
    for (auto& t : raw) merged[t.ops] += t.coefficient;
    terms_.clear();
    for (auto& [ops, c] : merged) {
      if (std::abs(c) >= kDropTol) terms_.push_back(PauliTerm{c, ops});
    }
  }
  void prune() {
    std::vector<PauliTerm> keep;
    for (auto& t : terms_)
      if (std::abs(t.coefficient) >= kDropTol) keep.push_back(std::move(t));
    terms_ = std::move(keep);
  }
};

/// Dense 2^n x 2^n matrix of a Pauli sum; the brute-force oracle backing
/// the reference checks.
inline Eigen::MatrixXcd dense_matrix(const PauliSum& obs, int n_qubits) {
  if (n_qubits < 0 || n_qubits > 14)
    throw std::invalid_argument("dense_matrix: qubit count out of range");
  if (obs.max_qubit() >= n_qubits)
    throw std::invalid_argument("dense_matrix: operator exceeds register");
  const std::int64_t dim = 1LL << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : obs.terms()) {
    const std::uint64_t xm = t.x_mask(), ym = t.y_mask(), zm = t.z_mask();
    const std::uint64_t flip = xm | ym;
    const int ny = __builtin_popcountll(ym);
    static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::int64_t col = 0; col < dim; ++col) {
      // P|col> = phase * |col ^ flip>
      const int sign_bits =
          __builtin_popcountll(static_cast<std::uint64_t>(col) & (zm | ym));
      cplx phase = ipow[ny & 3] * ((sign_bits & 1) ? -1.0 : 1.0);
      m(col ^ static_cast<std::int64_t>(flip), col) += t.coefficient * phase;
    }
  }
  return m;
}

/// Ascending eigenvalues of a Hermitian Pauli sum on n qubits.
inline Eigen::VectorXd dense_spectrum(const PauliSum& obs, int n_qubits) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(obs, n_qubits));
  return es.eigenvalues();
}

}  // namespace aevqe
