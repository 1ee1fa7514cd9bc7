#include <gtest/gtest.h>

#include <random>

#include "aevqe/hamiltonians.hpp"
#include "aevqe/pauli.hpp"
#include "test_oracles.hpp"

using namespace aevqe;

namespace {

PauliSum random_sum(int n_qubits, int n_terms, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> which(0, 3);
  std::normal_distribution<double> coeff;
  std::vector<PauliTerm> terms;
  for (int t = 0; t < n_terms; ++t) {
    PauliTerm term;
    term.coefficient = cplx{coeff(rng), coeff(rng)};
    for (int q = 0; q < n_qubits; ++q) {
      switch (which(rng)) {
        case 1: term.ops[q] = Pauli::X; break;
        case 2: term.ops[q] = Pauli::Y; break;
        case 3: term.ops[q] = Pauli::Z; break;
        default: break;
      }
    }
    terms.push_back(std::move(term));
  }
  return PauliSum(std::move(terms));
}

std::string h2_table_path() { return std::string(AEVQE_DATA_DIR) + "/h2_coefficients.txt"; }
std::string h2_ref_path() {
  return std::string(AEVQE_DATA_DIR) + "/h2_reference_energies.txt";
}

}  // namespace

TEST(PauliSum, CanonicalizationMergesAndOrders) {
  PauliTerm a{cplx{1, 0}, {{0, Pauli::Z}}};
  PauliTerm b{cplx{2, 0}, {{0, Pauli::Z}}};
  PauliTerm c{cplx{0.5, 0}, {{1, Pauli::X}}};
  PauliSum s({c, a, b});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.terms()[0].ops.begin()->first, 0);
  EXPECT_NEAR(s.terms()[0].coefficient.real(), 3.0, 1e-15);
}

TEST(PauliSum, CanonicalizationDropsSmallAndIsIdempotent) {
  PauliTerm a{cplx{1, 0}, {{0, Pauli::X}}};
  PauliTerm b{cplx{-1 + 1e-15, 0}, {{0, Pauli::X}}};
  PauliSum s({a, b});
  EXPECT_TRUE(s.empty());
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    PauliSum r = random_sum(4, 12, seed);
    PauliSum again(std::vector<PauliTerm>(r.terms()));
    ASSERT_EQ(r.size(), again.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_EQ(r.terms()[i].ops, again.terms()[i].ops);
      EXPECT_NEAR(std::abs(r.terms()[i].coefficient - again.terms()[i].coefficient), 0,
                  1e-15);
    }
  }
}

TEST(PauliSum, ProductTable) {
  auto X0 = PauliSum::single({1, 0}, 0, Pauli::X);
  auto Y0 = PauliSum::single({1, 0}, 0, Pauli::Y);
  auto Z0 = PauliSum::single({1, 0}, 0, Pauli::Z);
  auto xy = X0 * Y0;  // = iZ
  ASSERT_EQ(xy.size(), 1u);
  EXPECT_EQ(xy.terms()[0].ops.at(0), Pauli::Z);
  EXPECT_NEAR(std::abs(xy.terms()[0].coefficient - cplx{0, 1}), 0, 1e-15);
  auto yx = Y0 * X0;  // = -iZ
  EXPECT_NEAR(std::abs(yx.terms()[0].coefficient - cplx{0, -1}), 0, 1e-15);
  auto xx = X0 * X0;  // identity
  ASSERT_EQ(xx.size(), 1u);
  EXPECT_TRUE(xx.terms()[0].is_identity());
  auto zx = Z0 * X0;  // = iY
  EXPECT_EQ(zx.terms()[0].ops.at(0), Pauli::Y);
  EXPECT_NEAR(std::abs(zx.terms()[0].coefficient - cplx{0, 1}), 0, 1e-15);
}

TEST(ParityProjectors, AlgebraIdentities) {
  for (int n = 1; n <= 5; ++n) {
    auto [pp, pm] = parity_projectors(n);
    auto sum = pp + pm;
    ASSERT_EQ(sum.size(), 1u);
    EXPECT_TRUE(sum.terms()[0].is_identity());
    EXPECT_NEAR(std::abs(sum.terms()[0].coefficient - cplx{1, 0}), 0, 1e-15);
    EXPECT_TRUE((pp * pm).empty());  // orthogonality
    // idempotence as operator identities
    auto d1 = pp * pp - pp;
    auto d2 = pm * pm - pm;
    EXPECT_TRUE(d1.empty());
    EXPECT_TRUE(d2.empty());
    // and through the dense oracle
    Eigen::MatrixXcd mp = dense_matrix(pp, n);
    EXPECT_LT((mp * mp - mp).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(parity_projectors(0), std::invalid_argument);
}

TEST(ParityProjectors, SingleQubitPlusState) {
  auto [pp, pm] = parity_projectors(1);
  Eigen::MatrixXcd m = dense_matrix(pp, 1);
  Eigen::VectorXcd plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  EXPECT_LT((m * plus - plus).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DenseMatrix, SingleOperators) {
  Eigen::MatrixXcd z = dense_matrix(PauliSum::single({1, 0}, 0, Pauli::Z), 1);
  EXPECT_NEAR(z(0, 0).real(), 1, 1e-15);
  EXPECT_NEAR(z(1, 1).real(), -1, 1e-15);
  EXPECT_NEAR(std::abs(z(0, 1)), 0, 1e-15);
  PauliTerm xx{cplx{1, 0}, {{0, Pauli::X}, {1, Pauli::X}}};
  Eigen::MatrixXcd m = dense_matrix(PauliSum({xx}), 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(m(i, j).real(), (i + j == 3) ? 1.0 : 0.0, 1e-15) << i << "," << j;
}

TEST(DenseMatrix, MatchesOracleBuild) {
  // term-by-term reconstruction equals the independent kron-based build
  PauliSum H = build_tfim(3, 1.0, 0.7);
  Eigen::MatrixXcd ours = dense_matrix(H, 3);
  Eigen::MatrixXcd theirs = oracle::tfim_matrix(3, 1.0, 0.7);
  EXPECT_LT((ours - theirs).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(DenseMatrix, Linearity) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 5; ++rep) {
    PauliSum A = random_sum(3, 6, 100 + rep);
    PauliSum B = random_sum(3, 6, 200 + rep);
    const double a = g(rng), b = g(rng);
    Eigen::MatrixXcd lhs = dense_matrix(a * A + b * B, 3);
    Eigen::MatrixXcd rhs = a * dense_matrix(A, 3) + b * dense_matrix(B, 3);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DenseMatrix, RejectsOversizedRegister) {
  EXPECT_THROW(dense_matrix(PauliSum::identity(), 15), std::invalid_argument);
  EXPECT_THROW(dense_matrix(PauliSum::single({1, 0}, 3, Pauli::X), 2),
               std::invalid_argument);
}

TEST(Tfim, ClassicalLimitTerms) {
  PauliSum H = build_tfim(3, 1.0, 0.0);
  ASSERT_EQ(H.size(), 2u);
  for (const auto& t : H.terms()) {
    EXPECT_NEAR(t.coefficient.real(), -0.5, 1e-15);
    EXPECT_EQ(t.ops.size(), 2u);
  }
  // ground energy -1, doubly degenerate
  Eigen::VectorXd ev = dense_spectrum(H, 3);
  EXPECT_NEAR(ev(0), -1.0, 1e-12);
  EXPECT_NEAR(ev(1), -1.0, 1e-12);
  EXPECT_GT(ev(2), -1.0 + 1e-9);
}

TEST(Tfim, FreeSpinsLimit) {
  PauliSum H = build_tfim(2, 0.0, 1.0);
  Eigen::VectorXd ev = dense_spectrum(H, 2);
  EXPECT_NEAR(ev(0), -2.0, 1e-12);
}

TEST(Tfim, LowestFourAtHalfField) {
  // frozen from the independent enumeration oracle
  Eigen::VectorXd ev = dense_spectrum(build_tfim(3, 1.0, 0.5), 3);
  EXPECT_NEAR(ev(0), -1.746979603717468, 1e-9);
  EXPECT_NEAR(ev(1), -1.301937735804837, 1e-9);
  EXPECT_NEAR(ev(2), -0.5, 1e-9);
  EXPECT_NEAR(ev(3), -0.054958132087371, 1e-9);
}

TEST(Tfim, RejectsTinyChain) {
  EXPECT_THROW(build_tfim(1, 1.0, 0.5), std::invalid_argument);
}

TEST(Tfim, CommutesWithParity) {
  for (int n = 2; n <= 5; ++n) {
    for (double h : {0.0, 0.2, 0.5, 1.3}) {
      PauliSum H = build_tfim(n, 1.0, h);
      PauliSum px = parity_operator(n);
      EXPECT_TRUE((H * px - px * H).empty()) << "n=" << n << " h=" << h;
    }
  }
}

TEST(Tfim, ClassicalSpectrumByEnumeration) {
  for (int n = 2; n <= 5; ++n) {
    Eigen::VectorXd ev = dense_spectrum(build_tfim(n, 1.3, 0.0), n);
    auto classical = oracle::classical_ising_energies(n, 1.3);
    ASSERT_EQ(ev.size(), static_cast<long>(classical.size()));
    for (long i = 0; i < ev.size(); ++i) EXPECT_NEAR(ev(i), classical[i], 1e-12);
  }
}

TEST(H2, ConstantOperator) {
  H2Coefficients c;
  c.distance = 1.0;
  c.c0 = 1.0;
  Eigen::VectorXd ev = dense_spectrum(build_h2(c), 2);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev(i), 1.0, 1e-14);
}

TEST(H2, TableMatchesReferenceEnergies) {
  auto table = load_h2_table(h2_table_path());
  auto refs = load_h2_reference(h2_ref_path());
  ASSERT_EQ(table.size(), refs.size());
  ASSERT_GE(table.size(), 19u);
  for (std::size_t i = 0; i < table.size(); ++i) {
    ASSERT_NEAR(table[i].distance, refs[i][0], 1e-12);
    Eigen::VectorXd ev = dense_spectrum(build_h2(table[i]), 2);
    EXPECT_NEAR(ev(0), refs[i][1], 1e-6) << "d=" << table[i].distance;
    EXPECT_NEAR(ev(1), refs[i][2], 1e-6) << "d=" << table[i].distance;
  }
}

TEST(H2, GroundCurveHasSingleMinimum) {
  auto table = load_h2_table(h2_table_path());
  std::vector<double> e0;
  for (const auto& row : table) e0.push_back(dense_spectrum(build_h2(row), 2)(0));
  int sign_changes = 0;
  for (std::size_t i = 1; i + 1 < e0.size(); ++i) {
    const double d1 = e0[i] - e0[i - 1], d2 = e0[i + 1] - e0[i];
    if (d1 < 0 && d2 > 0) ++sign_changes;
  }
  EXPECT_EQ(sign_changes, 1);
  EXPECT_LT(e0[4], e0[0]);      // well deeper than the short-range wall
  EXPECT_LT(e0[4], e0.back());  // and below dissociation
}

TEST(H2, LoaderRejectsMissingOrEmpty) {
  EXPECT_THROW(load_h2_table("/nonexistent/h2.txt"), std::runtime_error);
  EXPECT_THROW(build_h2(H2Coefficients{}), std::invalid_argument);
}

TEST(PauliSum, HermitianCheck) {
  EXPECT_TRUE(build_tfim(3, 1, 0.4).is_hermitian());
  PauliSum s = PauliSum::single({0, 1}, 0, Pauli::X);
  EXPECT_FALSE(s.is_hermitian());
}

TEST(PauliSum, ShiftedMovesSupport) {
  PauliSum H = build_tfim(3, 1.0, 0.5);
  PauliSum Hs = H.shifted(2);
  EXPECT_EQ(Hs.max_qubit(), H.max_qubit() + 2);
  Eigen::MatrixXcd big = dense_matrix(Hs, 5);
  Eigen::MatrixXcd small = dense_matrix(H, 3);
  // spectrum is unchanged (each eigenvalue 4x degenerate)
  Eigen::VectorXd evb = oracle::eigenvalues(big);
  Eigen::VectorXd evs = oracle::eigenvalues(small);
  EXPECT_NEAR(evb(0), evs(0), 1e-12);
  EXPECT_NEAR(evb(3), evs(0), 1e-12);
}
