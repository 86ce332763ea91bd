#include <doctest.h>

#include "qscram/nonlocal_magic.hpp"
#include "qscram/pauli.hpp"
#include "qscram/scrambling.hpp"

using namespace qscram;

TEST_CASE("lambda and Q projector structure") {
  const Mat& lam = lambda_16();
  CHECK((lam - lam.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((lam * lam - 4 * lam).cwiseAbs().maxCoeff() < 1e-12);

  for (int L : {1, 2}) {
    auto q = q_projector(L);
    CHECK((q.mat * q.mat - q.mat).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((q.mat - q.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
  // Q at L=1 equals Lambda/4
  CHECK((q_projector(1).mat - lambda_16() / 4).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("e_lin basics") {
  Rng rng(21);
  // Paulis across any site cut are product operators
  for (int trial = 0; trial < 8; ++trial) {
    auto p = PauliString(3, rng.next_u64(), rng.next_u64(), 0);
    DenseOperator op(p.to_dense(), {2, 2, 2});
    CHECK(e_lin(op, {true, false, trial % 2 == 1}) == doctest::Approx(0.0).epsilon(1e-12));
  }
  // Clifford images of Paulis stay product operators
  for (int trial = 0; trial < 5; ++trial) {
    auto c = random_clifford(2, rng);
    auto p = PauliString(2, rng.next_u64(), rng.next_u64(), 0);
    DenseOperator img(conjugate_pauli(c, p).to_dense(), {2, 2});
    CHECK(e_lin(img, {true, false}) == doctest::Approx(0.0).epsilon(1e-12));
  }
  // CNOT across its 1|1 cut
  Mat cnot = Mat::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
  CHECK(e_lin(DenseOperator(cnot, {2, 2}), {true, false}) == doctest::Approx(0.5).epsilon(1e-12));
  // non-unitary input rejected
  CHECK_THROWS(e_lin(DenseOperator(0.5 * cnot, {2, 2}), {true, false}));
}

TEST_CASE("apep of Cliffords and the identity vanishes") {
  Rng rng(22);
  auto cut = Bipartition::symmetric(2);
  CHECK(apep_enumeration(Mat::Identity(4, 4), cut) == doctest::Approx(0.0).epsilon(1e-12));
  for (int trial = 0; trial < 4; ++trial) {
    auto c = random_clifford(2, rng);
    CHECK(apep_enumeration(c.to_dense(), cut) == doctest::Approx(0.0).epsilon(1e-11));
    CHECK(apep_four_copy(c.to_dense(), cut) == doctest::Approx(0.0).epsilon(1e-10));
  }
  CHECK(apep_four_copy(Mat::Identity(2, 2), Bipartition::first_sites(1, 1)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("four-copy formula equals enumeration on random unitaries") {
  Rng rng(23);
  auto cut = Bipartition::symmetric(2);
  for (int trial = 0; trial < 4; ++trial) {
    Mat u = haar_unitary(4, rng);
    double a = apep_enumeration(u, cut);
    double b = apep_four_copy(u, cut);
    CHECK(std::abs(a - b) < 1e-10);
    CHECK(a >= 0);
    CHECK(a < 1);
  }
}

TEST_CASE("single-copy evaluator matches the four-copy formula") {
  Rng rng(24);
  for (int trial = 0; trial < 6; ++trial) {
    int L = 2 + static_cast<int>(rng.uniform_below(2));  // 2..3
    int k = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(L)));
    auto c = random_clifford(L, rng);
    Mat u = (trial % 2 == 0) ? t_gate() : haar_unitary(2, rng);
    auto cut = Bipartition::first_sites(L, 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(L - 1))));
    // the circuit unitary V with V^dag P V = C^dag (u-noise on P) C
    Mat v = omega_kraus_unitary(c, Mat(u.adjoint()), k, true);
    double via_four = apep_four_copy(v, cut);
    double via_single = apep_single_copy(c, u, k, cut, true);
    CHECK(std::abs(via_four - via_single) < 1e-10);
  }
}

TEST_CASE("encoded and unencoded variants coincide") {
  Rng rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = random_clifford(3, rng);
    Mat u = haar_unitary(2, rng);
    auto cut = Bipartition::first_sites(3, 1 + static_cast<int>(rng.uniform_below(2)));
    double with_enc = apep_single_copy(c, u, 1, cut, false);
    double without = apep_single_copy(c, u, 1, cut, true);
    CHECK(std::abs(with_enc - without) < 1e-10);
  }
}

TEST_CASE("clifford noise generates nothing in the single-copy path") {
  Rng rng(26);
  auto c = random_clifford(3, rng);
  auto cut = Bipartition::first_sites(3, 1);
  CHECK(apep_single_copy(c, Mat::Identity(2, 2), 2, cut) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(apep_single_copy(c, s_gate(), 2, cut) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("clifford pre-processing invariance") {
  Rng rng(27);
  auto cut = Bipartition::symmetric(2);
  Mat t2 = kron(t_gate(), Mat::Identity(2, 2));
  Mat cnot = Mat::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
  CliffordTableau cx = CliffordTableau::parse("+XX\n+IX\n+ZI\n+ZZ\n");
  CHECK(clifford_preprocessing_invariance_check(t2, cx, cut));
  CHECK(clifford_preprocessing_invariance_check(Mat::Identity(4, 4), cx, cut));
  for (int trial = 0; trial < 20; ++trial) {
    Mat u = haar_unitary(4, rng);
    auto c = random_clifford(2, rng);
    CHECK(clifford_preprocessing_invariance_check(u, c, cut));
  }
}
