#include <doctest.h>

#include "qscram/moments.hpp"
#include "qscram/nonlocal_magic.hpp"
#include "qscram/s4.hpp"
#include "qscram/scrambling.hpp"

using namespace qscram;

namespace {

Mat kron4(const Mat& m) { return kron(kron(m, m), kron(m, m)); }

// exhaustive fourth-moment average over every Clifford at n = 1
Mat phi_exhaustive_1(const Mat& o) {
  Mat acc = Mat::Zero(16, 16);
  for (std::uint64_t i = 0; i < clifford_group_order(1); ++i) {
    Mat u = clifford_from_index(1, i).to_dense();
    Mat u4 = kron4(u);
    acc += u4.adjoint() * o * u4;
  }
  return acc / static_cast<double>(clifford_group_order(1));
}

Mat random_mat(Eigen::Index d, Rng& rng) {
  Mat m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = {rng.gaussian(), rng.gaussian()};
  return m;
}

DenseOperator as_qubits(Mat m, int nq) {
  return DenseOperator(std::move(m), std::vector<int>(static_cast<std::size_t>(nq), 2));
}

}  // namespace

TEST_CASE("character table self-test") { CHECK(S4Data::instance().characters_orthogonal()); }

TEST_CASE("weingarten symbols: structural zeros and unitality") {
  auto t1 = weingarten_table(1);
  // the Q block never sees the [3,1] and [2,1,1] irreps
  CHECK(t1.d_plus[1] == 0.0);
  CHECK(t1.d_plus[3] == 0.0);
  CHECK(t1.d_plus[0] == doctest::Approx(2.0));
  CHECK(t1.d_plus[2] == doctest::Approx(1.0));
  auto t2 = weingarten_table(2);
  CHECK(t2.d_plus[1] == 0.0);
  CHECK(t2.d_plus[3] == 0.0);
  CHECK(t2.d_plus[0] == doctest::Approx(5.0));
  CHECK(t2.d_plus[2] == doctest::Approx(5.0));
  CHECK(t2.d_plus[4] == doctest::Approx(1.0));
  CHECK(t2.d_minus[0] == doctest::Approx(30.0));
  CHECK(t2.d_minus[4] == 0.0);

  // averaging is unital: Phi(I) = I
  for (int L : {1, 2}) {
    Eigen::Index big = Eigen::Index(1) << (4 * L);
    auto id = as_qubits(Mat::Identity(big, big), 4 * L);
    auto out = phi_clifford_4(id, L);
    CHECK((out.mat - id.mat).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("phi matches the exhaustive single-qubit average") {
  Rng rng(31);
  Mat o = random_mat(16, rng);
  Mat want = phi_exhaustive_1(o);
  Mat got = phi_clifford_4(as_qubits(o, 4), 1).mat;
  CHECK((want - got).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("phi is idempotent and fixes commutant elements") {
  Rng rng(32);
  for (int L : {1, 2}) {
    Eigen::Index d = Eigen::Index(1) << L;
    Mat o = random_mat(d * d * d * d, rng);
    auto phi1 = phi_clifford_4(as_qubits(o, 4 * L), L);
    auto phi2 = phi_clifford_4(phi1, L);
    CHECK((phi2.mat - phi1.mat).cwiseAbs().maxCoeff() < 1e-9);

    // Q T_(12) is already in the commutant
    Mat q = q_projector(L).mat;
    Mat t12 = permutation_operator(perm_from_cycles({{1, 2}}, 4), static_cast<int>(d));
    Mat qt = q * t12;
    auto fixed = phi_clifford_4(as_qubits(qt, 4 * L), L);
    CHECK((fixed.mat - qt).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("phi commutes with four-copy Clifford conjugation") {
  Rng rng(33);
  Mat o = random_mat(16, rng);
  auto c = random_clifford(1, rng);
  Mat u4 = kron4(c.to_dense());
  Mat lhs = phi_clifford_4(as_qubits(Mat(u4.adjoint() * o * u4), 4), 1).mat;
  Mat rhs = phi_clifford_4(as_qubits(o, 4), 1).mat;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("finite-L ensemble average vs exhaustive swap-form mean at L=2") {
  auto noise = unitary_channel(rz_unitary(0.9));
  auto cut = Bipartition::symmetric(2);
  const std::uint64_t n = clifford_group_order(2);
  double acc = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto c = clifford_from_index(2, i);
    acc += aotoc_exact_encoded(c, noise, 1, cut);
  }
  double exhaustive = acc / static_cast<double>(n);
  double engine = avg_aotoc_finite_L(noise, 1, 2);
  CHECK(engine == doctest::Approx(exhaustive).epsilon(1e-9));
}

TEST_CASE("rz closed forms at infinity") {
  for (int k = 1; k <= 4; ++k)
    for (int i = 0; i <= 8; ++i) {
      double theta = 3.141592653589793238462643 * i / 8.0;
      auto noise = unitary_channel(rz_unitary(theta));
      CHECK(std::abs(avg_aotoc_infinite(noise, k) - rz_aotoc_closed_form(theta, k)) < 1e-12);
      CHECK(std::abs(avg_apep_infinite(rz_unitary(theta), k) - rz_apep_closed_form(theta, k)) < 1e-12);
    }
  CHECK(avg_aotoc_infinite(unitary_channel(rz_unitary(1.5707963267948966)), 1) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(avg_apep_infinite(rz_unitary(0.7853981633974483), 1) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("finite-L engine converges to the infinite form") {
  auto noise = unitary_channel(rz_unitary(1.5707963267948966));
  double lim = avg_aotoc_infinite(noise, 1);
  double prev = 1e9;
  for (int L : {4, 8, 16, 32}) {
    double gap = std::abs(avg_aotoc_finite_L(noise, 1, L) - lim);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-3);
  // at L = 64 the engine value and the single-site limit coincide to 1e-12
  CHECK(std::abs(avg_aotoc_finite_L(noise, 1, 64) - lim) < 1e-12);

  Mat u = axis_unitary(1.1, 0.6, 0.4);
  CHECK(std::abs(avg_apep_finite_L(u, 1, 64) - avg_apep_infinite(u, 1)) < 1e-12);
  CHECK(std::abs(avg_apep_finite_L(u, 2, 64) - avg_apep_infinite(u, 2)) < 1e-12);
}

TEST_CASE("general-axis aotoc closed form") {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    double theta = rng.uniform01() * 3.141592653589793;
    double gamma = rng.uniform01() * 3.141592653589793;
    double phi = rng.uniform01() * 3.141592653589793;
    auto noise = unitary_channel(axis_unitary(theta, gamma, phi));
    for (int k : {1, 2}) {
      double term = (3 + std::cos(2 * theta) -
                     8 * std::pow(std::sin(gamma), 2) *
                         (std::pow(std::cos(gamma), 2) +
                          std::pow(std::sin(gamma) * std::sin(phi) * std::cos(phi), 2)) *
                         std::pow(std::sin(theta / 2), 4)) /
                    4.0;
      double want = 1 - std::pow(term, k);
      CHECK(std::abs(avg_aotoc_infinite(noise, k) - want) < 1e-12);
    }
  }
}

TEST_CASE("maximally unbiased axis reaches 1 - (1/4)^k") {
  double gamma = std::acos(1.0 / std::sqrt(3.0));
  auto noise = unitary_channel(axis_unitary(2 * 3.141592653589793 / 3, gamma, 3.141592653589793 / 4));
  for (int k : {1, 2, 3})
    CHECK(std::abs(avg_aotoc_infinite(noise, k) - (1 - std::pow(0.25, k))) < 1e-12);
}

TEST_CASE("depolarizing noise averages to zero at any size") {
  for (double p : {0.1, 0.5, 1.0})
    for (int k : {1, 2})
      for (int L : {4, 6, 16}) CHECK(std::abs(avg_aotoc_finite_L(depolarizing_channel(p), k, L)) < 1e-10);
}

TEST_CASE("finite-L ensemble values match Monte Carlo at L=4") {
  auto noise = unitary_channel(rz_unitary(1.5707963267948966));
  auto cut = Bipartition::symmetric(4);
  Rng rng(35);
  const int n = 300;
  double acc = 0, acc2 = 0;
  for (int i = 0; i < n; ++i) {
    auto c = random_clifford(4, rng);
    double v = aotoc_exact_encoded(c, noise, 1, cut);
    acc += v;
    acc2 += v * v;
  }
  double mean = acc / n;
  double se = std::sqrt(std::max(0.0, acc2 / n - mean * mean) / (n - 1));
  CHECK(std::abs(mean - avg_aotoc_finite_L(noise, 1, 4)) < 3 * se);
}

TEST_CASE("finite-L apep matches single-copy Monte Carlo at L=4") {
  Mat u = rz_unitary(1.5707963267948966 / 2);  // T-like rotation
  auto cut = Bipartition::symmetric(4);
  Rng rng(36);
  const int n = 200;
  double acc = 0, acc2 = 0;
  for (int i = 0; i < n; ++i) {
    auto c = random_clifford(4, rng);
    double v = apep_single_copy(c, u, 1, cut);
    acc += v;
    acc2 += v * v;
  }
  double mean = acc / n;
  double se = std::sqrt(std::max(0.0, acc2 / n - mean * mean) / (n - 1));
  CHECK(std::abs(mean - avg_apep_finite_L(u, 1, 4)) < 3 * se);
}

TEST_CASE("report bundles the three ensemble values") {
  auto r = haar_vs_clifford_report(unitary_channel(rz_unitary(1.5707963267948966)), 1);
  CHECK(r.clifford_aotoc == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.apep_defined);
  CHECK(r.clifford_apep == doctest::Approx(0.0).epsilon(1e-12));  // S gate is Clifford
  CHECK(r.haar_aotoc == doctest::Approx(0.75).epsilon(1e-12));

  auto rt = haar_vs_clifford_report(unitary_channel(rz_unitary(0.7853981633974483)), 1);
  CHECK(rt.clifford_apep == doctest::Approx(0.25).epsilon(1e-12));

  auto rd = haar_vs_clifford_report(depolarizing_channel(1.0), 1);
  CHECK(rd.haar_aotoc == doctest::Approx(0.1875).epsilon(1e-12));
  CHECK(rd.clifford_aotoc == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(!rd.apep_defined);

  // k -> infinity pushes the rz(pi/2) values to 1
  auto big = haar_vs_clifford_report(unitary_channel(rz_unitary(1.5707963267948966)), 40);
  CHECK(big.clifford_aotoc > 0.999999);

  // asymmetric cuts are rejected by the ensemble engine
  CHECK_THROWS(avg_aotoc_finite_L(depolarizing_channel(0.2), 1, 5));
}
