#include <doctest.h>

#include "qscram/stabilizer.hpp"
#include "qscram/tableau.hpp"

using namespace qscram;

namespace {
const StabilizerStateSet& stab1() {
  static const auto s = enumerate_stabilizer_states(1);
  return s;
}
const StabilizerStateSet& stab2() {
  static const auto s = enumerate_stabilizer_states(2);
  return s;
}
}  // namespace

TEST_CASE("stabilizer state counts and purity") {
  CHECK(stab1().states.size() == 6);
  CHECK(stab2().states.size() == 60);
  CHECK(enumerate_stabilizer_states(3).states.size() == 1080);
  for (const auto& rho : stab1().states) {
    CHECK((rho * rho - rho).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
  }
  for (const auto& rho : stab2().states) {
    CHECK((rho * rho - rho).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("n=1 set is the six Pauli eigenstates") {
  Mat paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
  int matches = 0;
  for (const auto& rho : stab1().states)
    for (const auto& p : paulis) {
      double ev = (p * rho).trace().real();
      if (std::abs(std::abs(ev) - 1.0) < 1e-12) ++matches;
    }
  CHECK(matches == 6);  // each state is a +-1 eigenstate of exactly one Pauli
}

TEST_CASE("robustness of stabilizer inputs is 1") {
  for (const auto& rho : stab1().states) {
    auto sol = robustness(rho, stab1());
    CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sol.certified);
  }
  // maximally mixed states sit inside the polytope
  CHECK(robustness(0.5 * Mat::Identity(2, 2), stab1()).value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(robustness(0.25 * Mat::Identity(4, 4), stab2()).value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("robustness of the T state is sqrt(2)") {
  Vec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  Vec tplus = t_gate() * plus;
  Mat rho = tplus * tplus.adjoint();
  auto sol = robustness(rho, stab1());
  CHECK(sol.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(sol.duality_gap < 1e-8);

  // independent oracle: enumerate all basic solutions of the standard-form LP
  // and take the best feasible one
  const auto& basis = stab1().states;
  const int ns = 6, rows = 4;
  Eigen::MatrixXd a(rows, 2 * ns);
  for (int s = 0; s < ns; ++s) {
    Eigen::VectorXd col(rows);
    col << basis[s](0, 0).real(), basis[s](1, 1).real(), basis[s](0, 1).real(), basis[s](0, 1).imag();
    a.col(s) = col;
    a.col(ns + s) = -col;
  }
  Eigen::VectorXd b(rows);
  b << rho(0, 0).real(), rho(1, 1).real(), rho(0, 1).real(), rho(0, 1).imag();
  double best = 1e300;
  for (int i = 0; i < 2 * ns; ++i)
    for (int j = i + 1; j < 2 * ns; ++j)
      for (int k = j + 1; k < 2 * ns; ++k)
        for (int l = k + 1; l < 2 * ns; ++l) {
          Eigen::Matrix4d bm;
          bm.col(0) = a.col(i);
          bm.col(1) = a.col(j);
          bm.col(2) = a.col(k);
          bm.col(3) = a.col(l);
          Eigen::FullPivLU<Eigen::Matrix4d> lu(bm);
          if (!lu.isInvertible()) continue;
          Eigen::Vector4d q = lu.solve(b);
          if ((bm * q - b).cwiseAbs().maxCoeff() > 1e-9) continue;
          if (q.minCoeff() < -1e-10) continue;
          best = std::min(best, q.sum());
        }
  CHECK(sol.value == doctest::Approx(best).epsilon(1e-7));
}

TEST_CASE("robustness is convex") {
  Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    // random single-qubit density matrices from Haar states
    Vec v1 = haar_state(2, rng), v2 = haar_state(2, rng);
    Mat r1 = v1 * v1.adjoint(), r2 = v2 * v2.adjoint();
    double lhs = robustness(0.5 * r1 + 0.5 * r2, stab1()).value;
    double rhs = 0.5 * robustness(r1, stab1()).value + 0.5 * robustness(r2, stab1()).value;
    CHECK(lhs <= rhs + 1e-7);
  }
}

TEST_CASE("capacity of Clifford unitaries is 1") {
  CHECK(magic_capacity(identity_channel(2)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(magic_capacity(unitary_channel(s_gate())) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(magic_capacity(unitary_channel(hadamard())) == doctest::Approx(1.0).epsilon(1e-6));
  Rng rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    auto c = random_clifford(1, rng);
    CHECK(magic_capacity(unitary_channel(c.to_dense())) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("T-gate capacity is reached on maximally entangled inputs") {
  double full = magic_capacity(unitary_channel(t_gate()));
  CHECK(full > 1.0 + 1e-3);
  // restrict to maximally entangled stabilizer inputs: reduced state = I/2
  double restricted = 0;
  for (const auto& phi : stab2().states) {
    Mat red = Mat::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int t = 0; t < 2; ++t) red(i, j) += phi(i * 2 + t, j * 2 + t);
    if ((red - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-9) continue;
    Mat tk = kron(t_gate(), Mat::Identity(2, 2));
    Mat out = tk * phi * tk.adjoint();
    restricted = std::max(restricted, robustness(out, stab2()).value);
  }
  CHECK(full == doctest::Approx(restricted).epsilon(1e-8));
}

TEST_CASE("capacity is invariant under Clifford pre/post composition") {
  Rng rng(54);
  Mat u = axis_unitary(0.9, 0.7, 0.3);
  double base = magic_capacity(unitary_channel(u));
  for (int trial = 0; trial < 10; ++trial) {
    Mat c1 = random_clifford(1, rng).to_dense();
    Mat c2 = random_clifford(1, rng).to_dense();
    double v = magic_capacity(unitary_channel(c1 * u * c2));
    CHECK(std::abs(v - base) < 1e-6);
  }
}
