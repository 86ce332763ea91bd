#include <doctest.h>

#include "qscram/channels.hpp"
#include "qscram/pauli.hpp"

using namespace qscram;

TEST_CASE("trace preservation") {
  CHECK(depolarizing_channel(0.3).is_trace_preserving());
  CHECK(unitary_channel(hadamard()).is_trace_preserving());
  Mat acc = Mat::Zero(2, 2);
  for (const auto& k : depolarizing_channel(0.7).kraus) acc += k.adjoint() * k;
  CHECK((acc - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_channel basics") {
  Rng rng(1);
  Mat o = haar_unitary(2, rng);
  auto id = identity_channel(2);
  CHECK((apply_channel(id, o) - o).cwiseAbs().maxCoeff() < 1e-14);

  // full depolarization is unital
  auto dep1 = depolarizing_channel(1.0);
  CHECK((apply_channel(dep1, Mat::Identity(2, 2)) - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  // depolarizing sends P != I to (1-p) P
  double p = 0.37;
  auto dep = depolarizing_channel(p);
  for (auto s : {"+X", "+Y", "+Z"}) {
    Mat pd = PauliString::parse(s).to_dense();
    CHECK((apply_channel(dep, pd) - (1 - p) * pd).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((dep.apply_heisenberg(pd) - (1 - p) * pd).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("natural representation") {
  auto id = identity_channel(2);
  CHECK((natural_representation(id).x - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

  // assembled from the standard depolarizing Kraus set
  double p = 0.42;
  auto dep = depolarizing_channel(p);
  Mat want = Mat::Zero(4, 4);
  for (const auto& k : dep.kraus) want += kron(k.adjoint(), k);
  CHECK((natural_representation(dep).x - want).cwiseAbs().maxCoeff() < 1e-13);

  // ||X/2||_2^2 = 1 for every unitary channel
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    Mat u = haar_unitary(2, rng);
    Mat x = natural_representation(unitary_channel(u)).x;
    CHECK(std::abs((x.adjoint() * x).trace().real() / 4.0 - 1.0) < 1e-12);
  }
}

TEST_CASE("natural representation is Kraus-choice invariant") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto dep = depolarizing_channel(0.1 + 0.8 * rng.uniform01());
    // mix the Kraus set by a random unitary on the index space
    Mat v = haar_unitary(static_cast<int>(dep.kraus.size()), rng);
    std::vector<Mat> mixed(dep.kraus.size(), Mat::Zero(2, 2));
    for (std::size_t a = 0; a < mixed.size(); ++a)
      for (std::size_t b = 0; b < dep.kraus.size(); ++b) mixed[a] += v(a, b) * dep.kraus[b];
    QuantumChannel mixed_ch(mixed, {2});
    CHECK((natural_representation(mixed_ch).x - natural_representation(dep).x).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("pauli transfer of common channels") {
  auto t = pauli_transfer_heisenberg(depolarizing_channel(0.5));
  CHECK(t(0, 0) == doctest::Approx(1.0));
  for (int i = 1; i < 4; ++i) CHECK(t(i, i) == doctest::Approx(0.5));

  auto trz = pauli_transfer_heisenberg(unitary_channel(rz_unitary(1.1)));
  CHECK(trz(3, 3) == doctest::Approx(1.0));
  CHECK(trz(0, 0) == doctest::Approx(1.0));
  // Heisenberg rotation angle is -theta around Z
  CHECK(trz(1, 1) == doctest::Approx(std::cos(1.1)));
}

TEST_CASE("haar unitary moments and determinism") {
  Rng rng(2024);
  const int draws = 100000;
  double acc = 0;
  for (int i = 0; i < draws; ++i) {
    Mat u = haar_unitary(2, rng);
    acc += std::norm(u(0, 0));
    CHECK(std::abs(std::abs(u.determinant()) - 1.0) < 1e-12);
  }
  double mean = acc / draws;
  // E|<0|U|0>|^2 = 1/2, variance of |u00|^2 is 1/12 for d=2
  double se = std::sqrt(1.0 / 12 / draws);
  CHECK(std::abs(mean - 0.5) < 3 * se);

  Rng a(5), b(5);
  CHECK((haar_unitary(3, a) - haar_unitary(3, b)).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("axis unitary reduces to rz on the z axis") {
  Mat u1 = axis_unitary(0.8, 0.0, 0.0);
  Mat u2 = rz_unitary(0.8);
  CHECK((u1 - u2).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("kraus json round-trip") {
  auto dep = depolarizing_channel(0.25);
  auto back = channel_from_json(channel_to_json(dep));
  REQUIRE(back.kraus.size() == dep.kraus.size());
  for (std::size_t i = 0; i < back.kraus.size(); ++i)
    CHECK((back.kraus[i] - dep.kraus[i]).cwiseAbs().maxCoeff() == 0);
  CHECK(back.dims == dep.dims);
}
