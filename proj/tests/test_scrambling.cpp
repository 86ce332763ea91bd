#include <doctest.h>

#include "qscram/moments.hpp"
#include "qscram/scrambling.hpp"

using namespace qscram;

TEST_CASE("identity channel scrambles nothing") {
  for (int L : {2, 4}) {
    auto cut = Bipartition::symmetric(L);
    CHECK(aotoc_exact(identity_channel(1 << L), cut) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("swap unitary vs definition-level Monte Carlo") {
  auto cut = Bipartition::symmetric(2);
  Mat swap = permutation_operator({1, 0}, 2);
  auto ch = unitary_channel(swap);
  double exact = aotoc_exact(ch, cut);
  Rng rng(11);
  auto mc = aotoc_definition_mc(ch, cut, 5000, rng);
  CHECK(std::abs(exact - mc.mean) < 3 * mc.stderr_);
  CHECK(exact > 0.1);  // the swap genuinely scrambles
}

TEST_CASE("definition MC agrees with exact for an encoded circuit") {
  Rng rng(12);
  auto c = random_clifford(2, rng);
  auto noise = unitary_channel(rz_unitary(1.5707963267948966));
  auto omega = omega_channel(c, noise, 1);
  auto cut = Bipartition::symmetric(2);
  double exact = aotoc_exact(omega, cut);
  auto mc = aotoc_definition_mc(omega, cut, 5000, rng);
  CHECK(std::abs(exact - mc.mean) < 3 * std::max(mc.stderr_, 1e-12));

  Rng r1(99), r2(99);
  auto a = aotoc_definition_mc(omega, cut, 200, r1);
  auto b = aotoc_definition_mc(omega, cut, 200, r2);
  CHECK(a.mean == b.mean);
}

TEST_CASE("encoded fast path equals the dense swap form") {
  Rng rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    int L = 2 + static_cast<int>(rng.uniform_below(3));  // 2..4
    int k = 1 + static_cast<int>(rng.uniform_below(2));  // keep the Kraus count small
    auto c = random_clifford(L, rng);
    auto cut = Bipartition::first_sites(L, 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(L - 1))));
    QuantumChannel noise =
        (trial % 2 == 0) ? depolarizing_channel(0.3 + 0.4 * rng.uniform01())
                         : unitary_channel(axis_unitary(rng.uniform01() * 3, rng.uniform01() * 3, rng.uniform01() * 3));
    bool prime = trial % 3 == 0;
    double dense = aotoc_exact(omega_channel(c, noise, k, prime), cut);
    double fast = aotoc_exact_encoded(c, noise, k, cut, prime);
    CHECK(fast == doctest::Approx(dense).epsilon(1e-9));
  }
}

TEST_CASE("depolarizing encoded circuits never scramble, per instance") {
  Rng rng(14);
  for (double p : {0.1, 0.5, 1.0}) {
    auto noise = depolarizing_channel(p);
    for (int k : {1, 2}) {
      auto c = random_clifford(4, rng);
      auto cut = Bipartition::symmetric(4);
      CHECK(std::abs(aotoc_exact(omega_channel(c, noise, k), cut)) < 1e-10);
      CHECK(std::abs(aotoc_exact_encoded(c, noise, k, cut)) < 1e-10);
    }
  }
}

TEST_CASE("state estimator agrees with the exact value") {
  Rng rng(15);
  auto c = random_clifford(4, rng);
  auto noise = unitary_channel(rz_unitary(1.5707963267948966));
  auto omega = omega_channel(c, noise, 1);
  auto cut = Bipartition::symmetric(4);
  double exact = aotoc_exact(omega, cut);
  Rng est_rng(16);
  auto est = aotoc_state_estimator(omega, cut, 400, est_rng);
  CHECK(std::abs(exact - est.mean) < 3 * est.stderr_);

  // identity: zero within numerical tolerance (zero-variance estimator)
  auto id_est = aotoc_state_estimator(identity_channel(16), cut, 8, est_rng);
  CHECK(std::abs(id_est.mean) < 1e-10);

  // depolarizing encoded circuit: zero within noise
  auto dep = omega_channel(c, depolarizing_channel(0.6), 1);
  auto dep_est = aotoc_state_estimator(dep, cut, 64, est_rng);
  CHECK(std::abs(dep_est.mean) < 3 * std::max(dep_est.stderr_, 1e-12));
}

TEST_CASE("three forms agree pairwise on random L=3 circuits") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = random_clifford(3, rng);
    Mat u = haar_unitary(2, rng);
    auto omega = omega_channel(c, unitary_channel(u), 1 + static_cast<int>(rng.uniform_below(2)));
    auto cut = Bipartition::first_sites(3, 1 + static_cast<int>(rng.uniform_below(2)));
    double exact = aotoc_exact(omega, cut);
    auto mc = aotoc_definition_mc(omega, cut, 3000, rng);
    auto st = aotoc_state_estimator(omega, cut, 300, rng);
    CHECK(std::abs(exact - mc.mean) < 3 * std::max(mc.stderr_, 1e-12));
    CHECK(std::abs(exact - st.mean) < 3 * std::max(st.stderr_, 1e-12));
    CHECK(exact >= -1e-12);
    CHECK(exact <= 1 + 1e-12);
  }
}

TEST_CASE("unitary noise at theta = 0 gives zero for any encoding") {
  Rng rng(18);
  auto noise = unitary_channel(rz_unitary(0.0));
  for (int trial = 0; trial < 5; ++trial) {
    auto c = random_clifford(4, rng);
    CHECK(std::abs(aotoc_exact_encoded(c, noise, 2, Bipartition::symmetric(4))) < 1e-12);
  }
}

TEST_CASE("haar baseline closed form for depolarization") {
  for (double p : {0.0, 0.3, 1.0}) {
    auto x = natural_representation(depolarizing_channel(p));
    for (int k : {1, 2, 3}) {
      double want = std::pow(1 - 1.5 * p + 0.75 * p * p, k) - std::pow(1 - 0.75 * p, 2 * k);
      CHECK(haar_avg_aotoc_infinite(x, k) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  // p = 1, k = 1: 0.25 - 0.0625
  CHECK(haar_avg_aotoc_infinite(natural_representation(depolarizing_channel(1.0)), 1) ==
        doctest::Approx(0.1875).epsilon(1e-12));
  // identity noise: 1 - 1 = 0
  CHECK(haar_avg_aotoc_infinite(natural_representation(identity_channel(2)), 1) ==
        doctest::Approx(0.0).epsilon(1e-12));
}
