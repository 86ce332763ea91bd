#pragma once

#include <stdexcept>
#include <vector>

namespace qscram {

// Per-site A/B assignment of an L-qubit chain.
struct Bipartition {
  std::vector<bool> in_a;  // in_a[s] true when site s belongs to A

  int n_sites() const { return static_cast<int>(in_a.size()); }
  int n_a() const {
    int c = 0;
    for (bool b : in_a) c += b;
    return c;
  }
  int n_b() const { return n_sites() - n_a(); }
  long long d_a() const { return 1ll << n_a(); }
  long long d_b() const { return 1ll << n_b(); }

  // first n_a sites form A
  static Bipartition first_sites(int L, int n_a) {
    if (n_a < 0 || n_a > L) throw std::invalid_argument("Bipartition: bad split");
    Bipartition b;
    b.in_a.assign(L, false);
    for (int s = 0; s < n_a; ++s) b.in_a[s] = true;
    return b;
  }
  // equal halves; L must be even
  static Bipartition symmetric(int L) {
    if (L % 2 != 0) throw std::invalid_argument("Bipartition::symmetric: L must be even");
    return first_sites(L, L / 2);
  }
  bool is_symmetric_halves() const {
    if (n_sites() % 2 != 0 || n_a() != n_sites() / 2) return false;
    for (int s = 0; s < n_a(); ++s)
      if (!in_a[s]) return false;
    return true;
  }
};

}  // namespace qscram
