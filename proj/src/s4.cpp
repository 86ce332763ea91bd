#include "qscram/s4.hpp"

#include <algorithm>
#include <stdexcept>

namespace qscram {

namespace {

S4Data::Perm compose_perm(const S4Data::Perm& s, const S4Data::Perm& t) {
  S4Data::Perm r{};
  for (int x = 0; x < 4; ++x) r[x] = s[t[x]];
  return r;
}

int cycle_class(const S4Data::Perm& p) {
  std::array<bool, 4> seen{};
  std::vector<int> lens;
  for (int a = 0; a < 4; ++a) {
    if (seen[a]) continue;
    int len = 0, b = a;
    while (!seen[b]) { seen[b] = true; b = p[b]; ++len; }
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end(), std::greater<int>());
  if (lens == std::vector<int>{1, 1, 1, 1}) return 0;
  if (lens == std::vector<int>{2, 1, 1}) return 1;
  if (lens == std::vector<int>{2, 2}) return 2;
  if (lens == std::vector<int>{3, 1}) return 3;
  return 4;  // {4}
}

}  // namespace

S4Data::S4Data() {
  Perm p{0, 1, 2, 3};
  int idx = 0;
  do {
    perms[idx++] = p;
  } while (std::next_permutation(p.begin(), p.end()));
  for (int i = 0; i < 24; ++i) {
    class_of[i] = cycle_class(perms[i]);
    Perm inv{};
    for (int a = 0; a < 4; ++a) inv[perms[i][a]] = a;
    inverse_of[i] = index_of(inv);
    for (int j = 0; j < 24; ++j) compose_idx[i][j] = index_of(compose_perm(perms[i], perms[j]));
  }
  if (!characters_orthogonal()) throw std::logic_error("S4Data: character table self-test failed");
}

const S4Data& S4Data::instance() {
  static const S4Data data;
  return data;
}

int S4Data::index_of(const Perm& p) const {
  for (int i = 0; i < 24; ++i)
    if (perms[i] == p) return i;
  throw std::invalid_argument("S4Data::index_of: not a permutation of {0..3}");
}

bool S4Data::characters_orthogonal() const {
  // sum over irreps of chi(c1) chi(c2) = delta_{c1,c2} * 24 / |class c1|
  for (int c1 = 0; c1 < 5; ++c1)
    for (int c2 = 0; c2 < 5; ++c2) {
      int acc = 0;
      for (int lam = 0; lam < 5; ++lam) acc += character[lam][c1] * character[lam][c2];
      int want = (c1 == c2) ? 24 / class_size[c1] : 0;
      if (acc != want) return false;
    }
  int sum_sq = 0;
  for (int lam = 0; lam < 5; ++lam) sum_sq += irrep_dim[lam] * irrep_dim[lam];
  return sum_sq == 24;
}

const std::vector<Mat>& s4_qubit_reps() {
  static const std::vector<Mat> reps = [] {
    const auto& s4 = S4Data::instance();
    std::vector<Mat> out;
    out.reserve(24);
    for (const auto& p : s4.perms)
      out.push_back(permutation_operator(std::vector<int>(p.begin(), p.end()), 2));
    return out;
  }();
  return reps;
}

}  // namespace qscram
