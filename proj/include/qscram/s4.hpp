#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qscram/dense.hpp"

namespace qscram {

// Group data for S4: the 24 permutations, composition, conjugacy classes,
// and the character table, with an exact orthogonality self-test.
// Permutations are arrays p with p[a] = image of slot a; matrix convention
// matches permutation_operator (T_sigma T_tau = T_{sigma o tau}).
struct S4Data {
  using Perm = std::array<int, 4>;

  std::array<Perm, 24> perms;
  std::array<int, 24> class_of;          // conjugacy class id per permutation
  std::array<int, 24> inverse_of;        // index of the inverse permutation
  std::array<std::array<int, 24>, 24> compose_idx;  // index of perms[i] o perms[j]

  // classes ordered: e, (12), (12)(34), (123), (1234)
  static constexpr std::array<int, 5> class_size{1, 6, 3, 8, 6};
  // partitions ordered: [4], [3,1], [2,2], [2,1,1], [1,1,1,1]
  static constexpr std::array<int, 5> irrep_dim{1, 3, 2, 3, 1};
  static constexpr std::array<std::array<int, 5>, 5> character{{
      {1, 1, 1, 1, 1},
      {3, 1, -1, 0, -1},
      {2, 0, 2, -1, 0},
      {3, -1, -1, 0, 1},
      {1, -1, 1, 1, -1},
  }};

  static const S4Data& instance();

  int index_of(const Perm& p) const;
  // column orthogonality, exact in integers
  bool characters_orthogonal() const;

 private:
  S4Data();
};

// 16x16 representation of perms[i] on four copies of a qubit.
const std::vector<Mat>& s4_qubit_reps();

}  // namespace qscram
