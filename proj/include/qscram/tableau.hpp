#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qscram/pauli.hpp"
#include "qscram/rng.hpp"

namespace qscram {

// Clifford unitary modulo global phase, stored as the images of the
// generators under conjugation: images[j] = C X_j C^dag for j < n and
// images[n+j] = C Z_j C^dag. Image phases are always 0 or 2 (signs).
//
// The symplectic matrix view has row r = (x bits | z bits) of images[r];
// phase bit r is images[r].phase / 2.
struct CliffordTableau {
  int n = 0;
  std::vector<PauliString> images;  // size 2n

  static CliffordTableau identity(int n_qubits);

  const PauliString& image_x(int q) const { return images[q]; }
  const PauliString& image_z(int q) const { return images[n + q]; }

  // GF(2) check of M^T J M = J (conjugation preserves commutation).
  bool is_symplectic() const;

  CliffordTableau inverse() const;
  std::string str() const;  // 2n lines of signed Pauli strings, X images first
  static CliffordTableau parse(const std::string& text);

  bool operator==(const CliffordTableau& o) const = default;

  Mat to_dense() const;  // cap n <= 6; unitary with a fixed global-phase gauge
};

// C P C^dag with exact phase tracking.
PauliString conjugate_pauli(const CliffordTableau& c, const PauliString& p);

// Tableau of (a then b applied as unitaries): compose(b, a) = tableau of b*a.
CliffordTableau compose(const CliffordTableau& b, const CliffordTableau& a);

// Exactly uniform over the Clifford group modulo phases (n <= 16).
CliffordTableau random_clifford(int n, Rng& rng);

// |Sp(2n,2)| for n <= 3.
std::uint64_t symplectic_group_order(int n);
// Number of Cliffords mod phase: |Sp(2n,2)| * 4^n.
std::uint64_t clifford_group_order(int n);
// Element by index, 0 <= idx < clifford_group_order(n); the map is a bijection
// (used for exhaustive enumeration at n <= 2).
CliffordTableau clifford_from_index(int n, std::uint64_t idx);

}  // namespace qscram
