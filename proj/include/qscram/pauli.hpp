#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qscram {

using Mat = Eigen::MatrixXcd;

// n-qubit Pauli string in the symplectic (x,z) representation with an
// explicit Z4 phase: the operator is i^phase * tensor_j sigma(x_j, z_j),
// where sigma(0,0)=I, sigma(1,0)=X, sigma(1,1)=Y, sigma(0,1)=Z.
// Bit j of x/z refers to qubit j (qubit 0 is the leftmost tensor factor).
// Supports up to 64 qubits.
struct PauliString {
  int n = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int phase = 0;  // element of Z4

  PauliString() = default;
  PauliString(int n_qubits, std::uint64_t x_bits, std::uint64_t z_bits, int ph = 0);

  static PauliString identity(int n_qubits) { return PauliString(n_qubits, 0, 0, 0); }
  // Single-site X_q / Z_q / Y_q embedded in n qubits.
  static PauliString x_at(int n_qubits, int q);
  static PauliString z_at(int n_qubits, int q);

  // Enumeration index: lexicographic in (x,z) bit patterns, phase 0.
  static PauliString from_index(int n_qubits, std::uint64_t idx);

  bool is_identity_bits() const { return x == 0 && z == 0; }
  int weight() const;

  bool operator==(const PauliString& o) const = default;

  PauliString adjoint() const;
  // Text form like "+XIZY", "-YY", "+iXZ", "-iZ".
  std::string str() const;
  static PauliString parse(const std::string& s);

  Mat to_dense() const;  // 2^n x 2^n
};

// Product PQ with exact Z4 phase.
PauliString pauli_mul(const PauliString& p, const PauliString& q);

// True iff the symplectic form <(x_p,z_p),(x_q,z_q)> vanishes over GF(2).
bool commutes(const PauliString& p, const PauliString& q);

// All 4^n phaseless strings, lexicographic in (x,z).
std::vector<PauliString> enumerate_paulis(int n, int cap = 8);

}  // namespace qscram
