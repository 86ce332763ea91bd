#pragma once

#include <array>
#include <complex>

#include "qscram/channels.hpp"
#include "qscram/dense.hpp"

namespace qscram {

// Symbols of the fourth Clifford moment at L qubits. For a class function
// g(sigma) the coefficients D_lambda = (1/4!) sum_sigma chi_lambda(sigma) g(sigma)
// play the role of block dimensions; the kernel
//   w(tau) = sum_lambda (d_lambda^2 / (4!)^2) chi_lambda(tau) / D_lambda
// (irreps with D_lambda = 0 skipped) inverts the Gram matrix of the commutant
// basis {Q T_pi} resp. {(I-Q) T_pi}. Vanishing D happens structurally:
// Q T_v = Q for the Klein four-group, so two irreps never appear in the
// Q block.
struct WeingartenTable {
  int L = 0;
  std::array<double, 5> d_plus{}, d_minus{};              // per partition
  std::array<std::array<double, 24>, 24> w_plus{}, w_minus{};  // [pi][sigma] = w(pi o sigma)
};

WeingartenTable weingarten_table(int L);

// Coefficients of Phi(O) = sum_pi b+_pi Q T_pi + b-_pi (I - Q) T_pi.
struct MomentDecomposition {
  std::array<std::complex<double>, 24> b_plus{}, b_minus{};
};

// Fourth-moment projector of the Clifford group applied to a four-copy
// operator (copy-major layout, dims = 4L qubits). Dense cap L <= 3.
MomentDecomposition moment_decomposition(const DenseOperator& o4, int L);
DenseOperator phi_clifford_4(const DenseOperator& o4, int L);

// Ensemble-averaged bipartite A-OTOC of the encoding-decoding circuit with
// single-qubit noise on k of L sites, symmetric cut. Exact per-site
// factorized evaluation (no four-copy matrices); L even, k <= L, L <= 128.
double avg_aotoc_finite_L(const QuantumChannel& noise_1q, int k, int L);

// Infinite-chain limit (single-site closed form; the finite-L evaluator
// converges to this exponentially).
double avg_aotoc_infinite(const QuantumChannel& noise_1q, int k);

// Ensemble-averaged APEP for unitary noise u on k sites, symmetric cut.
double avg_apep_finite_L(const Mat& u, int k, int L);
double avg_apep_infinite(const Mat& u, int k);

// Reference values for the Pauli-axis rotation closed forms.
double rz_aotoc_closed_form(double theta, int k);   // 1 - (3+cos 2theta)^k / 4^k
double rz_apep_closed_form(double theta, int k);    // 1 - (7+cos 4theta)^k / 8^k

struct HaarCliffordReport {
  double clifford_aotoc = 0;
  double haar_aotoc = 0;
  double clifford_apep = 0;
  bool apep_defined = false;  // only for unitary noise
};

HaarCliffordReport haar_vs_clifford_report(const QuantumChannel& noise_1q, int k);

}  // namespace qscram
