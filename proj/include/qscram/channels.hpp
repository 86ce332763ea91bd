#pragma once

#include <vector>

#include "qscram/dense.hpp"
#include "qscram/rng.hpp"

namespace qscram {

// CPTP map stored by its Schrodinger-picture Kraus operators
// (rho -> sum K rho K^dag, sum K^dag K = I). The Heisenberg (observable)
// picture is the adjoint X -> sum K^dag X K, which is unital.
struct QuantumChannel {
  std::vector<Mat> kraus;
  std::vector<int> dims;

  QuantumChannel() = default;
  QuantumChannel(std::vector<Mat> ks, std::vector<int> d);

  Eigen::Index dim() const { return kraus.empty() ? 0 : kraus[0].rows(); }
  bool is_trace_preserving(double tol = 1e-12) const;

  Mat apply_schrodinger(const Mat& rho) const;
  Mat apply_heisenberg(const Mat& x) const;
  // Kraus set of the Heisenberg map (adjoints of the stored set).
  std::vector<Mat> heisenberg_kraus() const;
};

// Natural representation X = sum L_i (x) L_i^dag over the Heisenberg Kraus
// set; Kraus-choice invariant.
struct NaturalRep {
  Mat x;  // on two copies of the channel space
};
NaturalRep natural_representation(const QuantumChannel& e);

// sum K O K^dag for the stored (Schrodinger) set.
Mat apply_channel(const QuantumChannel& e, const Mat& o);

// Pauli transfer matrix of the Heisenberg map in the Hermitian basis
// {I,X,Y,Z}/norm: T[r][p] = Tr(P_r E_H(P_p))/2. Real for CP maps.
Eigen::Matrix4d pauli_transfer_heisenberg(const QuantumChannel& e);

// Single-qubit noise constructors.
Mat rz_unitary(double theta);                                  // exp(-i Z theta/2)
Mat axis_unitary(double theta, double gamma, double phi);      // exp(-i theta/2 n.sigma)
QuantumChannel unitary_channel(const Mat& u);
QuantumChannel depolarizing_channel(double p);
QuantumChannel identity_channel(int dim);

// Haar-distributed unitary via QR of a complex Gaussian with phase-fixed R.
Mat haar_unitary(int dim, Rng& rng);
// Haar-random pure state (normalized complex Gaussian).
Vec haar_state(int dim, Rng& rng);

// JSON fixture IO for Kraus sets (used by the CLI --noise kraus-file).
std::string channel_to_json(const QuantumChannel& e);
QuantumChannel channel_from_json(const std::string& text);

}  // namespace qscram
