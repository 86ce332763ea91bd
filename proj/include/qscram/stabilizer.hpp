#pragma once

#include <vector>

#include "qscram/channels.hpp"
#include "qscram/simplex.hpp"

namespace qscram {

// Complete set of pure n-qubit stabilizer states (6 / 60 / 1080 for n = 1,2,3).
struct StabilizerStateSet {
  int n_qubits = 0;
  std::vector<Mat> states;  // rank-1 density matrices
};

StabilizerStateSet enumerate_stabilizer_states(int n);

struct RobustnessSolution {
  double value = 1.0;            // ||q||_1 at the optimum
  Eigen::VectorXd q;             // signed mixture coefficients
  double residual = 0;           // reconstruction error ||sum q_i phi_i - rho||_max
  double duality_gap = 0;        // LP certificate
  bool certified = false;
};

// min ||q||_1 s.t. sum_i q_i |phi_i><phi_i| = rho over the given basis.
RobustnessSolution robustness(const Mat& rho, const StabilizerStateSet& basis, double tol = 1e-8);

// max over the 60 two-qubit stabilizer inputs of the output robustness of
// (M (x) I)|phi><phi|; single-qubit channels only.
double magic_capacity(const QuantumChannel& m);

}  // namespace qscram
