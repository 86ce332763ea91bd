#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qscram {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Complex square matrix tagged with an ordered list of subsystem dimensions.
// dims[0] is the leftmost (most significant) tensor factor.
struct DenseOperator {
  Mat mat;
  std::vector<int> dims;

  DenseOperator() = default;
  DenseOperator(Mat m, std::vector<int> d);

  Eigen::Index dim() const { return mat.rows(); }
  int n_subsystems() const { return static_cast<int>(dims.size()); }

  static DenseOperator identity(std::vector<int> dims);
};

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);
Mat kron(const Mat& a, const Mat& b);

// Trace out every subsystem not in `keep`; kept subsystems stay in their
// original relative order.
DenseOperator partial_trace(const DenseOperator& o, const std::vector<int>& keep);

// Reorder tensor factors: factor old_of_new[p] of the input becomes factor p
// of the output.
DenseOperator reorder_subsystems(const DenseOperator& o, const std::vector<int>& old_of_new);

// Representation T_sigma of a permutation on m copies of a d-dimensional
// space: contents of copy a move to copy sigma[a]; T_sigma T_tau = T_{sigma o tau}.
Mat permutation_operator(const std::vector<int>& sigma, int d);

// One-based cycle notation helper: cycles like {{1,2},{3,4}} on m slots.
// Built so that Tr(T_{(abcd)} M_1 x...x M_m) = Tr(M_a M_b M_c M_d) per cycle.
std::vector<int> perm_from_cycles(const std::vector<std::vector<int>>& cycles, int m);

// Realigned matrix R of O on A (x) B: R[(i,j),(k,l)] = O[(i,k),(j,l)],
// shape dA^2 x dB^2 (row-major pair indices).
Mat realign(const Mat& o, Eigen::Index da, Eigen::Index db);

// Operator Schmidt coefficients across a bipartition given by per-subsystem
// A-membership flags: lambda_i = sigma_i^2 / d for singular values sigma of
// the realigned matrix; sum lambda = ||O||_2^2 / d.
std::vector<double> operator_schmidt(const DenseOperator& o, const std::vector<bool>& in_a);

// Text fixture round-trip (dims + entries, full precision).
std::string dense_to_text(const DenseOperator& o);
DenseOperator dense_from_text(const std::string& text);

// Common single-qubit gates.
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat hadamard();
Mat s_gate();
Mat t_gate();

}  // namespace qscram
