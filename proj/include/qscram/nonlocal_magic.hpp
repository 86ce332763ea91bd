#pragma once

#include "qscram/bipartition.hpp"
#include "qscram/channels.hpp"
#include "qscram/tableau.hpp"

namespace qscram {

// Single-qubit four-copy Pauli sum Lambda = sum_{P in {I,X,Y,Z}} P^{(x)4}.
// Lambda^2 = 4 Lambda; Lambda/4 projects.
const Mat& lambda_16();

// Q = (1/d^2) sum over phaseless n-qubit Paulis of P^{(x)4}, in copy-major
// factor order; a projector. Dense cap L <= 3.
DenseOperator q_projector(int L);

// Linear operator entanglement of a unitary across a cut: 1 - sum lambda_i^2.
double e_lin(const DenseOperator& o, const std::vector<bool>& in_a);

// APEP by direct averaging of e_lin over all phaseless Paulis. L <= 6.
double apep_enumeration(const Mat& u, const Bipartition& cut);

// APEP via the four-copy trace with the Q projector and the A-side
// (12)(34) permutation. L <= 3.
double apep_four_copy(const Mat& u, const Bipartition& cut);

// APEP of the encoded circuit (noise u on the first k sites, then the
// Clifford), evaluated per Pauli in a single system copy via the exact
// Pauli-basis expansion of the conjugated string. L <= 12.
// prime = false conjugates the noise layer by the encoding first; both give
// the same value.
double apep_single_copy(const CliffordTableau& c, const Mat& u, int k, const Bipartition& cut,
                        bool prime = true);

// |P_E(U) - P_E(U C)| < tol, evaluated by enumeration (small L).
bool clifford_preprocessing_invariance_check(const Mat& u, const CliffordTableau& c,
                                             const Bipartition& cut, double tol = 1e-10);

}  // namespace qscram
