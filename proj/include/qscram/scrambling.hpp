#pragma once

#include "qscram/bipartition.hpp"
#include "qscram/channels.hpp"
#include "qscram/tableau.hpp"

namespace qscram {

struct MeanWithError {
  double mean = 0;
  double stderr_ = 0;
};

// Encoding-decoding circuit as a channel: observables evolve as
// X -> C^dag N(C X C^dag) C with N the Heisenberg noise layer on the first k
// sites (prime = true drops the initial encoding conjugation). The returned
// channel stores Schrodinger Kraus operators, so its Heisenberg application
// realizes the map above. Dense; L <= 6.
QuantumChannel omega_channel(const CliffordTableau& c, const QuantumChannel& noise_1q, int k,
                             bool prime = false);
// Unitary noise specialization: the single Kraus operator of omega_channel.
Mat omega_kraus_unitary(const CliffordTableau& c, const Mat& u, int k, bool prime = false);

// Two-copy swap-form bipartite A-OTOC of a channel (Heisenberg application).
// Exact; two-copy dimension capped at 4096 (L <= 6).
double aotoc_exact(const QuantumChannel& e, const Bipartition& cut);

// Same value for the encoded circuit, evaluated in the Pauli basis via the
// single-qubit transfer matrix of the noise; exact and fast, L <= 12.
double aotoc_exact_encoded(const CliffordTableau& c, const QuantumChannel& noise_1q, int k,
                           const Bipartition& cut, bool prime = false);

// Definition-level Monte Carlo with Haar-sampled unitaries on each side
// (small systems; L <= 4).
MeanWithError aotoc_definition_mc(const QuantumChannel& e, const Bipartition& cut, int n_samples,
                                  Rng& rng);

// Pure-state estimator: N_A E_psi[S_L(Tr_B rho) - d_B (S_L(rho) - S_L^min)]
// with rho = E_H(psi (x) I/d_B). L <= 8.
MeanWithError aotoc_state_estimator(const QuantumChannel& omega, const Bipartition& cut, int n_psi,
                                    Rng& rng);

// Same estimator for the encoded circuit with unitary noise, evaluated from
// the Pauli expansion of the evolved A-basis (the full-state purity term is
// identically zero for unitary noise, so only Tr(rho_A^2) is sampled).
// Works to L <= 12 without dense synthesis; same psi draws as the dense path.
MeanWithError aotoc_state_estimator_encoded(const CliffordTableau& c, const Mat& u, int k,
                                            const Bipartition& cut, int n_psi, Rng& rng);

// Haar-ensemble infinite-chain baseline from the single-qubit natural rep:
// ||X/2||_2^{2k} - (Tr X / 4)^{2k}.
double haar_avg_aotoc_infinite(const NaturalRep& x, int k);

}  // namespace qscram
