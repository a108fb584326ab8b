#pragma once

#include "twocav/algebra.hpp"
#include "twocav/fock.hpp"

namespace twocav {

// Two-qubit reduction of a cavity state, in the ordered basis
// {|00>, |01>, |10>, |11>}.
struct QubitDensity {
  Matrix mat;  // 4 x 4
};

// Schmidt coefficients of a pure state on the 3 x 3 (qutrit) block,
// sorted descending; squares sum to 1.
struct SchmidtTriple {
  double k1;
  double k2;
  double k3;
};

// Projects onto the qubit block.  Population outside the block above 1e-10
// is reported as an invariant violation, never discarded silently.
QubitDensity extract_qubit(const DensityMatrix& rho);

// Wootters concurrence C = max(0, l1 - l2 - l3 - l4), where the l_i are the
// descending square roots of the eigenvalues of rho (sy x sy) rho^* (sy x
// sy).  Computed via the singular values of the complex symmetric overlap
// matrix of subnormalized eigenvectors with their spin-flips — algebraically
// identical, far better conditioned than nested matrix square roots or a
// non-Hermitian eigensolve.  rho^* is entrywise conjugation in the fixed
// computational basis above.
double concurrence_2qubit(const QubitDensity& rho);

// Single-photon shortcut: states supported on {|00>,|01>,|10>} have exactly
// one relevant coherence and C = 2 |rho_off|.
double concurrence_offdiag(Complex rho_off);

// Singular values of the 3x3 amplitude matrix psi_{n1 n2}, n1, n2 <= 2.
SchmidtTriple schmidt_coefficients(const Ket& psi);

// Generalized pure-state concurrence sqrt(3 (k1^2 k2^2 + k1^2 k3^2
// + k2^2 k3^2)); 1 for the maximally entangled qutrit pair.
double concurrence_qutrit_pure(const SchmidtTriple& k);

// Entanglement of formation E = h((1 + sqrt(1 - C^2))/2) with the binary
// entropy h in bits; endpoints h(0) = h(1) = 0 taken as limits.
double eof_from_concurrence(double c);

// Convexity upper bound E* = sum_i w_i E(|psi_i>): each component's E is
// computed through the two-qubit route when its support lies in the qubit
// block, else through the Schmidt/qutrit route (support detection at 1e-10).
// Decomposition-dependent: an upper bound, not a claimed exact value.
double upper_bound_estar(const PureMixture& mixture);

}  // namespace twocav
