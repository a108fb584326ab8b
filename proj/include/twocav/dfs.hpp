#pragma once

#include <vector>

#include "twocav/fock.hpp"
#include "twocav/superop.hpp"

namespace twocav {

// Stationarity certificate for a candidate decoherence-free state:
// generator_residual = |Gamma rho| / |rho| and evolution_residual =
// max over probe times of |e^{Gamma t} rho - rho| / |rho| (Frobenius).
struct DfsCertificate {
  Matrix state;
  double generator_residual;
  double evolution_residual;
  bool passed;
};

inline constexpr double kDfsGeneratorTol = 1e-10;
inline constexpr double kDfsEvolutionTol = 1e-9;

// Orthonormal dark-mode number states (B+)^n |00> / sqrt(n!) for
// n = 0..max_total; the first three are |00>, the antisymmetric one-photon
// state, and the symmetric-minus-sqrt(2) two-photon combination.
std::vector<Ket> dark_basis(const FockBasis& basis);

// Zero-quasi-photon dyad built the long way round, through the terminating
// similarity series applied to a one-sided number dyad:
//   branch +1:  e^{-K-} e^{S+}  e^{-S-/2} |n 0><m 0|
//   branch -1:  e^{-K-} e^{-S+} e^{S-/2}  |0 n><0 m|
// Both branches land on |dark_n><dark_m| up to normalization; returned
// Frobenius-normalized (dyads with n != m carry no trace to normalize by).
// The branches differ by (-1)^{n+m}: the antisymmetric mode enters the
// second cavity's creation operator with a minus sign, so |0 n> contains
// (-1)^n times the n-quanta dark component that |n 0> does.
Matrix stso_state(int n, int m, int branch, const FockBasis& basis);

// Certifies stationarity against the collective-mode generator and its
// exponential at s*t in {1, 10}.
DfsCertificate certify(const Matrix& state, double decay_rate,
                       const FockBasis& basis);

}  // namespace twocav
