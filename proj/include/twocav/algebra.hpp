#pragma once

#include <utility>
#include <vector>

#include "twocav/fock.hpp"
#include "twocav/superop.hpp"

namespace twocav {

// Superoperator realizations of the symmetry algebra behind the dissipator.
// su(1,1) part (quasi-photon ladder):
//   K-  rho = A rho A+
//   K+  rho = A+ rho A
//   K0  rho = (A+A rho + rho A+A + rho)/2
// u(2) part (photon transfer between the physical modes, both sides):
//   S+  rho = a1+a2 rho + rho a2+a1
//   S-  rho = a2+a1 rho + rho a1+a2
//   S0  = (N1 - N2)/2,   N = (N1 + N2)/2,   N_i rho = n_i rho + rho n_i + rho
// The identity shifts make the diagonal actions exact on the whole truncated
// space: K0 and N on a dyad |n1 n2><m1 m2| give (n+m+1)/2 quasi-quanta and
// (n1+m1+n2+m2+2)/2 respectively.
struct AlgebraGenerators {
  FockBasis basis;
  SuperOperator k_minus, k_plus, k_zero;
  SuperOperator s_plus, s_minus, s_zero;
  SuperOperator n1, n2, n_total;
};

AlgebraGenerators build_generators(const FockBasis& basis);

// s K-  -  s K0  +  s/2; equals build_gamma_collective exactly.
SuperOperator gamma_from_generators(double decay_rate,
                                    const AlgebraGenerators& gens);

// Time-dependent parameters of the similarity transformations that reduce
// the generator to diagonal form:
//   alpha_minus = e^{st} - 1
//   beta_plus   = -tanh(st/4)
//   beta_minus  = -sinh(st/2)/2
struct GaugeParams {
  double t;
  double alpha_minus;
  double beta_plus;
  double beta_minus;
};

GaugeParams gauge_params(double t, double decay_rate);

// Closed form of int_0^t beta_plus dtau = -(4/s) log cosh(st/4).
double beta_plus_integral(double t, double decay_rate);

// exp(alpha K-) and exp(bp S+) exp(bm S-), evaluated as terminating power
// series (the generators are nilpotent on the truncated space; termination
// is asserted).
SuperOperator similarity_u1(double alpha, const AlgebraGenerators& gens);
SuperOperator similarity_u2(double beta_plus, double beta_minus,
                            const AlgebraGenerators& gens);

// Exact eigenpair of the generator labeled by a dyad |n1 n2><m1 m2| and a
// branch (+1 or -1, the two solutions of the stationarity conditions):
//   value = -(s/4) [f2 (n1+m1+1) + f3 (n2+m2+1)] + s/2,
//   f2 = 1 - bp, f3 = 1 + bp, bp = branch, bm = -branch/2,
//   op ~ e^{-K-} e^{bp S+} e^{bm S-} |n1 n2><m1 m2|   (Frobenius-normalized)
struct EigenPair {
  double value;
  Matrix op;
};

EigenPair eigen_solution(int n1, int n2, int m1, int m2, int branch,
                         double decay_rate, const AlgebraGenerators& gens);

// Predicted eigenvalue multiset over all dyad labels, sorted ascending.
std::vector<double> eigenvalue_multiset(double decay_rate,
                                        const FockBasis& basis, int branch);

// n dark-mode quanta: (B+)^n |00> / sqrt(n!), a pure stationary state.
Ket dark_ket(const FockBasis& basis, int n);
DensityMatrix zero_mode_state(int n, const FockBasis& basis);

// Unitary basis change real photon modes -> (bright, dark) modes; column
// index enumerates (nA, nB) occupations with the same ordering as `basis`.
Matrix collective_basis_matrix(const FockBasis& basis);

// Exact solution of the master equation.  Evaluated in the bright/dark
// representation, where the nilpotent e^{alpha K-} series groups into
// bounded factors e^{-st(n+m-2k)/2} (1-e^{-st})^k and stays numerically
// stable for arbitrarily large st.
DensityMatrix evolve_analytic(const DensityMatrix& rho0, double decay_rate,
                              double t);
std::vector<DensityMatrix> evolve_analytic(const DensityMatrix& rho0,
                                           double decay_rate,
                                           const std::vector<double>& times);

// The same solution evaluated literally in the photon-number representation:
// scale each dyad by exp(-(s/4) sum t + delta log cosh(st/4)), then apply
// e^{b+(t) S+} e^{b-(t) S-} and e^{a-(t) K-}.  Algebraically identical to
// evolve_analytic, but the e^{st}-sized K- coefficient amplifies roundoff
// (faster at higher truncations), so it serves as a moderate-time
// cross-check rather than the shipped path.
DensityMatrix evolve_analytic_gauge(const DensityMatrix& rho0,
                                    double decay_rate, double t);

// Closed-form solution for |chi> = a|01> + sqrt(1-a^2)|10>: the evolved
// state has support on {|00>,|01>,|10>} with one independent coherence.
DensityMatrix single_photon_solution(double a, double decay_rate, double t,
                                     const FockBasis& basis);

using PureMixture = std::vector<std::pair<double, Ket>>;

// Decomposition of the evolved state of a pure initial state into pure
// components, one per number of photons lost to the environment (the
// bright-mode damping Kraus operators).  Weights sum to 1; components are
// normalized.  This is the decomposition behind the closed two-photon forms.
PureMixture pure_state_mixture(const Ket& psi0, double decay_rate, double t);

// The three closed-form two-photon scenarios:
//   1: initial |02>            -> mixture of phi~(t), phi(t), |00>
//   2: initial (|02>+|20>-sqrt2|11>)/2, stationary
//   3: initial (|02>+|20>+sqrt2|11>)/2 -> bright two-photon decay cascade
struct TwoPhotonSolution {
  DensityMatrix rho;
  PureMixture mixture;
};

TwoPhotonSolution two_photon_solution(int scenario, double decay_rate,
                                      double t, const FockBasis& basis);

}  // namespace twocav
