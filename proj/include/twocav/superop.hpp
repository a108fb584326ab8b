#pragma once

#include <utility>
#include <vector>

#include "twocav/fock.hpp"

namespace twocav {

// Linear map on vectorized density matrices, column-stacking convention:
// vec(X rho Y) = (Y^T kron X) vec(rho).
struct SuperOperator {
  FockBasis basis;
  Matrix mat;  // dim^2 x dim^2
};

Vector vectorize(const Matrix& m);
Matrix devectorize(const Vector& v, int dim);

// rho -> X rho  and  rho -> rho X
SuperOperator lmul(const Operator& x);
SuperOperator rmul(const Operator& x);

Matrix act(const SuperOperator& s, const Matrix& rho);

// Dissipator assembled pair-by-pair from the physical modes,
//   (s/4) sum_{i,j in {1,2}} [2 a_i rho a_j+  -  a_j+ a_i rho  -  rho a_j+ a_i],
// i.e. per-pair rate s/2; the symmetric double sum then equals the
// collective-mode generator below exactly.
SuperOperator build_gamma_two_mode(double decay_rate, const FockBasis& basis);

// Same generator through the bright mode A = (a1+a2)/sqrt2:
//   (s/2) [2 A rho A+  -  A+A rho  -  rho A+A].
SuperOperator build_gamma_collective(double decay_rate, const FockBasis& basis);

// e^{G t}.  Uses the eigendecomposition of G when it reconstructs G at
// working precision, otherwise falls back to scaling-and-squaring.
class Propagator {
 public:
  explicit Propagator(SuperOperator generator);

  Vector apply(const Vector& v, double t) const;
  Matrix apply(const Matrix& rho, double t) const;
  Matrix at(double t) const;
  bool eigen_path() const { return diagonalizable_; }
  const SuperOperator& generator() const { return gen_; }

 private:
  SuperOperator gen_;
  bool diagonalizable_;
  Vector eigvals_;
  Matrix vecs_;
  Eigen::PartialPivLU<Matrix> vecs_lu_;
};

// Propagates rho0 through e^{Gamma t} for every time in `times` (ascending,
// >= 0).  Every returned state is validated; violations throw InvariantError.
std::vector<DensityMatrix> evolve_numeric(const DensityMatrix& rho0,
                                          double decay_rate,
                                          const std::vector<double>& times);

// Independent cross-check: classic fixed-step RK4 on the matrix-valued
// master equation assembled from the physical modes (never through the
// vectorized generator).  Step size satisfies decay_rate*h <= max_scaled_step.
std::vector<DensityMatrix> evolve_rk4(const DensityMatrix& rho0,
                                      double decay_rate,
                                      const std::vector<double>& times,
                                      double max_scaled_step = 1e-3);

Vector spectrum(const SuperOperator& s);

// Groups eigenvalues into clusters of radius `tol`; returns (center, count)
// sorted by descending real part.
std::vector<std::pair<Complex, int>> cluster_spectrum(const Vector& values,
                                                      double tol = 1e-8);

// Orthonormal basis of {v : Gv = 0} via SVD; singular values below
// tol * max(1, sigma_max) count as zero.
std::vector<Vector> null_space(const SuperOperator& s, double tol = 1e-10);

}  // namespace twocav
