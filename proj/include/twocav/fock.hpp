#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

namespace twocav {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Two-mode photon-number space truncated by total photon number
// n1 + n2 <= max_total.  The truncation is exact for purely dissipative
// dynamics: the generator only ever lowers the total photon number.
//
// Basis order is lexicographic in (n1 + n2, n1):
//   |00>, |01>, |10>, |02>, |11>, |20>, ...
class FockBasis {
 public:
  explicit FockBasis(int max_total);

  int max_total() const { return max_total_; }
  int dim() const { return static_cast<int>(states_.size()); }

  // index -> (n1, n2)
  const std::pair<int, int>& state(int index) const;
  // (n1, n2) -> index; throws std::invalid_argument outside the truncation
  int index(int n1, int n2) const;
  bool contains(int n1, int n2) const;

  bool operator==(const FockBasis& other) const {
    return max_total_ == other.max_total_;
  }

 private:
  int max_total_;
  std::vector<std::pair<int, int>> states_;
};

struct Ket {
  FockBasis basis;
  Vector amp;  // amp[i] multiplies basis.state(i)
};

struct Operator {
  FockBasis basis;
  Matrix mat;  // dim x dim
};

struct DensityMatrix {
  FockBasis basis;
  Matrix mat;  // dim x dim
};

// Mode is 1 or 2.
Operator annihilation(const FockBasis& basis, int mode);
Operator creation(const FockBasis& basis, int mode);  // truncated adjoint
Operator number_op(const FockBasis& basis, int mode);
Operator total_number_op(const FockBasis& basis);

// Collective (bright) mode A = (a1 + a2)/sqrt(2) and its orthogonal
// dark partner B = (a1 - a2)/sqrt(2).
Operator collective_mode(const FockBasis& basis);
Operator dark_mode(const FockBasis& basis);

Ket number_state(const FockBasis& basis, int n1, int n2);
Ket normalized(Ket ket);  // throws InvariantError on (near-)zero vectors

// |psi><psi|; requires |<psi|psi> - 1| <= 1e-12.
DensityMatrix pure_density(const Ket& psi);

// Throws InvariantError unless Hermitian (1e-10), unit trace (1e-10) and
// positive semidefinite (eigenvalues >= -1e-9).  Violations are reported,
// never silently repaired.
void check_density(const DensityMatrix& rho);

// Re(Tr[(n1 + n2) rho])
double photon_number(const DensityMatrix& rho);

double fidelity_with_pure(const DensityMatrix& rho, const Ket& psi);

}  // namespace twocav
