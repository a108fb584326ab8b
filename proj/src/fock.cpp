#include "twocav/fock.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "twocav/errors.hpp"

namespace twocav {

FockBasis::FockBasis(int max_total) : max_total_(max_total) {
  if (max_total < 0) {
    throw std::invalid_argument("max_total must be >= 0, got " +
                                std::to_string(max_total));
  }
  states_.reserve((max_total + 1) * (max_total + 2) / 2);
  for (int s = 0; s <= max_total; ++s) {
    for (int n1 = 0; n1 <= s; ++n1) {
      states_.emplace_back(n1, s - n1);
    }
  }
}

const std::pair<int, int>& FockBasis::state(int index) const {
  if (index < 0 || index >= dim()) {
    throw std::invalid_argument("basis index " + std::to_string(index) +
                                " out of range [0, " + std::to_string(dim()) +
                                ")");
  }
  return states_[static_cast<size_t>(index)];
}

int FockBasis::index(int n1, int n2) const {
  if (!contains(n1, n2)) {
    throw std::invalid_argument("state (" + std::to_string(n1) + "," +
                                std::to_string(n2) +
                                ") outside truncation max_total=" +
                                std::to_string(max_total_));
  }
  const int s = n1 + n2;
  return s * (s + 1) / 2 + n1;
}

bool FockBasis::contains(int n1, int n2) const {
  return n1 >= 0 && n2 >= 0 && n1 + n2 <= max_total_;
}

Operator annihilation(const FockBasis& basis, int mode) {
  if (mode != 1 && mode != 2) {
    throw std::invalid_argument("mode must be 1 or 2");
  }
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    const auto [n1, n2] = basis.state(i);
    const int n = (mode == 1) ? n1 : n2;
    if (n == 0) continue;
    const int j = (mode == 1) ? basis.index(n1 - 1, n2) : basis.index(n1, n2 - 1);
    m(j, i) = std::sqrt(static_cast<double>(n));
  }
  return {basis, std::move(m)};
}

Operator creation(const FockBasis& basis, int mode) {
  Operator a = annihilation(basis, mode);
  return {basis, a.mat.adjoint()};
}

Operator number_op(const FockBasis& basis, int mode) {
  if (mode != 1 && mode != 2) {
    throw std::invalid_argument("mode must be 1 or 2");
  }
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    const auto [n1, n2] = basis.state(i);
    m(i, i) = static_cast<double>(mode == 1 ? n1 : n2);
  }
  return {basis, std::move(m)};
}

Operator total_number_op(const FockBasis& basis) {
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    const auto [n1, n2] = basis.state(i);
    m(i, i) = static_cast<double>(n1 + n2);
  }
  return {basis, std::move(m)};
}

Operator collective_mode(const FockBasis& basis) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Matrix m = inv_sqrt2 * (annihilation(basis, 1).mat + annihilation(basis, 2).mat);
  return {basis, std::move(m)};
}

Operator dark_mode(const FockBasis& basis) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Matrix m = inv_sqrt2 * (annihilation(basis, 1).mat - annihilation(basis, 2).mat);
  return {basis, std::move(m)};
}

Ket number_state(const FockBasis& basis, int n1, int n2) {
  Vector v = Vector::Zero(basis.dim());
  v(basis.index(n1, n2)) = 1.0;
  return {basis, std::move(v)};
}

Ket normalized(Ket ket) {
  const double n = ket.amp.norm();
  if (n < 1e-14) {
    throw InvariantError("cannot normalize a zero ket");
  }
  ket.amp /= n;
  return ket;
}

DensityMatrix pure_density(const Ket& psi) {
  const double n2 = psi.amp.squaredNorm();
  if (std::abs(n2 - 1.0) > 1e-12) {
    throw InvariantError("ket is not normalized: <psi|psi> = " +
                         std::to_string(n2));
  }
  return {psi.basis, psi.amp * psi.amp.adjoint()};
}

void check_density(const DensityMatrix& rho) {
  const auto fmt = [](double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
  };
  const Matrix& m = rho.mat;
  if (m.rows() != rho.basis.dim() || m.cols() != rho.basis.dim()) {
    throw InvariantError("density matrix dimension mismatch with basis");
  }
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) {
    throw InvariantError("density matrix not Hermitian: max |rho - rho^+| = " +
                         fmt(herm));
  }
  const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (tr_err > 1e-10) {
    throw InvariantError("density matrix trace deviates from 1 by " +
                         fmt(tr_err));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                           Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-9) {
    throw InvariantError("density matrix has negative eigenvalue " +
                         fmt(min_eig));
  }
}

double photon_number(const DensityMatrix& rho) {
  double total = 0.0;
  for (int i = 0; i < rho.basis.dim(); ++i) {
    const auto [n1, n2] = rho.basis.state(i);
    total += (n1 + n2) * rho.mat(i, i).real();
  }
  return total;
}

double fidelity_with_pure(const DensityMatrix& rho, const Ket& psi) {
  return (psi.amp.adjoint() * rho.mat * psi.amp)(0).real();
}

}  // namespace twocav
