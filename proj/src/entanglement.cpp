#include "twocav/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "twocav/errors.hpp"

namespace twocav {
namespace {

void check_qubit_density(const Matrix& m) {
  if (m.rows() != 4 || m.cols() != 4)
    throw InvariantError("qubit density must be 4 x 4");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw InvariantError("qubit density not Hermitian");
  if (std::abs(m.trace() - Complex(1.0)) > 1e-10)
    throw InvariantError("qubit density trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw InvariantError("qubit density has a negative eigenvalue");
}

Matrix spin_flip_matrix() {
  // sigma_y x sigma_y in {|00>,|01>,|10>,|11>}: real anti-diagonal.
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  return yy;
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// Fraction of |psi|^2 outside states with n1 <= cap and n2 <= cap.
double leakage_above(const Ket& psi, int cap) {
  double out = 0.0;
  for (int i = 0; i < psi.basis.dim(); ++i) {
    const auto [n1, n2] = psi.basis.state(i);
    if (n1 > cap || n2 > cap) out += std::norm(psi.amp[i]);
  }
  return out;
}

}  // namespace

QubitDensity extract_qubit(const DensityMatrix& rho) {
  const FockBasis& basis = rho.basis;
  double leakage = 0.0;
  for (int i = 0; i < basis.dim(); ++i) {
    const auto [n1, n2] = basis.state(i);
    if (n1 > 1 || n2 > 1) leakage += rho.mat(i, i).real();
  }
  if (leakage > 1e-10)
    throw InvariantError("population outside the qubit block: " +
                         std::to_string(leakage));

  const std::array<std::pair<int, int>, 4> labels = {
      {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  Matrix q = Matrix::Zero(4, 4);
  for (int r = 0; r < 4; ++r) {
    if (!basis.contains(labels[r].first, labels[r].second)) continue;
    for (int c = 0; c < 4; ++c) {
      if (!basis.contains(labels[c].first, labels[c].second)) continue;
      q(r, c) = rho.mat(basis.index(labels[r].first, labels[r].second),
                        basis.index(labels[c].first, labels[c].second));
    }
  }
  // Renormalize away the sub-1e-10 leakage so downstream checks see an
  // exactly unit trace.
  q /= q.trace().real();
  return QubitDensity{std::move(q)};
}

double concurrence_2qubit(const QubitDensity& rho) {
  check_qubit_density(rho.mat);
  // lambda_i are the singular values of the complex symmetric matrix
  // tau = Psi^T (sy x sy) Psi, with Psi the subnormalized eigenvectors of
  // rho.  These equal the square roots of the eigenvalues of rho rho~, but
  // the Hermitian eigensolve + SVD stay accurate where a non-Hermitian
  // eigensolve of the product loses ~sqrt(eps) on degenerate pairs.
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 *
                                           (rho.mat + rho.mat.adjoint()));
  const Eigen::VectorXd probs = es.eigenvalues().cwiseMax(0.0);
  const Matrix psi =
      es.eigenvectors() * probs.cwiseSqrt().asDiagonal();
  const Matrix tau = psi.transpose() * spin_flip_matrix() * psi;

  Eigen::JacobiSVD<Matrix> svd(tau);
  const auto& lambda = svd.singularValues();  // descending
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double concurrence_offdiag(Complex rho_off) { return 2.0 * std::abs(rho_off); }

SchmidtTriple schmidt_coefficients(const Ket& psi) {
  if (std::abs(psi.amp.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("schmidt_coefficients: state not normalized");
  if (leakage_above(psi, 2) > 1e-10)
    throw InvariantError(
        "schmidt_coefficients: support outside the 3 x 3 block");

  Matrix m = Matrix::Zero(3, 3);
  for (int n1 = 0; n1 <= 2; ++n1)
    for (int n2 = 0; n2 <= 2; ++n2)
      if (psi.basis.contains(n1, n2))
        m(n1, n2) = psi.amp[psi.basis.index(n1, n2)];

  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return SchmidtTriple{s[0], s[1], s[2]};
}

double concurrence_qutrit_pure(const SchmidtTriple& k) {
  const double s12 = k.k1 * k.k1 * k.k2 * k.k2;
  const double s13 = k.k1 * k.k1 * k.k3 * k.k3;
  const double s23 = k.k2 * k.k2 * k.k3 * k.k3;
  return std::min(1.0, std::sqrt(3.0 * (s12 + s13 + s23)));
}

double eof_from_concurrence(double c) {
  if (c < -1e-12 || c > 1.0 + 1e-12)
    throw std::invalid_argument("eof_from_concurrence: c outside [0, 1]");
  c = std::clamp(c, 0.0, 1.0);
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  return binary_entropy(x);
}

double upper_bound_estar(const PureMixture& mixture) {
  double total = 0.0;
  for (const auto& [weight, psi] : mixture) {
    if (weight < 0.0)
      throw std::invalid_argument("upper_bound_estar: negative weight");
    if (std::abs(psi.amp.norm() - 1.0) > 1e-10)
      throw std::invalid_argument(
          "upper_bound_estar: component not normalized");
    total += weight;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw std::invalid_argument("upper_bound_estar: weights do not sum to 1");

  double estar = 0.0;
  for (const auto& [weight, psi] : mixture) {
    if (weight == 0.0) continue;
    double c;
    if (leakage_above(psi, 1) <= 1e-10) {
      // Direct dyad: components are vetted to 1e-10 above, slightly looser
      // than pure_density's own normalization gate.
      const DensityMatrix dyad{psi.basis, psi.amp * psi.amp.adjoint()};
      c = concurrence_2qubit(extract_qubit(dyad));
    } else if (leakage_above(psi, 2) <= 1e-10) {
      c = concurrence_qutrit_pure(schmidt_coefficients(psi));
    } else {
      throw InvariantError(
          "upper_bound_estar: component support exceeds the 3 x 3 block");
    }
    estar += weight * eof_from_concurrence(c);
  }
  return estar;
}

}  // namespace twocav
