#include "twocav/superop.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twocav/errors.hpp"

namespace twocav {

Vector vectorize(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix devectorize(const Vector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw std::invalid_argument("vector length does not match dim^2");
  }
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

SuperOperator lmul(const Operator& x) {
  const int d = x.basis.dim();
  Matrix id = Matrix::Identity(d, d);
  return {x.basis, Eigen::kroneckerProduct(id, x.mat)};
}

SuperOperator rmul(const Operator& x) {
  const int d = x.basis.dim();
  Matrix id = Matrix::Identity(d, d);
  Matrix xt = x.mat.transpose();
  return {x.basis, Eigen::kroneckerProduct(xt, id)};
}

Matrix act(const SuperOperator& s, const Matrix& rho) {
  return devectorize(s.mat * vectorize(rho), s.basis.dim());
}

SuperOperator build_gamma_two_mode(double decay_rate, const FockBasis& basis) {
  const Matrix a[2] = {annihilation(basis, 1).mat, annihilation(basis, 2).mat};
  const int d = basis.dim();
  Matrix g = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Matrix drain = a[j].adjoint() * a[i];
      g += 2.0 * lmul({basis, a[i]}).mat * rmul({basis, a[j].adjoint()}).mat;
      g -= lmul({basis, drain}).mat;
      g -= rmul({basis, drain}).mat;
    }
  }
  g *= decay_rate / 4.0;
  return {basis, std::move(g)};
}

SuperOperator build_gamma_collective(double decay_rate,
                                     const FockBasis& basis) {
  const Matrix A = collective_mode(basis).mat;
  const Matrix n = A.adjoint() * A;
  Matrix g = 2.0 * lmul({basis, A}).mat * rmul({basis, A.adjoint()}).mat -
             lmul({basis, n}).mat - rmul({basis, n}).mat;
  g *= decay_rate / 2.0;
  return {basis, std::move(g)};
}

Propagator::Propagator(SuperOperator generator)
    : gen_(std::move(generator)), diagonalizable_(false) {
  Eigen::ComplexEigenSolver<Matrix> es(gen_.mat);
  if (es.info() != Eigen::Success) return;
  const Matrix& v = es.eigenvectors();
  Eigen::PartialPivLU<Matrix> lu(v);
  // Residual test: does V D V^{-1} reproduce the generator at working
  // precision?  Heavy eigenvalue degeneracy can defeat the solver even
  // though the generator is diagonalizable in exact arithmetic.
  Matrix recon = v * es.eigenvalues().asDiagonal() * lu.inverse();
  const double scale = std::max(1.0, gen_.mat.cwiseAbs().maxCoeff());
  if ((recon - gen_.mat).cwiseAbs().maxCoeff() <= 1e-11 * scale) {
    diagonalizable_ = true;
    eigvals_ = es.eigenvalues();
    vecs_ = v;
    vecs_lu_ = std::move(lu);
  }
}

Vector Propagator::apply(const Vector& v, double t) const {
  if (diagonalizable_) {
    Vector y = vecs_lu_.solve(v);
    y.array() *= (eigvals_.array() * t).exp();
    return vecs_ * y;
  }
  return at(t) * v;
}

Matrix Propagator::apply(const Matrix& rho, double t) const {
  return devectorize(apply(vectorize(rho), t), gen_.basis.dim());
}

Matrix Propagator::at(double t) const {
  if (diagonalizable_) {
    Matrix d = (eigvals_.array() * t).exp().matrix().asDiagonal();
    return vecs_ * d * vecs_lu_.inverse();
  }
  return Matrix(gen_.mat * t).exp();
}

std::vector<DensityMatrix> evolve_numeric(const DensityMatrix& rho0,
                                          double decay_rate,
                                          const std::vector<double>& times) {
  check_density(rho0);
  Propagator prop(build_gamma_collective(decay_rate, rho0.basis));
  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  double prev = 0.0;
  for (double t : times) {
    if (t < 0.0 || t < prev) {
      throw std::invalid_argument("times must be ascending and >= 0");
    }
    prev = t;
    DensityMatrix rho{rho0.basis, prop.apply(rho0.mat, t)};
    check_density(rho);
    out.push_back(std::move(rho));
  }
  return out;
}

std::vector<DensityMatrix> evolve_rk4(const DensityMatrix& rho0,
                                      double decay_rate,
                                      const std::vector<double>& times,
                                      double max_scaled_step) {
  check_density(rho0);
  if (max_scaled_step <= 0.0) {
    throw std::invalid_argument("max_scaled_step must be positive");
  }
  const Matrix S =
      annihilation(rho0.basis, 1).mat + annihilation(rho0.basis, 2).mat;
  const Matrix Sd = S.adjoint();
  const Matrix D = Sd * S;
  const double quarter = decay_rate / 4.0;
  auto rhs = [&](const Matrix& r) -> Matrix {
    return quarter * (2.0 * S * r * Sd - D * r - r * D);
  };

  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  Matrix rho = rho0.mat;
  double t_now = 0.0;
  Matrix k1, k2, k3, k4;
  for (double t : times) {
    if (t < 0.0 || t < t_now) {
      throw std::invalid_argument("times must be ascending and >= 0");
    }
    const double span = t - t_now;
    if (span > 0.0) {
      const int steps = std::max(
          1, static_cast<int>(std::ceil(span * decay_rate / max_scaled_step)));
      const double h = span / steps;
      for (int k = 0; k < steps; ++k) {
        k1 = rhs(rho);
        k2 = rhs(rho + 0.5 * h * k1);
        k3 = rhs(rho + 0.5 * h * k2);
        k4 = rhs(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      t_now = t;
    }
    DensityMatrix snap{rho0.basis, rho};
    check_density(snap);
    out.push_back(std::move(snap));
  }
  return out;
}

Vector spectrum(const SuperOperator& s) {
  Eigen::ComplexEigenSolver<Matrix> es(s.mat, false);
  if (es.info() != Eigen::Success) {
    throw InvariantError("eigenvalue computation failed");
  }
  return es.eigenvalues();
}

std::vector<std::pair<Complex, int>> cluster_spectrum(const Vector& values,
                                                      double tol) {
  std::vector<Complex> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });
  std::vector<std::pair<Complex, int>> clusters;
  for (const Complex& v : sorted) {
    if (!clusters.empty() && std::abs(v - clusters.back().first) <= tol) {
      ++clusters.back().second;
    } else {
      clusters.emplace_back(v, 1);
    }
  }
  return clusters;
}

std::vector<Vector> null_space(const SuperOperator& s, double tol) {
  Eigen::JacobiSVD<Matrix> svd(s.mat, Eigen::ComputeFullV);
  const auto& sing = svd.singularValues();
  const double cutoff =
      tol * std::max(1.0, sing.size() > 0 ? sing(0) : 0.0);
  std::vector<Vector> kernel;
  for (Eigen::Index i = 0; i < sing.size(); ++i) {
    if (sing(i) <= cutoff) {
      kernel.push_back(svd.matrixV().col(i));
    }
  }
  return kernel;
}

}  // namespace twocav
