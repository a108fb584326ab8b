#include "twocav/dfs.hpp"

#include <stdexcept>

#include "twocav/algebra.hpp"
#include "twocav/errors.hpp"

namespace twocav {

std::vector<Ket> dark_basis(const FockBasis& basis) {
  std::vector<Ket> kets;
  kets.reserve(basis.max_total() + 1);
  for (int n = 0; n <= basis.max_total(); ++n)
    kets.push_back(dark_ket(basis, n));
  return kets;
}

Matrix stso_state(int n, int m, int branch, const FockBasis& basis) {
  if (branch != 1 && branch != -1)
    throw std::invalid_argument("stso_state: branch must be +1 or -1");
  if (n < 0 || m < 0 || n > basis.max_total() || m > basis.max_total())
    throw std::invalid_argument("stso_state: labels outside truncation");

  const auto gens = build_generators(basis);
  const Ket ket = branch == 1 ? number_state(basis, n, 0)
                              : number_state(basis, 0, n);
  const Ket bra = branch == 1 ? number_state(basis, m, 0)
                              : number_state(basis, 0, m);
  const Matrix u = similarity_u1(-1.0, gens).mat *
                   similarity_u2(branch, -0.5 * branch, gens).mat;
  Matrix out =
      devectorize(u * vectorize(ket.amp * bra.amp.adjoint()), basis.dim());
  const double norm = out.norm();
  if (norm == 0.0)
    throw InvariantError("stso_state: construction collapsed to zero");
  return out / norm;
}

DfsCertificate certify(const Matrix& state, double decay_rate,
                       const FockBasis& basis) {
  if (state.rows() != basis.dim() || state.cols() != basis.dim())
    throw std::invalid_argument("certify: state dimension mismatch");
  const double norm = state.norm();
  if (norm == 0.0) throw std::invalid_argument("certify: zero state");

  const SuperOperator gamma = build_gamma_collective(decay_rate, basis);
  const double gen_res = act(gamma, state).norm() / norm;

  const Propagator prop(gamma);
  double evo_res = 0.0;
  for (double st : {1.0, 10.0}) {
    const Matrix evolved = prop.apply(state, st / decay_rate);
    evo_res = std::max(evo_res, (evolved - state).norm() / norm);
  }

  return DfsCertificate{state, gen_res, evo_res,
                        gen_res <= kDfsGeneratorTol &&
                            evo_res <= kDfsEvolutionTol};
}

}  // namespace twocav
