#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "twocav/algebra.hpp"
#include "twocav/dfs.hpp"
#include "twocav/entanglement.hpp"
#include "twocav/errors.hpp"
#include "twocav/scenario.hpp"
#include "twocav/superop.hpp"

namespace py = pybind11;
using namespace twocav;

namespace {

// Recover the truncation from a matrix dimension (N+1)(N+2)/2.
FockBasis basis_for_dim(Eigen::Index dim) {
  for (int n = 0; n <= 64; ++n) {
    const Eigen::Index d = (n + 1) * (n + 2) / 2;
    if (d == dim) return FockBasis(n);
    if (d > dim) break;
  }
  throw std::invalid_argument(
      "matrix dimension is not a total-photon-truncated space size "
      "(expected (N+1)(N+2)/2)");
}

DensityMatrix as_density(const Matrix& rho) {
  DensityMatrix out{basis_for_dim(rho.rows()), rho};
  check_density(out);
  return out;
}

Ket as_ket(const Vector& amp) { return normalized(Ket{basis_for_dim(amp.size()), amp}); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Dissipative dynamics of two single-mode cavities in a common "
      "Markovian environment: closed-form evolution, numerical propagator, "
      "entanglement measures and decoherence-free-subspace certificates";
#ifdef TWOCAV_VERSION
  m.attr("__version__") = TWOCAV_VERSION;
#else
  m.attr("__version__") = "dev";
#endif

  py::register_exception<InvariantError>(m, "InvariantError");
  py::register_exception<ConfigError>(m, "ConfigError");

  py::class_<FockBasis>(m, "FockBasis",
                        "Two-mode photon-number basis truncated by total "
                        "photon number; lexicographic in (n1+n2, n1)")
      .def(py::init<int>(), py::arg("max_total"))
      .def_property_readonly("dim", &FockBasis::dim)
      .def_property_readonly("max_total", &FockBasis::max_total)
      .def("index", &FockBasis::index, py::arg("n1"), py::arg("n2"))
      .def("state",
           [](const FockBasis& b, int i) { return b.state(i); },
           py::arg("index"))
      .def("__len__", &FockBasis::dim)
      .def("__repr__", [](const FockBasis& b) {
        return "FockBasis(max_total=" + std::to_string(b.max_total()) + ")";
      });

  m.def(
      "single_photon_ket",
      [](double a, int truncation) {
        return initial_ket(SinglePhotonInit{a}, FockBasis(truncation))->amp;
      },
      py::arg("a"), py::arg("truncation") = 3,
      "a|01> + sqrt(1-a^2)|10> as an amplitude vector");
  m.def(
      "two_photon_ket",
      [](double a, double b, double c, int truncation) {
        return initial_ket(TwoPhotonInit{a, b, c}, FockBasis(truncation))
            ->amp;
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("truncation") = 3,
      "a|02> + b|11> + c|20> as an amplitude vector");
  m.def(
      "number_ket",
      [](int n1, int n2, int truncation) {
        return number_state(FockBasis(truncation), n1, n2).amp;
      },
      py::arg("n1"), py::arg("n2"), py::arg("truncation") = 3);
  m.def(
      "dark_ket",
      [](int n, int truncation) {
        return dark_ket(FockBasis(truncation), n).amp;
      },
      py::arg("n"), py::arg("truncation") = 3,
      "n-quanta state of the antisymmetric (dark) mode");
  m.def(
      "pure_density",
      [](const Vector& psi) { return pure_density(as_ket(psi)).mat; },
      py::arg("psi"));

  m.def(
      "evolve_analytic",
      [](const Matrix& rho, double decay_rate, double t) {
        return evolve_analytic(as_density(rho), decay_rate, t).mat;
      },
      py::arg("rho"), py::arg("decay_rate"), py::arg("t"),
      "Closed-form dissipative evolution of a density matrix");
  m.def(
      "evolve_numeric",
      [](const Matrix& rho, double decay_rate, const std::vector<double>& ts) {
        std::vector<Matrix> out;
        for (auto& r : evolve_numeric(as_density(rho), decay_rate, ts))
          out.push_back(r.mat);
        return out;
      },
      py::arg("rho"), py::arg("decay_rate"), py::arg("times"),
      "Independent matrix-exponential propagation at each listed time");
  m.def(
      "single_photon_solution",
      [](double a, double decay_rate, double t, int truncation) {
        return single_photon_solution(a, decay_rate, t, FockBasis(truncation))
            .mat;
      },
      py::arg("a"), py::arg("decay_rate"), py::arg("t"),
      py::arg("truncation") = 3,
      "Closed-form one-photon density matrix for a|01> + sqrt(1-a^2)|10>");

  m.def(
      "concurrence",
      [](const Matrix& rho) {
        return concurrence_2qubit(extract_qubit(as_density(rho)));
      },
      py::arg("rho"),
      "Two-qubit concurrence of the one-photon-sector state");
  m.def("eof_from_concurrence", &eof_from_concurrence, py::arg("c"),
        "Entanglement of formation h((1 + sqrt(1-C^2))/2) in bits");
  m.def(
      "estar",
      [](const Vector& psi0, double decay_rate, double t) {
        return upper_bound_estar(
            pure_state_mixture(as_ket(psi0), decay_rate, t));
      },
      py::arg("psi0"), py::arg("decay_rate"), py::arg("t"),
      "Convexity upper bound on the entanglement of the evolved state");

  m.def(
      "spectrum",
      [](double decay_rate, int truncation) {
        return spectrum(
            build_gamma_two_mode(decay_rate, FockBasis(truncation)));
      },
      py::arg("decay_rate"), py::arg("truncation") = 3,
      "Eigenvalues of the dissipative generator");
  m.def(
      "kernel_dimension",
      [](double decay_rate, int truncation) {
        return null_space(
                   build_gamma_two_mode(decay_rate, FockBasis(truncation)))
            .size();
      },
      py::arg("decay_rate"), py::arg("truncation") = 3,
      "Dimension of the generator's stationary subspace");
  m.def(
      "certify_dark_dyad",
      [](int n, int mm, double decay_rate, int truncation) {
        const FockBasis basis(truncation);
        const auto dark = dark_basis(basis);
        if (n < 0 || mm < 0 || n >= static_cast<int>(dark.size()) ||
            mm >= static_cast<int>(dark.size()))
          throw std::invalid_argument("dark label outside the truncation");
        const Matrix dyad = dark[n].amp * dark[mm].amp.adjoint();
        const DfsCertificate cert = certify(dyad, decay_rate, basis);
        return py::make_tuple(cert.generator_residual,
                              cert.evolution_residual, cert.passed);
      },
      py::arg("n"), py::arg("m"), py::arg("decay_rate"),
      py::arg("truncation") = 3,
      "(generator residual, evolution residual, passed) for |dark_n><dark_m|");

  m.def(
      "run_config",
      [](const std::string& text, double tolerance) {
        const ScenarioRun run = run_scenario(parse_config(text));
        return summarize(run, tolerance).dump(2);
      },
      py::arg("text"), py::arg("tolerance") = 1e-8,
      "Run a scenario config (INI text) and return the JSON summary");
}
