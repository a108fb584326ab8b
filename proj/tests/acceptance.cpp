// Acceptance gate: end-to-end checks of the shipped behavior, one printed
// PASS/FAIL line per criterion.  Exit status is the number of failures.
//
// Unlike the unit suites, each criterion here exercises the public surface
// the way a study would: evolve a named initial state, compare against the
// independently derived closed form or an independent numerical route, and
// pin the agreed tolerance next to the check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/wait.h>
#endif

#include "twocav/algebra.hpp"
#include "twocav/dfs.hpp"
#include "twocav/entanglement.hpp"
#include "twocav/errors.hpp"
#include "twocav/fock.hpp"
#include "twocav/superop.hpp"

namespace {

using namespace twocav;

// All dynamics depend on decay rate and time only through s*t, so the gate
// fixes s = 1 and quotes times as scaled times.
constexpr double kDecayRate = 1.0;

constexpr double kEntryTol = 1e-8;        // element-wise density agreement
// The populations of the one-photon pair approach their limits like
// e^{-s t / 2} / 2 (the surviving bright amplitude enters linearly), which
// at s t = 30 is 1.53e-7.  The envelope below is the tight bound for those
// two entries; every other entry converges like e^{-s t} and must meet
// kEntryTol.
constexpr double kSlowDiagonalEnvelope = 2e-7;
constexpr double kSteadyConcurrenceTol = 1e-6;
constexpr double kDfsTol = 1e-10;         // stationarity of dark states
constexpr double kOracleTol = 1e-8;       // closed form vs numeric routes
constexpr double kSpectrumTol = 1e-8;
constexpr double kKernelTol = 1e-9;       // kernel vs dark-dyad projections
constexpr double kWeightTol = 1e-8;       // asymptotic mixture weights
constexpr double kEstarTol = 1e-5;
constexpr double kStationaryTol = 1e-10;  // two-photon dark-state drift
constexpr double kCommutatorTol = 1e-12;
constexpr double kGaugeOdeTol = 1e-6;     // central-difference flow residual
constexpr double kGeneratorIdentityTol = 1e-12;
constexpr double kPhotonMonotoneSlack = 1e-9;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Evolved trajectories accumulate here; the physicality criterion replays
// them through the density-matrix validator and the photon-number monotone.
struct Trajectory {
  std::string label;
  std::vector<DensityMatrix> states;  // ordered by ascending time
};

std::vector<Trajectory>& trajectories() {
  static std::vector<Trajectory> all;
  return all;
}

void record(std::string label, std::vector<DensityMatrix> states) {
  trajectories().push_back({std::move(label), std::move(states)});
}

std::vector<double> linspace(double t0, double t1, int points) {
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i)
    out[i] = t0 + (t1 - t0) * i / (points - 1);
  return out;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1e", x);
  return buf;
}

Ket single_photon_state(const FockBasis& basis, double a) {
  Vector v = Vector::Zero(basis.dim());
  v[basis.index(0, 1)] = a;
  v[basis.index(1, 0)] = std::sqrt(1.0 - a * a);
  return Ket{basis, v};
}

Ket two_photon_state(const FockBasis& basis, double a, double b, double c) {
  Vector v = Vector::Zero(basis.dim());
  v[basis.index(0, 2)] = a;
  v[basis.index(1, 1)] = b;
  v[basis.index(2, 0)] = c;
  return normalized(Ket{basis, v});
}

double concurrence(const DensityMatrix& rho) {
  return concurrence_2qubit(extract_qubit(rho));
}

// ---------------------------------------------------------------------------
// 1. A bare one-photon cavity (a = 0) is driven into the entangled steady
//    mixture: populations 1/2, 1/4, 1/4, coherence -1/4, concurrence 1/2.
Outcome steady_state_production() {
  const FockBasis basis(3);
  const DensityMatrix rho0 = pure_density(single_photon_state(basis, 0.0));
  const std::vector<double> times = linspace(0.0, 30.0, 31);
  const auto states = evolve_analytic(rho0, kDecayRate, times);
  const Matrix& rho = states.back().mat;

  const int i00 = basis.index(0, 0);
  const int i01 = basis.index(0, 1);
  const int i10 = basis.index(1, 0);

  Matrix target = Matrix::Zero(basis.dim(), basis.dim());
  target(i00, i00) = 0.5;
  target(i01, i01) = 0.25;
  target(i10, i10) = 0.25;
  const double sign = rho(i01, i10).real() < 0.0 ? -1.0 : 1.0;
  target(i01, i10) = sign * 0.25;
  target(i10, i01) = sign * 0.25;

  Matrix gap = rho - target;
  const double slow =
      std::max(std::abs(gap(i01, i01)), std::abs(gap(i10, i10)));
  gap(i01, i01) = 0.0;
  gap(i10, i10) = 0.0;
  const double fast = max_abs(gap);
  const double c_gap = std::abs(concurrence(states.back()) - 0.5);

  record("steady-state production, a=0", states);

  Outcome o;
  o.ok = fast <= kEntryTol && slow <= kSlowDiagonalEnvelope &&
         c_gap <= kSteadyConcurrenceTol;
  o.detail = "entry gap " + fmt(fast) + " (tol " + fmt(kEntryTol) +
             "), slow pair diagonals " + fmt(slow) + " (exact approach is " +
             "e^{-st/2}/2; envelope " + fmt(kSlowDiagonalEnvelope) +
             "), |C-1/2| " + fmt(c_gap);
  return o;
}

// ---------------------------------------------------------------------------
// 2. The antisymmetric one-photon state (a = -1/sqrt2) is decoherence-free:
//    frozen density matrix and concurrence 1 across the whole grid.
Outcome decoherence_free_state() {
  const FockBasis basis(3);
  const Ket psi = single_photon_state(basis, -1.0 / std::sqrt(2.0));
  const DensityMatrix rho0 = pure_density(psi);
  const auto states = evolve_analytic(rho0, kDecayRate, linspace(0, 10, 100));

  double drift = 0.0;
  double c_gap = 0.0;
  for (const auto& state : states) {
    drift = std::max(drift, max_abs(state.mat - rho0.mat));
    c_gap = std::max(c_gap, std::abs(concurrence(state) - 1.0));
  }
  record("decoherence-free state, a=-1/sqrt2", states);

  Outcome o;
  o.ok = drift <= kDfsTol && c_gap <= kDfsTol;
  o.detail = "state drift " + fmt(drift) + ", |C-1| " + fmt(c_gap) +
             " over 100 points (tol " + fmt(kDfsTol) + ")";
  return o;
}

// ---------------------------------------------------------------------------
// 3. The symmetric one-photon state (a = +1/sqrt2) decoheres completely:
//    C(t) = e^{-st} on the grid and the state drains into the vacuum.
Outcome full_decoherence() {
  const FockBasis basis(3);
  const DensityMatrix rho0 =
      pure_density(single_photon_state(basis, 1.0 / std::sqrt(2.0)));
  const auto grid = linspace(0, 10, 100);
  auto states = evolve_analytic(rho0, kDecayRate, grid);

  double c_gap = 0.0;
  for (size_t i = 0; i < grid.size(); ++i)
    c_gap = std::max(
        c_gap, std::abs(concurrence(states[i]) - std::exp(-grid[i])));

  const DensityMatrix late = evolve_analytic(rho0, kDecayRate, 30.0);
  Matrix vacuum = Matrix::Zero(basis.dim(), basis.dim());
  vacuum(basis.index(0, 0), basis.index(0, 0)) = 1.0;
  const double vac_gap = max_abs(late.mat - vacuum);

  states.push_back(late);
  record("full decoherence, a=+1/sqrt2", std::move(states));

  Outcome o;
  o.ok = c_gap <= kEntryTol && vac_gap <= kEntryTol;
  o.detail = "|C - e^{-st}| " + fmt(c_gap) + ", vacuum gap at st=30 " +
             fmt(vac_gap) + " (tol " + fmt(kEntryTol) + ")";
  return o;
}

// ---------------------------------------------------------------------------
// 4. Route equivalence: the closed-form solution, the eigendecomposed
//    generator exponential, and fixed-step RK4 on the raw master equation
//    agree element-wise for one- and two-photon families.
Outcome oracle_equivalence() {
  const FockBasis basis(3);
  const Propagator prop(build_gamma_two_mode(kDecayRate, basis));
  const std::vector<double> times = {0.0, 0.5, 1.0, 2.5, 5.0, 7.5, 10.0};

  double worst = 0.0;

  auto check = [&](const Ket& psi, const std::string& label) {
    const DensityMatrix rho0 = pure_density(psi);
    const auto analytic = evolve_analytic(rho0, kDecayRate, times);
    const auto rk4 = evolve_rk4(rho0, kDecayRate, times);
    for (size_t i = 0; i < times.size(); ++i) {
      const Matrix expm = prop.apply(rho0.mat, times[i]);
      worst = std::max(worst, max_abs(analytic[i].mat - expm));
      worst = std::max(worst, max_abs(analytic[i].mat - rk4[i].mat));
    }
    record(label, analytic);
  };

  for (int i = 0; i <= 20; ++i) {
    const double a = -1.0 + 0.1 * i;
    check(single_photon_state(basis, a),
          "one-photon family, a=" + std::to_string(a));
    // The printed closed form for this family is a fourth, independent route.
    const DensityMatrix rho0 = pure_density(single_photon_state(basis, a));
    for (double t : times)
      worst = std::max(
          worst, max_abs(single_photon_solution(a, kDecayRate, t, basis).mat -
                         prop.apply(rho0.mat, t)));
  }

  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<std::array<double, 3>> abc = {
      {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.5, -r, 0.5}, {0.5, r, 0.5}};
  for (const auto& [a, b, c] : abc)
    check(two_photon_state(basis, a, b, c),
          "two-photon family, a=" + std::to_string(a) +
              " b=" + std::to_string(b) + " c=" + std::to_string(c));

  // The enumerated two-photon closed forms against the propagator.
  for (int scenario : {1, 2, 3})
    for (double t : times) {
      const auto sol = two_photon_solution(scenario, kDecayRate, t, basis);
      const Ket psi0 =
          scenario == 1   ? two_photon_state(basis, 1.0, 0.0, 0.0)
          : scenario == 2 ? two_photon_state(basis, 0.5, -r, 0.5)
                          : two_photon_state(basis, 0.5, r, 0.5);
      worst = std::max(
          worst, max_abs(sol.rho.mat - prop.apply(pure_density(psi0).mat, t)));
    }

  Outcome o;
  o.ok = worst <= kOracleTol;
  o.detail = "max route gap " + fmt(worst) + " over 25 initial states x " +
             std::to_string(times.size()) + " times (tol " + fmt(kOracleTol) +
             ")";
  return o;
}

// ---------------------------------------------------------------------------
// 5. The generator's spectrum at truncation 3 is the predicted multiset
//    -(s/2) k with multiplicities 16, 24, 25, 20, 10, 4, 1 for k = 0..6.
Outcome spectrum_multiset() {
  const FockBasis basis(3);
  const SuperOperator gamma = build_gamma_two_mode(kDecayRate, basis);
  const Vector values = spectrum(gamma);

  std::vector<double> predicted = eigenvalue_multiset(kDecayRate, basis, +1);
  std::sort(predicted.begin(), predicted.end());

  std::vector<Complex> numeric(values.data(), values.data() + values.size());
  std::sort(numeric.begin(), numeric.end(),
            [](Complex x, Complex y) { return x.real() < y.real(); });

  double worst = 0.0;
  for (size_t i = 0; i < numeric.size(); ++i)
    worst = std::max(worst, std::abs(numeric[i] - predicted[i]));

  const auto clusters = cluster_spectrum(values, kSpectrumTol);
  const std::vector<int> expected_counts = {16, 24, 25, 20, 10, 4, 1};
  bool clusters_ok = clusters.size() == expected_counts.size();
  if (clusters_ok)
    for (size_t k = 0; k < clusters.size(); ++k)
      clusters_ok = clusters_ok && clusters[k].second == expected_counts[k] &&
                    std::abs(clusters[k].first - Complex(-0.5 * k, 0.0)) <=
                        kSpectrumTol;

  Outcome o;
  o.ok = worst <= kSpectrumTol && clusters_ok;
  o.detail = "max eigenvalue gap " + fmt(worst) + " (tol " +
             fmt(kSpectrumTol) + "), cluster sizes " +
             (clusters_ok ? "16/24/25/20/10/4/1 at -(s/2)k" : "MISMATCH");
  return o;
}

// ---------------------------------------------------------------------------
// 6. The stationary kernel at truncation 2 is exactly the span of the
//    dark-mode dyads: dimension 9 and mutual projection residual <= 1e-9.
Outcome kernel_matches_dark_dyads() {
  const FockBasis basis(2);
  const SuperOperator gamma = build_gamma_two_mode(kDecayRate, basis);
  const auto kernel = null_space(gamma);

  const auto dark = dark_basis(basis);
  Matrix dyads(basis.dim() * basis.dim(),
               static_cast<int>(dark.size() * dark.size()));
  int col = 0;
  for (const Ket& dn : dark)
    for (const Ket& dm : dark)
      dyads.col(col++) = vectorize(dn.amp * dm.amp.adjoint());

  Matrix null_mat(basis.dim() * basis.dim(), static_cast<int>(kernel.size()));
  for (size_t i = 0; i < kernel.size(); ++i)
    null_mat.col(static_cast<int>(i)) = kernel[i];

  double residual = 0.0;
  for (int i = 0; i < dyads.cols(); ++i) {
    const Vector d = dyads.col(i);
    residual = std::max(
        residual, (d - null_mat * (null_mat.adjoint() * d)).norm());
  }
  for (int i = 0; i < null_mat.cols(); ++i) {
    const Vector v = null_mat.col(i);
    residual =
        std::max(residual, (v - dyads * (dyads.adjoint() * v)).norm());
  }

  Outcome o;
  o.ok = kernel.size() == 9 && residual <= kKernelTol;
  o.detail = "kernel dimension " + std::to_string(kernel.size()) +
             " (want 9), mutual projection residual " + fmt(residual) +
             " (tol " + fmt(kKernelTol) + ")";
  return o;
}

// ---------------------------------------------------------------------------
// 7. Two-photon behavior: the |02> state relaxes to the derived three-part
//    mixture with weights (1/4, 1/2, 1/4) and E* = 0.738609; the dark
//    two-photon combination never moves; the bright one loses all
//    entanglement.
Outcome two_photon_mixtures() {
  const FockBasis basis(3);
  const auto grid = linspace(0, 10, 100);

  // |02> at late time: weights indexed by photons lost to the environment.
  const auto late = two_photon_solution(1, kDecayRate, 30.0, basis);
  const std::vector<double> want = {0.25, 0.5, 0.25};
  double weight_gap = 0.0;
  for (size_t k = 0; k < want.size(); ++k)
    weight_gap =
        std::max(weight_gap, std::abs(late.mixture[k].first - want[k]));
  const double estar_late = upper_bound_estar(late.mixture);
  const double estar_gap = std::abs(estar_late - 0.738609);

  std::vector<DensityMatrix> case1;
  for (double t : grid)
    case1.push_back(two_photon_solution(1, kDecayRate, t, basis).rho);
  case1.push_back(late.rho);
  record("two-photon relaxation of |02>", std::move(case1));

  // Dark two-photon combination: time-independent on the grid.
  const Matrix frozen = two_photon_solution(2, kDecayRate, 0.0, basis).rho.mat;
  double drift = 0.0;
  std::vector<DensityMatrix> case2;
  for (double t : grid) {
    case2.push_back(two_photon_solution(2, kDecayRate, t, basis).rho);
    drift = std::max(drift, max_abs(case2.back().mat - frozen));
  }
  record("stationary two-photon dark state", std::move(case2));

  // Bright two-photon combination: entanglement bound collapses to zero.
  const auto bright = two_photon_solution(3, kDecayRate, 30.0, basis);
  const double estar_bright = upper_bound_estar(bright.mixture);
  std::vector<DensityMatrix> case3;
  for (double t : grid)
    case3.push_back(two_photon_solution(3, kDecayRate, t, basis).rho);
  case3.push_back(bright.rho);
  record("two-photon bright-state decay", std::move(case3));

  Outcome o;
  o.ok = weight_gap <= kWeightTol && estar_gap <= kEstarTol &&
         drift <= kStationaryTol && estar_bright <= kEntryTol;
  o.detail = "weight gap " + fmt(weight_gap) + ", |E*-0.738609| " +
             fmt(estar_gap) + ", dark drift " + fmt(drift) +
             ", bright E* " + fmt(estar_bright);
  return o;
}

// ---------------------------------------------------------------------------
// 8. The algebraic scaffolding: ladder commutators close on the interior of
//    the truncated space, the gauge parameters solve their flow equations,
//    and the two assemblies of the generator coincide.
Outcome algebra_identities() {
  const FockBasis basis(3);
  const auto gens = build_generators(basis);

  auto commutator = [](const Matrix& x, const Matrix& y) -> Matrix {
    return x * y - y * x;
  };
  // Residual of a superoperator identity measured on dyads whose ket and
  // bra labels stay strictly inside the truncation, where ladder products
  // are exact.
  auto interior_residual = [&](const Matrix& d) {
    double worst = 0.0;
    for (int i = 0; i < basis.dim(); ++i)
      for (int j = 0; j < basis.dim(); ++j) {
        const auto [n1, n2] = basis.state(i);
        const auto [m1, m2] = basis.state(j);
        if (n1 + n2 >= basis.max_total() || m1 + m2 >= basis.max_total())
          continue;
        const Matrix dyad = number_state(basis, n1, n2).amp *
                            number_state(basis, m1, m2).amp.adjoint();
        worst = std::max(worst, (d * vectorize(dyad)).cwiseAbs().maxCoeff());
      }
    return worst;
  };

  double comm = 0.0;
  const auto& g = gens;
  comm = std::max(comm, interior_residual(commutator(g.k_zero.mat, g.k_plus.mat) - g.k_plus.mat));
  comm = std::max(comm, interior_residual(commutator(g.k_zero.mat, g.k_minus.mat) + g.k_minus.mat));
  comm = std::max(comm, interior_residual(commutator(g.k_minus.mat, g.k_plus.mat) - 2.0 * g.k_zero.mat));
  comm = std::max(comm, interior_residual(commutator(g.s_plus.mat, g.s_minus.mat) - 2.0 * g.s_zero.mat));
  comm = std::max(comm, interior_residual(commutator(g.s_zero.mat, g.s_plus.mat) - g.s_plus.mat));
  comm = std::max(comm, interior_residual(commutator(g.s_zero.mat, g.s_minus.mat) + g.s_minus.mat));
  comm = std::max(comm, interior_residual(commutator(g.n_total.mat, g.s_plus.mat)));
  comm = std::max(comm, interior_residual(commutator(g.n_total.mat, g.s_minus.mat)));
  comm = std::max(comm, interior_residual(commutator(g.n_total.mat, g.s_zero.mat)));
  comm = std::max(comm, interior_residual(commutator(g.n_total.mat, g.k_zero.mat)));
  comm = std::max(comm, interior_residual(commutator(g.n_total.mat, g.k_minus.mat) + g.k_minus.mat));
  comm = std::max(comm, interior_residual(commutator(g.n_total.mat, g.k_plus.mat) - g.k_plus.mat));

  // Central-difference residuals of the gauge flows
  //   a' = s (1 + a),  b+' = -(s/4)(1 - b+^2),  b-' = -(s/4)(1 + 2 b+ b-).
  double ode = 0.0;
  const double h = 1e-5;
  for (double s : {1.0, 0.7})
    for (double t : {0.05, 0.3, 1.0, 2.5, 5.0}) {
      const auto gm = gauge_params(t - h, s);
      const auto gc = gauge_params(t, s);
      const auto gp = gauge_params(t + h, s);
      const double da = (gp.alpha_minus - gm.alpha_minus) / (2 * h);
      const double dbp = (gp.beta_plus - gm.beta_plus) / (2 * h);
      const double dbm = (gp.beta_minus - gm.beta_minus) / (2 * h);
      const double ra = std::abs(da - s * (1.0 + gc.alpha_minus)) /
                        std::max(1.0, std::abs(da));
      const double rp = std::abs(dbp + 0.25 * s * (1.0 - gc.beta_plus * gc.beta_plus));
      const double rm = std::abs(dbm + 0.25 * s * (1.0 + 2.0 * gc.beta_plus * gc.beta_minus)) /
                        std::max(1.0, std::abs(dbm));
      ode = std::max({ode, ra, rp, rm});
    }

  // The two-mode double-sum dissipator, the collective-mode dissipator, and
  // the algebraic assembly are one and the same matrix.
  double ident = 0.0;
  for (double s : {1.0, 0.37}) {
    const Matrix two = build_gamma_two_mode(s, basis).mat;
    const Matrix coll = build_gamma_collective(s, basis).mat;
    const Matrix alg = gamma_from_generators(s, gens).mat;
    ident = std::max({ident, max_abs(two - coll), max_abs(alg - coll)});
  }

  Outcome o;
  o.ok = comm <= kCommutatorTol && ode <= kGaugeOdeTol &&
         ident <= kGeneratorIdentityTol;
  o.detail = "commutator residual " + fmt(comm) + " (tol " +
             fmt(kCommutatorTol) + "), gauge flow residual " + fmt(ode) +
             " (tol " + fmt(kGaugeOdeTol) + "), assembly gap " + fmt(ident);
  return o;
}

// ---------------------------------------------------------------------------
// 9. Every state evolved by criteria 1-7 is a physical density matrix and
//    never gains photons.
Outcome physicality_suite() {
  int states_checked = 0;
  int violations = 0;
  double worst_gain = 0.0;
  std::string first_violation;

  for (const auto& traj : trajectories()) {
    double previous = -1.0;
    for (const auto& state : traj.states) {
      ++states_checked;
      try {
        check_density(state);
      } catch (const InvariantError& e) {
        ++violations;
        if (first_violation.empty())
          first_violation = traj.label + ": " + e.what();
      }
      const double photons = photon_number(state);
      if (previous >= 0.0)
        worst_gain = std::max(worst_gain, photons - previous);
      previous = photons;
    }
  }

  Outcome o;
  o.ok = violations == 0 && worst_gain <= kPhotonMonotoneSlack;
  o.detail = std::to_string(states_checked) + " states across " +
             std::to_string(trajectories().size()) +
             " trajectories, max photon-number gain " + fmt(worst_gain) +
             (violations ? ", first violation: " + first_violation : "");
  return o;
}

// ---------------------------------------------------------------------------
// 10. The CLI reproduces every figure byte-for-byte across runs and the
//     compare subcommand accepts every shipped preset.
int exit_code(int status) {
#if defined(WIFEXITED)
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  return status;
#endif
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const std::string cli = TWOCAV_CLI_PATH;
  const std::string presets = TWOCAV_PRESET_DIR;
  const fs::path work = "acceptance_artifacts";
  fs::remove_all(work);
  fs::create_directories(work);

  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " >> \"" +
                            (work / "cli.log").string() + "\" 2>&1";
    return exit_code(std::system(cmd.c_str()));
  };

  Outcome o;
  const int first =
      run("figures all --presets \"" + presets + "\" --out \"" +
          (work / "one").string() + "\"");
  const int second =
      run("figures all --presets \"" + presets + "\" --out \"" +
          (work / "two").string() + "\"");
  if (first != 0 || second != 0) {
    o.ok = false;
    o.detail = "figures subcommand failed (exit " + std::to_string(first) +
               "/" + std::to_string(second) + ")";
    return o;
  }

  int identical = 0;
  int compared_ok = 0;
  const std::vector<std::string> names = {"fig1", "fig2", "fig3", "fig4",
                                          "fig5", "fig6", "fig7"};
  for (const auto& name : names) {
    const std::string a = slurp(work / "one" / (name + ".csv"));
    const std::string b = slurp(work / "two" / (name + ".csv"));
    if (!a.empty() && a == b) ++identical;
    if (run("compare --config \"" + presets + "/" + name + ".cfg\" --out \"" +
            (work / ("cmp_" + name)).string() + "\"") == 0)
      ++compared_ok;
  }

  o.ok = identical == static_cast<int>(names.size()) &&
         compared_ok == static_cast<int>(names.size());
  o.detail = std::to_string(identical) + "/7 figure tables byte-identical, " +
             std::to_string(compared_ok) + "/7 presets pass compare";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> gate = {
      {"steady entanglement from a product state", steady_state_production},
      {"decoherence-free one-photon state", decoherence_free_state},
      {"complete decoherence of the symmetric state", full_decoherence},
      {"closed form vs generator exponential vs RK4", oracle_equivalence},
      {"generator spectrum multiset at truncation 3", spectrum_multiset},
      {"stationary kernel equals dark-mode dyads", kernel_matches_dark_dyads},
      {"two-photon mixtures and entanglement bounds", two_photon_mixtures},
      {"algebra closure, gauge flows, assembly identity", algebra_identities},
      {"physicality of every evolved state", physicality_suite},
      {"CLI figure determinism and preset comparisons", cli_determinism},
  };

  int failures = 0;
  for (size_t i = 0; i < gate.size(); ++i) {
    Outcome outcome;
    try {
      outcome = gate[i].second();
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (!outcome.ok) ++failures;
    std::printf("%s  criterion %2zu  %-46s  %s\n",
                outcome.ok ? "PASS" : "FAIL", i + 1, gate[i].first,
                outcome.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(gate.size()) - failures, gate.size());
  return failures;
}
