#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "twocav/algebra.hpp"
#include "twocav/dfs.hpp"
#include "twocav/errors.hpp"
#include "twocav/fock.hpp"

namespace twocav {

// Scenario configs are flat INI-style text:
//
//   # comment (also ';')
//   [scenario]
//   decay_rate = 1.0
//   truncation = 3
//
//   [initial]
//   type = single_photon        # or two_photon, fock, custom
//   a = 0.0                     # single_photon: a|01> + sqrt(1-a^2)|10>
//   # two_photon: a, b, c  with a|02> + b|11> + c|20>, a^2+b^2+c^2 = 1
//   # fock: n1, n2
//   # custom: repeatable  term = n1 n2 m1 m2 re im
//
//   [time]
//   t_max = 10.0
//   steps = 101                 # number of sample points incl. both ends
//
//   [outputs]
//   quantity = density          # repeatable: density, concurrence, estar,
//                               # spectrum, dfs
//
//   [sweep]                     # optional
//   a = -1 -0.75 ... 1          # single_photon only: one trace per value
//   curve = label a b c         # two_photon only, repeatable
//
//   [compare]                   # optional, fault injection for `compare`
//   numeric_decay_rate = 1.05   # numeric route uses this rate instead
//
// Unknown sections/keys and malformed values raise ConfigError carrying the
// line number; semantic violations carry the field name instead.
struct SinglePhotonInit {
  double a = 0.0;
};
struct TwoPhotonInit {
  double a = 0.0, b = 0.0, c = 0.0;
};
struct FockInit {
  int n1 = 0, n2 = 0;
};
struct CustomTerm {
  int n1, n2, m1, m2;
  Complex coeff;
};
struct CustomInit {
  std::vector<CustomTerm> terms;
};
using InitialState =
    std::variant<SinglePhotonInit, TwoPhotonInit, FockInit, CustomInit>;

enum class OutputKind { density, concurrence, estar, spectrum, dfs };

struct TimeGrid {
  double t_max = 10.0;
  int steps = 101;
  std::vector<double> times() const;  // uniform, 0 .. t_max inclusive
};

struct TwoPhotonCurve {
  std::string label;
  double a, b, c;
};

struct ScenarioConfig {
  double decay_rate = 1.0;
  int truncation = 3;
  InitialState initial_state = SinglePhotonInit{};
  TimeGrid time_grid;
  std::set<OutputKind> outputs = {OutputKind::density};
  std::vector<double> sweep_a;             // single_photon sweeps
  std::vector<TwoPhotonCurve> sweep_curves;  // two_photon sweeps
  std::optional<double> numeric_decay_rate;  // compare fault injection
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& file);

// Semantic checks (amplitude domains, normalization, truncation bounds,
// output/initial-state compatibility).  Throws ConfigError.
void validate_config(const ScenarioConfig& cfg);

// The configured initial state as a ket when it is pure by construction
// (everything except custom).
std::optional<Ket> initial_ket(const InitialState& init,
                               const FockBasis& basis);
DensityMatrix initial_density(const InitialState& init,
                              const FockBasis& basis);

// One simulated time point.  The density is the closed-form route; the gap
// is the max element-wise distance to the independently propagated
// matrix-exponential route.
struct TrajectoryRecord {
  double scaled_time;  // decay_rate * t, the unit used in all outputs
  DensityMatrix density;
  std::optional<double> concurrence;
  std::optional<double> estar;
  double analytic_numeric_gap = 0.0;
};

struct ScenarioTrace {
  std::string label;  // "" for a plain run, "a=-0.75" / curve label in sweeps
  std::vector<TrajectoryRecord> records;
  double max_gap = 0.0;
};

struct ScenarioRun {
  ScenarioConfig config;
  std::vector<ScenarioTrace> traces;
};

// Validates, expands sweeps, and simulates both routes over the grid.
// Concurrence/estar are attached per the requested outputs.  Throws
// ConfigError on semantic problems and InvariantError when a simulated
// state violates density-matrix or tolerance invariants.
ScenarioRun run_scenario(const ScenarioConfig& cfg);

// 17-significant-digit decimal, enough to round-trip any double.
std::string format_sig17(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
void write_csv(const std::filesystem::path& path, const CsvTable& table);

// Artifacts produced by `run`: one CSV per requested output plus
// summary.json.  Returns the written file paths (deterministic order).
std::vector<std::filesystem::path> emit_outputs(
    const ScenarioRun& run, const std::filesystem::path& out_dir,
    double tolerance);

// Max gap gate used by the compare subcommand; writes compare.csv with one
// max-gap row per time point and returns the largest gap seen.
double emit_compare(const ScenarioRun& run,
                    const std::filesystem::path& out_dir);

// Figure presets fig1..fig7: curated columns over a preset scenario file.
std::vector<std::string> figure_presets();
// Runs the preset config and writes <preset>.csv with the curated columns.
std::filesystem::path emit_figure(const std::string& preset,
                                  const ScenarioRun& run,
                                  const std::filesystem::path& out_dir);

// Time-independent artifacts.
CsvTable spectrum_table(double decay_rate, const FockBasis& basis);
CsvTable dfs_table(double decay_rate, const FockBasis& basis);
nlohmann::ordered_json summarize(const ScenarioRun& run, double tolerance);

}  // namespace twocav
