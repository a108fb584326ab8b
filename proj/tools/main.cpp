#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "twocav/scenario.hpp"
#include "twocav/superop.hpp"

using namespace twocav;

namespace {

#ifndef TWOCAV_DEFAULT_PRESET_DIR
#define TWOCAV_DEFAULT_PRESET_DIR "presets"
#endif

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct GlobalFlags {
  std::string config_path;
  std::string out_dir = "out";
  double tolerance = 1e-8;
  std::optional<int> truncation;
  std::optional<double> decay_rate;
  std::string presets_dir = TWOCAV_DEFAULT_PRESET_DIR;
};

// Flags override config keys.
ScenarioConfig effective_config(const GlobalFlags& flags) {
  ScenarioConfig cfg;
  if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
  if (flags.truncation) cfg.truncation = *flags.truncation;
  if (flags.decay_rate) cfg.decay_rate = *flags.decay_rate;
  return cfg;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void report_files(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

double overall_gap(const ScenarioRun& run) {
  double worst = 0.0;
  for (const auto& trace : run.traces)
    worst = std::max(worst, trace.max_gap);
  return worst;
}

void require_gap(const ScenarioRun& run, double tolerance) {
  const double worst = overall_gap(run);
  if (worst > tolerance)
    throw InvariantError("analytic vs numeric gap " + sci(worst) +
                         " exceeds the tolerance " + sci(tolerance));
}

int cmd_run(const GlobalFlags& flags) {
  const ScenarioRun run = run_scenario(effective_config(flags));
  require_gap(run, flags.tolerance);
  const auto files = emit_outputs(run, flags.out_dir, flags.tolerance);
  std::cout << "run: " << run.traces.size() << " trace(s), "
            << run.traces.front().records.size()
            << " point(s), max analytic-numeric gap "
            << sci(overall_gap(run)) << '\n';
  report_files(files);
  return kExitOk;
}

int cmd_compare(const GlobalFlags& flags) {
  const ScenarioRun run = run_scenario(effective_config(flags));
  const double worst = emit_compare(run, flags.out_dir);
  for (const auto& trace : run.traces)
    std::cout << "compare: "
              << (trace.label.empty() ? std::string("(base)") : trace.label)
              << " max gap " << sci(trace.max_gap) << '\n';
  std::cout << "compare: overall max gap " << sci(worst) << " vs tolerance "
            << sci(flags.tolerance) << '\n';
  report_files({std::filesystem::path(flags.out_dir) / "compare.csv"});
  if (worst > flags.tolerance) {
    std::cerr << "compare: gap above tolerance\n";
    return kExitInvariant;
  }
  return kExitOk;
}

int cmd_figures(const GlobalFlags& flags, const std::string& which) {
  std::vector<std::string> names;
  if (which == "all")
    names = figure_presets();
  else
    names.push_back(which);
  const auto known = figure_presets();
  std::vector<std::filesystem::path> files;
  for (const std::string& name : names) {
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw ConfigError("unknown preset '" + name + "'", 0, "preset");
    ScenarioConfig cfg =
        load_config(std::filesystem::path(flags.presets_dir) /
                    (name + ".cfg"));
    if (flags.truncation) cfg.truncation = *flags.truncation;
    if (flags.decay_rate) cfg.decay_rate = *flags.decay_rate;
    const ScenarioRun run = run_scenario(cfg);
    require_gap(run, flags.tolerance);
    files.push_back(emit_figure(name, run, flags.out_dir));
  }
  report_files(files);
  return kExitOk;
}

int cmd_spectrum(const GlobalFlags& flags) {
  const ScenarioConfig cfg = effective_config(flags);
  if (!(cfg.decay_rate > 0.0))
    throw ConfigError("decay_rate must be positive", 0, "decay_rate");
  const FockBasis basis(cfg.truncation);
  std::filesystem::create_directories(flags.out_dir);
  const auto path = std::filesystem::path(flags.out_dir) / "spectrum.csv";
  write_csv(path, spectrum_table(cfg.decay_rate, basis));
  const Vector vals = spectrum(build_gamma_two_mode(cfg.decay_rate, basis));
  std::cout << "spectrum: dimension " << vals.size() << ", clusters:\n";
  for (const auto& [center, count] : cluster_spectrum(vals))
    std::cout << "  " << sci(center.real()) << " + " << sci(center.imag())
              << "i  x" << count << '\n';
  report_files({path});
  return kExitOk;
}

int cmd_dfs(const GlobalFlags& flags) {
  const ScenarioConfig cfg = effective_config(flags);
  if (!(cfg.decay_rate > 0.0))
    throw ConfigError("decay_rate must be positive", 0, "decay_rate");
  const FockBasis basis(cfg.truncation);
  std::filesystem::create_directories(flags.out_dir);
  const CsvTable table = dfs_table(cfg.decay_rate, basis);
  const auto path = std::filesystem::path(flags.out_dir) / "dfs.csv";
  write_csv(path, table);

  const auto kernel = null_space(build_gamma_two_mode(cfg.decay_rate, basis));
  const int expected = (cfg.truncation + 1) * (cfg.truncation + 1);
  std::cout << "dfs: kernel dimension " << kernel.size() << " (expected "
            << expected << ")\n";
  bool all = static_cast<int>(kernel.size()) == expected;
  double worst_gen = 0.0, worst_evo = 0.0;
  for (const auto& row : table.rows) {
    worst_gen = std::max(worst_gen, row[2]);
    worst_evo = std::max(worst_evo, row[3]);
    all = all && row[4] != 0.0;
  }
  std::cout << "dfs: " << table.rows.size()
            << " dark dyads certified, max generator residual "
            << sci(worst_gen) << ", max evolution residual "
            << sci(worst_evo) << '\n';
  report_files({path});
  if (!all) {
    std::cerr << "dfs: certification failed\n";
    return kExitInvariant;
  }
  return kExitOk;
}

int cmd_validate(const GlobalFlags& flags) {
  const ScenarioRun run = run_scenario(effective_config(flags));
  size_t checked = 0;
  for (const auto& trace : run.traces) {
    double previous = -1.0;
    for (const auto& rec : trace.records) {
      check_density(rec.density);
      const double photons = photon_number(rec.density);
      if (previous >= 0.0 && photons > previous + 1e-10)
        throw InvariantError("total photon number grew from " +
                             sci(previous) + " to " + sci(photons) +
                             " at st = " + sci(rec.scaled_time));
      previous = photons;
      if (rec.concurrence &&
          (*rec.concurrence < -1e-12 || *rec.concurrence > 1.0 + 1e-12))
        throw InvariantError("concurrence outside [0, 1]");
      if (rec.estar && *rec.estar < -1e-12)
        throw InvariantError("negative entanglement bound");
      ++checked;
    }
  }
  require_gap(run, flags.tolerance);
  std::cout << "validate: " << checked << " state(s) across "
            << run.traces.size()
            << " trace(s) satisfy trace, Hermiticity, positivity and "
               "monotone photon number; max gap "
            << sci(overall_gap(run)) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Dissipative dynamics of two single-mode cavities in a common "
      "environment: closed-form evolution cross-checked against a "
      "numerical propagator, with entanglement and decoherence-free "
      "subspace reports"};
  app.require_subcommand(1);

  GlobalFlags flags;
  int truncation_flag = 0;
  double decay_flag = 0.0;
  std::vector<CLI::Option*> truncation_opts, decay_opts;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* config_opt = cmd->add_option("-c,--config", flags.config_path,
                                       "scenario config file");
    if (needs_config) config_opt->required()->check(CLI::ExistingFile);
    cmd->add_option("-o,--out", flags.out_dir,
                    "output directory (default: out)");
    cmd->add_option("--tolerance", flags.tolerance,
                    "analytic vs numeric gap gate (default: 1e-8)");
    truncation_opts.push_back(
        cmd->add_option("--truncation", truncation_flag,
                        "override the total-photon truncation (default: 3)"));
    decay_opts.push_back(
        cmd->add_option("--decay-rate", decay_flag,
                        "override the decay rate from the config"));
  };

  auto* run_cmd = app.add_subcommand(
      "run", "simulate a scenario and write CSVs plus summary.json");
  add_common(run_cmd, true);

  auto* compare_cmd = app.add_subcommand(
      "compare", "tabulate the closed-form vs propagator gap per time point");
  add_common(compare_cmd, true);

  auto* figures_cmd = app.add_subcommand(
      "figures", "produce the data behind a shipped figure preset");
  std::string preset = "all";
  figures_cmd->add_option("preset", preset,
                          "fig1..fig7 or 'all' (default: all)");
  figures_cmd->add_option("--presets", flags.presets_dir,
                          "directory holding the preset configs");
  add_common(figures_cmd, false);

  auto* spectrum_cmd = app.add_subcommand(
      "spectrum", "eigenvalues of the dissipative generator");
  add_common(spectrum_cmd, false);

  auto* dfs_cmd = app.add_subcommand(
      "dfs", "certify the decoherence-free subspace and kernel dimension");
  add_common(dfs_cmd, false);

  auto* validate_cmd = app.add_subcommand(
      "validate", "re-run a scenario and spot-check every emitted state");
  add_common(validate_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  for (const CLI::Option* o : truncation_opts)
    if (o->count()) flags.truncation = truncation_flag;
  for (const CLI::Option* o : decay_opts)
    if (o->count()) flags.decay_rate = decay_flag;

  try {
    if (run_cmd->parsed()) return cmd_run(flags);
    if (compare_cmd->parsed()) return cmd_compare(flags);
    if (figures_cmd->parsed()) return cmd_figures(flags, preset);
    if (spectrum_cmd->parsed()) return cmd_spectrum(flags);
    if (dfs_cmd->parsed()) return cmd_dfs(flags);
    if (validate_cmd->parsed()) return cmd_validate(flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitConfig;
}
