#include "twocav/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "twocav/entanglement.hpp"
#include "twocav/errors.hpp"
#include "twocav/superop.hpp"

namespace twocav {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& value, const std::string& key,
                  int line) {
  char* end = nullptr;
  const std::string t = trim(value);
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    throw ConfigError("expected a real number for '" + key + "', got '" + t +
                          "'",
                      line, key);
  return x;
}

int parse_integer(const std::string& value, const std::string& key,
                  int line) {
  const std::string t = trim(value);
  int x = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ConfigError("expected an integer for '" + key + "', got '" + t +
                          "'",
                      line, key);
  return x;
}

const std::map<std::string, OutputKind>& output_names() {
  static const std::map<std::string, OutputKind> names = {
      {"density", OutputKind::density},
      {"concurrence", OutputKind::concurrence},
      {"estar", OutputKind::estar},
      {"spectrum", OutputKind::spectrum},
      {"dfs", OutputKind::dfs}};
  return names;
}

std::string output_name(OutputKind kind) {
  for (const auto& [name, k] : output_names())
    if (k == kind) return name;
  return "?";
}

struct Entry {
  std::string value;
  int line;
};

std::string sweep_label(double a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "a=%.2f", a);
  return buf;
}

std::string element_name(const FockBasis& basis, int i, int j) {
  const auto [n1, n2] = basis.state(i);
  const auto [m1, m2] = basis.state(j);
  return "rho_" + std::to_string(n1) + std::to_string(n2) + "_" +
         std::to_string(m1) + std::to_string(m2);
}

// Largest total photon number carried by the initial state; evolution only
// lowers it, so this bounds the support of every record.
int initial_max_total(const InitialState& init) {
  if (std::holds_alternative<SinglePhotonInit>(init)) return 1;
  if (std::holds_alternative<TwoPhotonInit>(init)) return 2;
  if (const auto* f = std::get_if<FockInit>(&init)) return f->n1 + f->n2;
  int top = 0;
  for (const auto& t : std::get<CustomInit>(init).terms)
    top = std::max({top, t.n1 + t.n2, t.m1 + t.m2});
  return top;
}

int run_max_total(const ScenarioRun& run) {
  // Sweeps replace the base initial state with same-sector ones, so the
  // base state's sector already bounds every trace.
  return initial_max_total(run.config.initial_state);
}

double real_element(const TrajectoryRecord& rec, int i, int j) {
  const Complex v = rec.density.mat(i, j);
  if (std::abs(v.imag()) > 1e-12)
    throw InvariantError("figure column expects a real element, got imag = " +
                         std::to_string(v.imag()));
  return v.real();
}

const ScenarioTrace& single_trace(const ScenarioRun& run,
                                  const std::string& preset) {
  if (run.traces.size() != 1)
    throw ConfigError("preset " + preset + " expects a single trace", 0,
                      "sweep");
  return run.traces[0];
}

double value_or_throw(const std::optional<double>& v, const char* what,
                      const std::string& preset) {
  if (!v)
    throw ConfigError("preset " + preset + " requires the '" +
                          std::string(what) + "' output",
                      0, "outputs");
  return *v;
}

}  // namespace

std::vector<double> TimeGrid::times() const {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(std::max(steps, 0)));
  for (int i = 0; i < steps; ++i)
    out.push_back(t_max * static_cast<double>(i) /
                  static_cast<double>(steps - 1));
  return out;
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  cfg.outputs.clear();

  static const std::set<std::string> known_sections = {
      "scenario", "initial", "time", "outputs", "sweep", "compare"};

  // First pass: lex into (section, key, value, line) tuples.
  std::vector<std::pair<std::string, std::pair<std::string, Entry>>> tuples;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string stripped = trim(raw);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';')
      continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw ConfigError("malformed section header '" + stripped + "'",
                          line);
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (!known_sections.count(section))
        throw ConfigError("unknown section '[" + section + "]'", line);
      continue;
    }
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got '" + stripped + "'",
                        line);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (section.empty())
      throw ConfigError("key '" + key + "' appears before any [section]",
                        line);
    tuples.push_back({section, {key, Entry{value, line}}});
  }

  // Second pass: dispatch.  Repeatable keys: initial.term, outputs.quantity,
  // sweep.curve.  Everything else may appear once.
  std::set<std::string> seen;
  auto once = [&seen](const std::string& section, const std::string& key,
                      int at) {
    if (!seen.insert(section + "." + key).second)
      throw ConfigError("duplicate key '" + key + "' in [" + section + "]",
                        at, key);
  };

  std::map<std::string, Entry> initial_kv;
  std::vector<Entry> terms;
  std::vector<Entry> curves;

  for (const auto& [sec, kv] : tuples) {
    const auto& [key, entry] = kv;
    const std::string& value = entry.value;
    const int at = entry.line;
    if (sec == "scenario") {
      if (key == "decay_rate") {
        once(sec, key, at);
        cfg.decay_rate = parse_real(value, key, at);
      } else if (key == "truncation") {
        once(sec, key, at);
        cfg.truncation = parse_integer(value, key, at);
      } else {
        throw ConfigError("unknown key '" + key + "' in [scenario]", at, key);
      }
    } else if (sec == "initial") {
      if (key == "term") {
        terms.push_back(entry);
      } else if (key == "type" || key == "a" || key == "b" || key == "c" ||
                 key == "n1" || key == "n2") {
        once(sec, key, at);
        initial_kv[key] = entry;
      } else {
        throw ConfigError("unknown key '" + key + "' in [initial]", at, key);
      }
    } else if (sec == "time") {
      if (key == "t_max") {
        once(sec, key, at);
        cfg.time_grid.t_max = parse_real(value, key, at);
      } else if (key == "steps") {
        once(sec, key, at);
        cfg.time_grid.steps = parse_integer(value, key, at);
      } else {
        throw ConfigError("unknown key '" + key + "' in [time]", at, key);
      }
    } else if (sec == "outputs") {
      if (key != "quantity")
        throw ConfigError("unknown key '" + key + "' in [outputs]", at, key);
      const auto it = output_names().find(value);
      if (it == output_names().end())
        throw ConfigError("unknown output quantity '" + value + "'", at,
                          key);
      cfg.outputs.insert(it->second);
    } else if (sec == "sweep") {
      if (key == "a") {
        once(sec, key, at);
        const auto toks = split_ws(value);
        if (toks.empty())
          throw ConfigError("sweep 'a' needs at least one value", at, key);
        for (const auto& tok : toks)
          cfg.sweep_a.push_back(parse_real(tok, key, at));
      } else if (key == "curve") {
        curves.push_back(entry);
      } else {
        throw ConfigError("unknown key '" + key + "' in [sweep]", at, key);
      }
    } else {  // compare
      if (key != "numeric_decay_rate")
        throw ConfigError("unknown key '" + key + "' in [compare]", at, key);
      once(sec, key, at);
      cfg.numeric_decay_rate = parse_real(value, key, at);
    }
  }

  // Assemble the initial state.
  auto take = [&initial_kv](const std::string& key) {
    const auto it = initial_kv.find(key);
    if (it == initial_kv.end()) return std::optional<Entry>();
    std::optional<Entry> out(it->second);
    initial_kv.erase(it);
    return out;
  };
  const std::optional<Entry> type = take("type");
  if (type) {
    const std::string& name = type->value;
    if (name != "custom" && !terms.empty())
      throw ConfigError("'term' only applies to initial type 'custom'",
                        terms.front().line, "term");
    auto require = [&](const std::string& key) {
      auto e = take(key);
      if (!e)
        throw ConfigError("initial type '" + name + "' needs key '" + key +
                              "'",
                          type->line, key);
      return parse_real(e->value, key, e->line);
    };
    if (name == "single_photon") {
      cfg.initial_state = SinglePhotonInit{require("a")};
    } else if (name == "two_photon") {
      const double a = require("a");
      const double b = require("b");
      const double c = require("c");
      cfg.initial_state = TwoPhotonInit{a, b, c};
    } else if (name == "fock") {
      auto n1 = take("n1");
      auto n2 = take("n2");
      if (!n1 || !n2)
        throw ConfigError("initial type 'fock' needs keys 'n1' and 'n2'",
                          type->line, "n1");
      cfg.initial_state = FockInit{parse_integer(n1->value, "n1", n1->line),
                                   parse_integer(n2->value, "n2", n2->line)};
    } else if (name == "custom") {
      if (terms.empty())
        throw ConfigError("initial type 'custom' needs at least one 'term'",
                          type->line, "term");
      CustomInit init;
      for (const Entry& e : terms) {
        const auto toks = split_ws(e.value);
        if (toks.size() != 6)
          throw ConfigError(
              "custom term wants 'n1 n2 m1 m2 re im', got " +
                  std::to_string(toks.size()) + " fields",
              e.line, "term");
        CustomTerm t{parse_integer(toks[0], "term.n1", e.line),
                     parse_integer(toks[1], "term.n2", e.line),
                     parse_integer(toks[2], "term.m1", e.line),
                     parse_integer(toks[3], "term.m2", e.line),
                     Complex(parse_real(toks[4], "term.re", e.line),
                             parse_real(toks[5], "term.im", e.line))};
        init.terms.push_back(t);
      }
      cfg.initial_state = init;
      terms.clear();
    } else {
      throw ConfigError("unknown initial type '" + name + "'", type->line,
                        "type");
    }
  } else if (!initial_kv.empty() || !terms.empty()) {
    const int at = !initial_kv.empty() ? initial_kv.begin()->second.line
                                       : terms.front().line;
    throw ConfigError("[initial] needs a 'type' key", at, "type");
  }
  if (!initial_kv.empty())
    throw ConfigError("key '" + initial_kv.begin()->first +
                          "' does not apply to this initial type",
                      initial_kv.begin()->second.line,
                      initial_kv.begin()->first);
  if (!terms.empty())
    throw ConfigError("'term' only applies to initial type 'custom'",
                      terms.front().line, "term");

  for (const Entry& e : curves) {
    const auto toks = split_ws(e.value);
    if (toks.size() != 4)
      throw ConfigError("curve wants 'label a b c', got " +
                            std::to_string(toks.size()) + " fields",
                        e.line, "curve");
    cfg.sweep_curves.push_back(
        TwoPhotonCurve{toks[0], parse_real(toks[1], "curve.a", e.line),
                       parse_real(toks[2], "curve.b", e.line),
                       parse_real(toks[3], "curve.c", e.line)});
  }

  if (cfg.outputs.empty()) cfg.outputs = {OutputKind::density};
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw ConfigError("cannot open config file '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ScenarioConfig& cfg) {
  auto fail = [](const std::string& msg, const std::string& field) {
    throw ConfigError(msg, 0, field);
  };
  if (!(cfg.decay_rate > 0.0))
    fail("decay_rate must be positive", "decay_rate");
  if (cfg.truncation < 0) fail("truncation must be >= 0", "truncation");
  if (cfg.truncation > 9)
    fail("truncation above 9 is not supported by the output label scheme",
         "truncation");
  if (!(cfg.time_grid.t_max > 0.0))
    fail("t_max must be positive", "time.t_max");
  if (cfg.time_grid.steps < 2) fail("steps must be >= 2", "time.steps");
  if (cfg.numeric_decay_rate && !(*cfg.numeric_decay_rate > 0.0))
    fail("numeric_decay_rate must be positive", "compare.numeric_decay_rate");

  const int top = initial_max_total(cfg.initial_state);
  if (const auto* s = std::get_if<SinglePhotonInit>(&cfg.initial_state)) {
    if (!(std::abs(s->a) <= 1.0)) fail("|a| must be <= 1", "initial.a");
    if (cfg.truncation < 1)
      fail("single_photon needs truncation >= 1", "truncation");
  } else if (const auto* tp = std::get_if<TwoPhotonInit>(&cfg.initial_state)) {
    const double norm2 = tp->a * tp->a + tp->b * tp->b + tp->c * tp->c;
    if (std::abs(norm2 - 1.0) > 1e-10)
      fail("a^2 + b^2 + c^2 must equal 1 within 1e-10", "initial.(a,b,c)");
    if (cfg.truncation < 2)
      fail("two_photon needs truncation >= 2", "truncation");
  } else if (const auto* f = std::get_if<FockInit>(&cfg.initial_state)) {
    if (f->n1 < 0 || f->n2 < 0)
      fail("fock labels must be non-negative", "initial.n1");
    if (f->n1 + f->n2 > cfg.truncation)
      fail("fock state outside the truncation", "initial.n1");
  } else {
    const auto& terms = std::get<CustomInit>(cfg.initial_state).terms;
    if (terms.empty()) fail("custom initial state has no terms", "term");
    const FockBasis basis(cfg.truncation);
    for (const auto& t : terms)
      if (!basis.contains(t.n1, t.n2) || !basis.contains(t.m1, t.m2))
        fail("custom term outside the truncation", "term");
    try {
      check_density(initial_density(cfg.initial_state, basis));
    } catch (const InvariantError& err) {
      fail(std::string("custom terms do not form a density matrix: ") +
               err.what(),
           "term");
    }
  }

  const bool single = std::holds_alternative<SinglePhotonInit>(
      cfg.initial_state);
  const bool two = std::holds_alternative<TwoPhotonInit>(cfg.initial_state);
  if (!cfg.sweep_a.empty()) {
    if (!single)
      fail("[sweep] a requires initial type single_photon", "sweep.a");
    std::set<std::string> labels;
    for (double a : cfg.sweep_a) {
      if (!(std::abs(a) <= 1.0))
        fail("sweep value |a| must be <= 1", "sweep.a");
      if (!labels.insert(sweep_label(a)).second)
        fail("sweep values collide at two decimals", "sweep.a");
    }
  }
  if (!cfg.sweep_curves.empty()) {
    if (!two)
      fail("[sweep] curve requires initial type two_photon", "sweep.curve");
    std::set<std::string> labels;
    for (const auto& c : cfg.sweep_curves) {
      const double norm2 = c.a * c.a + c.b * c.b + c.c * c.c;
      if (std::abs(norm2 - 1.0) > 1e-10)
        fail("curve '" + c.label + "' is not normalized", "sweep.curve");
      if (!labels.insert(c.label).second)
        fail("duplicate curve label '" + c.label + "'", "sweep.curve");
    }
  }

  if (cfg.outputs.count(OutputKind::concurrence)) {
    if (two || !cfg.sweep_curves.empty() || top > 1)
      fail(
          "the concurrence output needs the initial support inside the "
          "one-photon sector",
          "outputs");
  }
  if (cfg.outputs.count(OutputKind::estar)) {
    if (std::holds_alternative<CustomInit>(cfg.initial_state))
      fail("the estar output needs a pure initial state", "outputs");
    if (top > 2)
      fail("the estar output supports at most two total photons", "outputs");
  }
}

std::optional<Ket> initial_ket(const InitialState& init,
                               const FockBasis& basis) {
  if (const auto* s = std::get_if<SinglePhotonInit>(&init)) {
    Vector amp = Vector::Zero(basis.dim());
    amp(basis.index(0, 1)) = s->a;
    amp(basis.index(1, 0)) = std::sqrt(1.0 - s->a * s->a);
    return normalized(Ket{basis, std::move(amp)});
  }
  if (const auto* tp = std::get_if<TwoPhotonInit>(&init)) {
    Vector amp = Vector::Zero(basis.dim());
    amp(basis.index(0, 2)) = tp->a;
    amp(basis.index(1, 1)) = tp->b;
    amp(basis.index(2, 0)) = tp->c;
    return normalized(Ket{basis, std::move(amp)});
  }
  if (const auto* f = std::get_if<FockInit>(&init))
    return number_state(basis, f->n1, f->n2);
  return std::nullopt;
}

DensityMatrix initial_density(const InitialState& init,
                              const FockBasis& basis) {
  if (const auto* cu = std::get_if<CustomInit>(&init)) {
    Matrix rho = Matrix::Zero(basis.dim(), basis.dim());
    for (const auto& t : cu->terms)
      rho(basis.index(t.n1, t.n2), basis.index(t.m1, t.m2)) += t.coeff;
    return DensityMatrix{basis, std::move(rho)};
  }
  return pure_density(*initial_ket(init, basis));
}

ScenarioRun run_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const FockBasis basis(cfg.truncation);
  const std::vector<double> times = cfg.time_grid.times();
  const double s = cfg.decay_rate;
  const bool want_c = cfg.outputs.count(OutputKind::concurrence) != 0;
  const bool want_e = cfg.outputs.count(OutputKind::estar) != 0;

  struct Sub {
    std::string label;
    InitialState init;
  };
  std::vector<Sub> subs;
  if (!cfg.sweep_a.empty()) {
    for (double a : cfg.sweep_a)
      subs.push_back({sweep_label(a), SinglePhotonInit{a}});
  } else if (!cfg.sweep_curves.empty()) {
    for (const auto& c : cfg.sweep_curves)
      subs.push_back({c.label, TwoPhotonInit{c.a, c.b, c.c}});
  } else {
    subs.push_back({"", cfg.initial_state});
  }

  // Independent numeric route; the optional rate override exists so that
  // `compare` fixtures can prove the gap gate has teeth.
  const Propagator prop(
      build_gamma_two_mode(cfg.numeric_decay_rate.value_or(s), basis));

  ScenarioRun out{cfg, {}};
  for (const Sub& sub : subs) {
    const DensityMatrix rho0 = initial_density(sub.init, basis);
    const std::optional<Ket> psi0 = initial_ket(sub.init, basis);
    ScenarioTrace trace{sub.label, {}, 0.0};
    trace.records.reserve(times.size());
    for (double t : times) {
      TrajectoryRecord rec{s * t, evolve_analytic(rho0, s, t), {}, {}, 0.0};
      const Matrix numeric = prop.apply(rho0.mat, t);
      rec.analytic_numeric_gap = (rec.density.mat - numeric)
                                     .cwiseAbs()
                                     .maxCoeff();
      if (want_c)
        rec.concurrence = concurrence_2qubit(extract_qubit(rec.density));
      if (want_e) rec.estar = upper_bound_estar(pure_state_mixture(*psi0, s, t));
      trace.max_gap = std::max(trace.max_gap, rec.analytic_numeric_gap);
      trace.records.push_back(std::move(rec));
    }
    out.traces.push_back(std::move(trace));
  }
  return out;
}

std::string format_sig17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InvariantError("cannot write '" + path.string() + "'");
  for (size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw InvariantError("csv row width does not match the header");
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_sig17(row[i]);
    out << '\n';
  }
}

namespace {

std::string suffixed(const std::string& base, const std::string& label) {
  return label.empty() ? base : base + "_" + label;
}

CsvTable density_table(const ScenarioRun& run) {
  const FockBasis basis(run.config.truncation);
  const int top = run_max_total(run);
  std::vector<int> support;
  for (int i = 0; i < basis.dim(); ++i) {
    const auto [n1, n2] = basis.state(i);
    if (n1 + n2 <= top) support.push_back(i);
  }
  CsvTable table;
  table.header.push_back("st");
  for (const auto& trace : run.traces)
    for (int i : support)
      for (int j : support) {
        const std::string name =
            suffixed(element_name(basis, i, j), trace.label);
        table.header.push_back(name + "_re");
        table.header.push_back(name + "_im");
      }
  const size_t points = run.traces.front().records.size();
  for (size_t r = 0; r < points; ++r) {
    std::vector<double> row;
    row.push_back(run.traces.front().records[r].scaled_time);
    for (const auto& trace : run.traces)
      for (int i : support)
        for (int j : support) {
          const Complex v = trace.records[r].density.mat(i, j);
          row.push_back(v.real());
          row.push_back(v.imag());
        }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable scalar_table(const ScenarioRun& run, const char* base,
                      const std::optional<double> TrajectoryRecord::*field) {
  CsvTable table;
  table.header.push_back("st");
  for (const auto& trace : run.traces)
    table.header.push_back(suffixed(base, trace.label));
  const size_t points = run.traces.front().records.size();
  for (size_t r = 0; r < points; ++r) {
    std::vector<double> row;
    row.push_back(run.traces.front().records[r].scaled_time);
    for (const auto& trace : run.traces) {
      const auto& v = trace.records[r].*field;
      if (!v)
        throw InvariantError(std::string(base) +
                             " was not computed for this run");
      row.push_back(*v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

nlohmann::ordered_json initial_json(const InitialState& init) {
  nlohmann::ordered_json j;
  if (const auto* s = std::get_if<SinglePhotonInit>(&init)) {
    j["type"] = "single_photon";
    j["a"] = s->a;
  } else if (const auto* tp = std::get_if<TwoPhotonInit>(&init)) {
    j["type"] = "two_photon";
    j["a"] = tp->a;
    j["b"] = tp->b;
    j["c"] = tp->c;
  } else if (const auto* f = std::get_if<FockInit>(&init)) {
    j["type"] = "fock";
    j["n1"] = f->n1;
    j["n2"] = f->n2;
  } else {
    j["type"] = "custom";
    j["terms"] = std::get<CustomInit>(init).terms.size();
  }
  return j;
}

}  // namespace

CsvTable spectrum_table(double decay_rate, const FockBasis& basis) {
  Vector vals = spectrum(build_gamma_two_mode(decay_rate, basis));
  std::vector<Complex> sorted(vals.data(), vals.data() + vals.size());
  std::sort(sorted.begin(), sorted.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() < y.imag();
  });
  CsvTable table;
  table.header = {"index", "re", "im"};
  for (size_t i = 0; i < sorted.size(); ++i)
    table.rows.push_back({static_cast<double>(i), sorted[i].real(),
                          sorted[i].imag()});
  return table;
}

CsvTable dfs_table(double decay_rate, const FockBasis& basis) {
  const std::vector<Ket> dark = dark_basis(basis);
  CsvTable table;
  table.header = {"n", "m", "generator_residual", "evolution_residual",
                  "passed"};
  for (size_t n = 0; n < dark.size(); ++n)
    for (size_t m = 0; m < dark.size(); ++m) {
      const Matrix dyad = dark[n].amp * dark[m].amp.adjoint();
      const DfsCertificate cert = certify(dyad, decay_rate, basis);
      table.rows.push_back({static_cast<double>(n), static_cast<double>(m),
                            cert.generator_residual, cert.evolution_residual,
                            cert.passed ? 1.0 : 0.0});
    }
  return table;
}

nlohmann::ordered_json summarize(const ScenarioRun& run, double tolerance) {
  const ScenarioConfig& cfg = run.config;
  nlohmann::ordered_json j;
  j["decay_rate"] = cfg.decay_rate;
  j["truncation"] = cfg.truncation;
  j["initial"] = initial_json(cfg.initial_state);
  j["time"] = {{"t_max", cfg.time_grid.t_max},
               {"steps", cfg.time_grid.steps}};
  {
    nlohmann::ordered_json names = nlohmann::ordered_json::array();
    for (OutputKind k :
         {OutputKind::density, OutputKind::concurrence, OutputKind::estar,
          OutputKind::spectrum, OutputKind::dfs})
      if (cfg.outputs.count(k)) names.push_back(output_name(k));
    j["outputs"] = names;
  }
  j["tolerance"] = tolerance;
  if (cfg.numeric_decay_rate)
    j["numeric_decay_rate"] = *cfg.numeric_decay_rate;

  const FockBasis basis(cfg.truncation);
  nlohmann::ordered_json traces = nlohmann::ordered_json::array();
  for (const auto& trace : run.traces) {
    const TrajectoryRecord& last = trace.records.back();
    nlohmann::ordered_json t;
    t["label"] = trace.label;
    t["max_analytic_numeric_gap"] = trace.max_gap;
    nlohmann::ordered_json fin;
    fin["st"] = last.scaled_time;
    fin["trace"] = last.density.mat.trace().real();
    fin["photon_number"] = photon_number(last.density);
    if (last.concurrence) fin["concurrence"] = *last.concurrence;
    if (last.estar) fin["estar"] = *last.estar;
    nlohmann::ordered_json diag;
    const int top = run_max_total(run);
    for (int i = 0; i < basis.dim(); ++i) {
      const auto [n1, n2] = basis.state(i);
      if (n1 + n2 > top) continue;
      diag[element_name(basis, i, i)] = last.density.mat(i, i).real();
    }
    fin["diagonal"] = diag;
    t["final"] = fin;
    traces.push_back(t);
  }
  j["traces"] = traces;

  if (cfg.outputs.count(OutputKind::spectrum)) {
    const Vector vals = spectrum(build_gamma_two_mode(cfg.decay_rate, basis));
    nlohmann::ordered_json clusters = nlohmann::ordered_json::array();
    for (const auto& [center, count] : cluster_spectrum(vals))
      clusters.push_back({{"re", center.real()},
                          {"im", center.imag()},
                          {"count", count}});
    j["spectrum"] = {{"clusters", clusters}};
  }
  if (cfg.outputs.count(OutputKind::dfs)) {
    const auto kernel = null_space(build_gamma_two_mode(cfg.decay_rate,
                                                        basis));
    const int expected = (cfg.truncation + 1) * (cfg.truncation + 1);
    nlohmann::ordered_json certs = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& row : dfs_table(cfg.decay_rate, basis).rows) {
      certs.push_back({{"n", static_cast<int>(row[0])},
                       {"m", static_cast<int>(row[1])},
                       {"generator_residual", row[2]},
                       {"evolution_residual", row[3]},
                       {"passed", row[4] != 0.0}});
      all = all && row[4] != 0.0;
    }
    j["dfs"] = {{"kernel_dimension", static_cast<int>(kernel.size())},
                {"expected_kernel_dimension", expected},
                {"certificates", certs},
                {"all_passed", all}};
  }
  return j;
}

std::vector<std::filesystem::path> emit_outputs(
    const ScenarioRun& run, const std::filesystem::path& out_dir,
    double tolerance) {
  std::filesystem::create_directories(out_dir);
  const ScenarioConfig& cfg = run.config;
  const FockBasis basis(cfg.truncation);
  std::vector<std::filesystem::path> files;

  auto emit = [&](const char* name, const CsvTable& table) {
    const auto path = out_dir / name;
    write_csv(path, table);
    files.push_back(path);
  };
  if (cfg.outputs.count(OutputKind::density))
    emit("density.csv", density_table(run));
  if (cfg.outputs.count(OutputKind::concurrence))
    emit("concurrence.csv",
         scalar_table(run, "C", &TrajectoryRecord::concurrence));
  if (cfg.outputs.count(OutputKind::estar))
    emit("estar.csv", scalar_table(run, "Estar", &TrajectoryRecord::estar));
  if (cfg.outputs.count(OutputKind::spectrum))
    emit("spectrum.csv", spectrum_table(cfg.decay_rate, basis));
  if (cfg.outputs.count(OutputKind::dfs))
    emit("dfs.csv", dfs_table(cfg.decay_rate, basis));

  nlohmann::ordered_json summary = summarize(run, tolerance);
  {
    nlohmann::ordered_json names = nlohmann::ordered_json::array();
    for (const auto& f : files) names.push_back(f.filename().string());
    summary["files"] = names;
  }
  const auto summary_path = out_dir / "summary.json";
  std::ofstream out(summary_path, std::ios::binary);
  if (!out)
    throw InvariantError("cannot write '" + summary_path.string() + "'");
  out << summary.dump(2) << '\n';
  files.push_back(summary_path);
  return files;
}

double emit_compare(const ScenarioRun& run,
                    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  CsvTable table;
  table.header.push_back("st");
  for (const auto& trace : run.traces)
    table.header.push_back(suffixed("gap", trace.label));
  double worst = 0.0;
  const size_t points = run.traces.front().records.size();
  for (size_t r = 0; r < points; ++r) {
    std::vector<double> row;
    row.push_back(run.traces.front().records[r].scaled_time);
    for (const auto& trace : run.traces) {
      const double gap = trace.records[r].analytic_numeric_gap;
      worst = std::max(worst, gap);
      row.push_back(gap);
    }
    table.rows.push_back(std::move(row));
  }
  write_csv(out_dir / "compare.csv", table);
  return worst;
}

std::vector<std::string> figure_presets() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
}

std::filesystem::path emit_figure(const std::string& preset,
                                  const ScenarioRun& run,
                                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const FockBasis basis(run.config.truncation);
  const int i00 = basis.index(0, 0);
  const int i01 = basis.index(0, 1);
  const int i10 = basis.index(1, 0);
  CsvTable table;
  auto times_column = [&](std::vector<double>& row, size_t r) {
    row.push_back(run.traces.front().records[r].scaled_time);
  };
  const size_t points = run.traces.front().records.size();

  if (preset == "fig1" || preset == "fig3") {
    const ScenarioTrace& trace = single_trace(run, preset);
    table.header = {"st", "rho_10_10", "rho_01_01", "rho_00_00", "rho_off"};
    for (size_t r = 0; r < points; ++r) {
      std::vector<double> row;
      times_column(row, r);
      const TrajectoryRecord& rec = trace.records[r];
      row.push_back(real_element(rec, i10, i10));
      row.push_back(real_element(rec, i01, i01));
      row.push_back(real_element(rec, i00, i00));
      row.push_back(real_element(rec, i01, i10));
      table.rows.push_back(std::move(row));
    }
  } else if (preset == "fig2" || preset == "fig4") {
    const ScenarioTrace& trace = single_trace(run, preset);
    table.header = {"st", "C"};
    for (size_t r = 0; r < points; ++r) {
      std::vector<double> row;
      times_column(row, r);
      row.push_back(
          value_or_throw(trace.records[r].concurrence, "concurrence",
                         preset));
      table.rows.push_back(std::move(row));
    }
  } else if (preset == "fig5") {
    table.header = {"st"};
    for (const auto& trace : run.traces)
      for (const char* base :
           {"rho_10_10", "rho_01_01", "rho_00_00", "rho_off"})
        table.header.push_back(suffixed(base, trace.label));
    for (size_t r = 0; r < points; ++r) {
      std::vector<double> row;
      times_column(row, r);
      for (const auto& trace : run.traces) {
        const TrajectoryRecord& rec = trace.records[r];
        row.push_back(real_element(rec, i10, i10));
        row.push_back(real_element(rec, i01, i01));
        row.push_back(real_element(rec, i00, i00));
        row.push_back(real_element(rec, i01, i10));
      }
      table.rows.push_back(std::move(row));
    }
  } else if (preset == "fig6") {
    table.header = {"st"};
    for (const auto& trace : run.traces)
      table.header.push_back(suffixed("C", trace.label));
    for (size_t r = 0; r < points; ++r) {
      std::vector<double> row;
      times_column(row, r);
      for (const auto& trace : run.traces)
        row.push_back(value_or_throw(trace.records[r].concurrence,
                                     "concurrence", preset));
      table.rows.push_back(std::move(row));
    }
  } else if (preset == "fig7") {
    table.header = {"st"};
    for (const auto& trace : run.traces)
      table.header.push_back(suffixed("Estar", trace.label));
    for (size_t r = 0; r < points; ++r) {
      std::vector<double> row;
      times_column(row, r);
      for (const auto& trace : run.traces)
        row.push_back(
            value_or_throw(trace.records[r].estar, "estar", preset));
      table.rows.push_back(std::move(row));
    }
  } else {
    throw ConfigError("unknown preset '" + preset + "'", 0, "preset");
  }

  const auto path = out_dir / (preset + ".csv");
  write_csv(path, table);
  return path;
}

}  // namespace twocav
