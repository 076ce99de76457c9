#include "qcs/run_config.hpp"

#include "qcs/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qcs {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != ',') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

[[noreturn]] void bad(std::string_view section, std::string_view key, std::string_view why) {
  throw ConfigError(std::string(section) + "." + std::string(key) + ": " + std::string(why));
}

double to_double(std::string_view section, std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
    bad(section, key, "expected a number, got '" + std::string(v) + "'");
  return out;
}

std::size_t to_count(std::string_view section, std::string_view key, std::string_view v) {
  v = trim(v);
  if (!v.empty() && v.front() == '-') bad(section, key, "expected a non-negative integer");
  std::size_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    bad(section, key, "expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

std::uint64_t to_u64(std::string_view section, std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    bad(section, key, "expected an unsigned integer");
  return out;
}

bool to_bool(std::string_view section, std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(section, key, "expected true or false");
}

std::vector<double> to_list(std::string_view section, std::string_view key, std::string_view v) {
  std::vector<double> out;
  for (auto w : words(v)) out.push_back(to_double(section, key, w));
  return out;
}

std::optional<double> to_optional(std::string_view section, std::string_view key, std::string_view v) {
  v = trim(v);
  if (v.empty() || v == "none") return std::nullopt;
  return to_double(section, key, v);
}

std::string list_text(const std::vector<double> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_number(v[i]);
  }
  return s;
}

std::string optional_text(const std::optional<double> &v) {
  return v ? format_number(*v) : std::string("none");
}

std::string_view mode_text(SolverMode m) {
  switch (m) {
  case SolverMode::automatic: return "auto";
  case SolverMode::direct: return "direct";
  case SolverMode::shift_invert: return "shift_invert";
  }
  return "auto";
}

SolverMode mode_from(std::string_view section, std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "auto") return SolverMode::automatic;
  if (v == "direct") return SolverMode::direct;
  if (v == "shift_invert") return SolverMode::shift_invert;
  bad(section, key, "expected auto, direct or shift_invert");
}

AxisConfig &axis_slot(RunConfig &cfg, Coord c) {
  for (auto &a : cfg.axes)
    if (a.name == c) return a;
  cfg.axes.push_back({c, -15.0, 15.0, 28});
  std::sort(cfg.axes.begin(), cfg.axes.end(),
            [](const AxisConfig &a, const AxisConfig &b) { return a.name < b.name; });
  for (auto &a : cfg.axes)
    if (a.name == c) return a;
  throw ConfigError("axis bookkeeping failed");
}

} // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
  case SweepAxis::mu: return "mu";
  case SweepAxis::box_half_width: return "box_half_width";
  case SweepAxis::basis_size: return "basis_size";
  }
  return "mu";
}

SweepAxis sweep_axis_from_string(std::string_view s) {
  if (s == "mu") return SweepAxis::mu;
  if (s == "box_half_width") return SweepAxis::box_half_width;
  if (s == "basis_size") return SweepAxis::basis_size;
  throw ConfigError("unknown sweep axis '" + std::string(s) + "'");
}

void set_config_value(RunConfig &cfg, std::string_view section, std::string_view key,
                      std::string_view value) {
  const std::string_view v = trim(value);
  auto unknown = [&]() { bad(section, key, "unknown key"); };

  if (section == "run") {
    if (key == "command") cfg.command = std::string(v);
    else if (key == "preset") cfg.preset = std::string(v);
    else if (key == "label") cfg.preset = std::string(v); // informational, written by serialize_config
    else if (key == "output") cfg.output_dir = std::string(v);
    else if (key == "seed") cfg.solver.seed = to_u64(section, key, v);
    else unknown();
  } else if (section == "system") {
    if (key == "light_mass") cfg.light_mass = to_double(section, key, v);
    else if (key == "heavy_mass") cfg.heavy_mass = to_double(section, key, v);
    else if (key == "Z") cfg.Z = to_double(section, key, v);
    else if (key == "mu") cfg.mu = to_double(section, key, v);
    else unknown();
  } else if (section == "grid") {
    if (key == "form") {
      try {
        cfg.form = form_from_string(v);
      } catch (const Error &e) {
        bad(section, key, e.what());
      }
    } else if (key == "centering") {
      if (v == "cell") cfg.centering = Centering::cell;
      else if (v == "node") cfg.centering = Centering::node;
      else bad(section, key, "expected cell or node");
    } else if (key == "softening") {
      cfg.softening = to_double(section, key, v);
    } else if (key == "closure") {
      if (v == "reflect") cfg.closure = WallClosure::reflect;
      else if (v == "truncate") cfg.closure = WallClosure::truncate;
      else bad(section, key, "expected reflect or truncate");
    } else if (key == "axes") {
      // "R x" style list restricting the axes to the ones named
      std::vector<AxisConfig> kept;
      for (auto w : words(v)) {
        Coord c{};
        try {
          c = coord_from_string(w);
        } catch (const Error &e) {
          bad(section, key, e.what());
        }
        kept.push_back(axis_slot(cfg, c));
      }
      std::sort(kept.begin(), kept.end(),
                [](const AxisConfig &a, const AxisConfig &b) { return a.name < b.name; });
      cfg.axes = kept;
    } else if (key == "R" || key == "x" || key == "y") {
      const auto w = words(v);
      if (w.size() != 3) bad(section, key, "expected 'min max n'");
      AxisConfig &a = axis_slot(cfg, coord_from_string(key));
      a.min = to_double(section, key, w[0]);
      a.max = to_double(section, key, w[1]);
      a.n = to_count(section, key, w[2]);
    } else {
      unknown();
    }
  } else if (section == "magnetic") {
    if (key == "B") {
      const auto b = to_list(section, key, v);
      if (b.size() != 3) bad(section, key, "expected three components (tesla)");
      cfg.B_tesla = {b[0], b[1], b[2]};
    } else {
      unknown();
    }
  } else if (section == "solver") {
    if (key == "k") cfg.k = to_count(section, key, v);
    else if (key == "tol") cfg.solver.tol = to_double(section, key, v);
    else if (key == "block_size") cfg.solver.block_size = to_count(section, key, v);
    else if (key == "max_restarts") cfg.solver.max_restarts = to_count(section, key, v);
    else if (key == "slice_target") cfg.solver.slice_target = to_count(section, key, v);
    else if (key == "mode") cfg.solver.mode = mode_from(section, key, v);
    else if (key == "cluster_tol") cfg.solver.cluster_tol = to_double(section, key, v);
    else if (key == "symmetry") cfg.use_symmetry = to_bool(section, key, v);
    else unknown();
  } else if (section == "analysis") {
    if (key == "qc_threshold") cfg.analysis.qc_relative_threshold = to_double(section, key, v);
    else if (key == "window") cfg.analysis.window = to_count(section, key, v);
    else if (key == "window_min") cfg.analysis.window_min_count = to_count(section, key, v);
    else if (key == "dump_vectors") cfg.dump_vectors = to_count(section, key, v);
    else unknown();
  } else if (section == "reference") {
    auto &r = cfg.reference;
    if (key == "binding_ev") r.binding_ev = to_optional(section, key, v);
    else if (key == "first_qc_ev") r.first_qc_ev = to_optional(section, key, v);
    else if (key == "proliferation_ev") r.proliferation_ev = to_optional(section, key, v);
    else if (key == "first_qc_energy") r.first_qc_energy = to_optional(section, key, v);
    else if (key == "proliferation_energy") r.proliferation_energy = to_optional(section, key, v);
    else if (key == "binding_tol") r.binding_tol = to_double(section, key, v);
    else if (key == "first_qc_tol") r.first_qc_tol = to_double(section, key, v);
    else if (key == "proliferation_tol") r.proliferation_tol = to_double(section, key, v);
    else unknown();
  } else if (section == "sweep") {
    if (!cfg.sweep) cfg.sweep = SweepConfig{};
    if (key == "axis") {
      try {
        cfg.sweep->axis = sweep_axis_from_string(v);
      } catch (const Error &e) {
        bad(section, key, e.what());
      }
    } else if (key == "values") {
      cfg.sweep->values = to_list(section, key, v);
    } else {
      unknown();
    }
  } else if (section == "control") {
    auto &c = cfg.control;
    if (key == "initial") c.initial = to_count(section, key, v);
    else if (key == "final") c.final_state = to_count(section, key, v);
    else if (key == "coordinate") c.coordinate = coord_from_string(v);
    else if (key == "omega_span") c.omega_span = to_double(section, key, v);
    else if (key == "omega_count") c.omega_count = to_count(section, key, v);
    else if (key == "T") c.T_values = to_list(section, key, v);
    else if (key == "E_field") c.E_field = to_double(section, key, v);
    else if (key == "prefactor") c.prefactor = to_double(section, key, v);
    else unknown();
  } else if (section == "quasistatic") {
    auto &q = cfg.quasistatic;
    if (key == "R_min") q.R_min = to_double(section, key, v);
    else if (key == "R_max") q.R_max = to_double(section, key, v);
    else if (key == "R_count") q.R_count = to_count(section, key, v);
    else if (key == "beta_count") q.beta_count = to_count(section, key, v);
    else if (key == "n_xi") q.n_xi = to_count(section, key, v);
    else if (key == "n_eta") q.n_eta = to_count(section, key, v);
    else unknown();
  } else {
    throw ConfigError("unknown section [" + std::string(section) + "]");
  }
}

RunConfig parse_config(std::string_view text, const RunConfig &base) {
  RunConfig cfg = base;
  // A preset line seeds every other value, wherever it appears.
  std::vector<std::tuple<std::string, std::string, std::string, int>> entries;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key outside a section");
    entries.emplace_back(section, std::string(trim(line.substr(0, eq))),
                         std::string(trim(line.substr(eq + 1))), line_no);
  }
  for (const auto &[sec, key, value, ln] : entries) {
    if (sec == "run" && key == "preset" && !value.empty()) cfg = preset_config(value);
  }
  for (const auto &[sec, key, value, ln] : entries) {
    if (sec == "run" && key == "preset") continue;
    try {
      set_config_value(cfg, sec, key, value);
    } catch (const ConfigError &e) {
      throw ConfigError("line " + std::to_string(ln) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string &path, const RunConfig &base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

void apply_override(RunConfig &cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
    throw ConfigError("override must look like section.key=value");
  const auto section = trim(assignment.substr(0, dot));
  const auto key = trim(assignment.substr(dot + 1, eq - dot - 1));
  const auto value = assignment.substr(eq + 1);
  if (section == "run" && key == "preset") {
    const RunConfig keep = cfg;
    cfg = preset_config(trim(value));
    cfg.output_dir = keep.output_dir;
    return;
  }
  set_config_value(cfg, section, key, value);
}

std::string serialize_config(const RunConfig &c) {
  std::ostringstream o;
  o << "[run]\n";
  o << "command = " << c.command << "\n";
  if (!c.preset.empty()) o << "label = " << c.preset << "\n";
  o << "output = " << c.output_dir << "\n";
  o << "seed = " << c.solver.seed << "\n";
  o << "\n[system]\n";
  o << "light_mass = " << format_number(c.light_mass) << "\n";
  o << "heavy_mass = " << format_number(c.heavy_mass) << "\n";
  o << "Z = " << format_number(c.Z) << "\n";
  o << "mu = " << format_number(c.mu) << "\n";
  o << "\n[grid]\n";
  o << "form = " << to_string(c.form) << "\n";
  o << "centering = " << (c.centering == Centering::cell ? "cell" : "node") << "\n";
  o << "softening = " << format_number(c.softening) << "\n";
  o << "closure = " << (c.closure == WallClosure::reflect ? "reflect" : "truncate") << "\n";
  o << "axes =";
  for (const auto &a : c.axes) o << ' ' << to_string(a.name);
  o << "\n";
  for (const auto &a : c.axes)
    o << to_string(a.name) << " = " << format_number(a.min) << ' ' << format_number(a.max) << ' ' << a.n << "\n";
  o << "\n[magnetic]\n";
  o << "B = " << format_number(c.B_tesla[0]) << ' ' << format_number(c.B_tesla[1]) << ' '
    << format_number(c.B_tesla[2]) << "\n";
  o << "\n[solver]\n";
  o << "k = " << c.k << "\n";
  o << "tol = " << format_number(c.solver.tol) << "\n";
  o << "block_size = " << c.solver.block_size << "\n";
  o << "max_restarts = " << c.solver.max_restarts << "\n";
  o << "slice_target = " << c.solver.slice_target << "\n";
  o << "mode = " << mode_text(c.solver.mode) << "\n";
  o << "cluster_tol = " << format_number(c.solver.cluster_tol) << "\n";
  o << "symmetry = " << (c.use_symmetry ? "true" : "false") << "\n";
  o << "\n[analysis]\n";
  o << "qc_threshold = " << format_number(c.analysis.qc_relative_threshold) << "\n";
  o << "window = " << c.analysis.window << "\n";
  o << "window_min = " << c.analysis.window_min_count << "\n";
  o << "dump_vectors = " << c.dump_vectors << "\n";
  o << "\n[reference]\n";
  o << "binding_ev = " << optional_text(c.reference.binding_ev) << "\n";
  o << "first_qc_ev = " << optional_text(c.reference.first_qc_ev) << "\n";
  o << "proliferation_ev = " << optional_text(c.reference.proliferation_ev) << "\n";
  o << "first_qc_energy = " << optional_text(c.reference.first_qc_energy) << "\n";
  o << "proliferation_energy = " << optional_text(c.reference.proliferation_energy) << "\n";
  o << "binding_tol = " << format_number(c.reference.binding_tol) << "\n";
  o << "first_qc_tol = " << format_number(c.reference.first_qc_tol) << "\n";
  o << "proliferation_tol = " << format_number(c.reference.proliferation_tol) << "\n";
  if (c.sweep) {
    o << "\n[sweep]\n";
    o << "axis = " << to_string(c.sweep->axis) << "\n";
    o << "values = " << list_text(c.sweep->values) << "\n";
  }
  o << "\n[control]\n";
  o << "initial = " << c.control.initial << "\n";
  o << "final = " << c.control.final_state << "\n";
  o << "coordinate = " << to_string(c.control.coordinate) << "\n";
  o << "omega_span = " << format_number(c.control.omega_span) << "\n";
  o << "omega_count = " << c.control.omega_count << "\n";
  o << "T = " << list_text(c.control.T_values) << "\n";
  o << "E_field = " << format_number(c.control.E_field) << "\n";
  o << "prefactor = " << format_number(c.control.prefactor) << "\n";
  o << "\n[quasistatic]\n";
  o << "R_min = " << format_number(c.quasistatic.R_min) << "\n";
  o << "R_max = " << format_number(c.quasistatic.R_max) << "\n";
  o << "R_count = " << c.quasistatic.R_count << "\n";
  o << "beta_count = " << c.quasistatic.beta_count << "\n";
  o << "n_xi = " << c.quasistatic.n_xi << "\n";
  o << "n_eta = " << c.quasistatic.n_eta << "\n";
  return o.str();
}

void validate(const RunConfig &c) {
  static const std::vector<std::string> commands{"solve", "quasistatic", "sweep", "control"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
    throw ConfigError("run.command: unknown command '" + c.command + "'");
  if (c.output_dir.empty()) throw ConfigError("run.output: empty output directory");
  if (c.light_mass < 0.0 || c.heavy_mass < 0.0) throw ConfigError("system: masses must be positive");
  if (!(c.Z > 0.0)) throw ConfigError("system.Z must be positive");
  if (c.mu < 0.0 || c.mu > 1.0) throw ConfigError("system.mu must lie in (0, 1]");
  if (c.softening < 0.0) throw ConfigError("grid.softening must be >= 0");
  if (c.k == 0) throw ConfigError("solver.k must be positive");
  if (!(c.solver.tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (c.solver.block_size == 0) throw ConfigError("solver.block_size must be positive");
  if (!(c.analysis.qc_relative_threshold > 0.0)) throw ConfigError("analysis.qc_threshold must be positive");
  if (c.analysis.window == 0 || c.analysis.window_min_count == 0 ||
      c.analysis.window_min_count > c.analysis.window)
    throw ConfigError("analysis: window_min must lie in [1, window]");

  if (c.command != "quasistatic") {
    if (c.form == Form::prolate_fixed_R) throw ConfigError("grid.form: prolate is only used by quasistatic");
    const std::size_t want = coordinate_count(c.form) - 0;
    if (c.axes.size() != want)
      throw ConfigError("grid: form " + std::string(to_string(c.form)) + " needs " + std::to_string(want) + " axes");
    for (const auto &a : c.axes) {
      if (!(a.max > a.min)) throw ConfigError("grid." + std::string(to_string(a.name)) + ": min must be below max");
      if (a.n < 4) throw ConfigError("grid." + std::string(to_string(a.name)) + ": need at least 4 points");
    }
    std::size_t total = 1;
    for (const auto &a : c.axes) total *= a.n;
    // Sweep rows resize the grid and clamp k themselves.
    if (c.command != "sweep" && c.k > total) throw ConfigError("solver.k exceeds the number of grid points");
  }
  if (c.command == "sweep") {
    if (!c.sweep || c.sweep->values.empty()) throw ConfigError("sweep.values must not be empty");
    const auto &v = c.sweep->values;
    const bool up = std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
    const bool down = std::adjacent_find(v.begin(), v.end(), std::less_equal<>()) == v.end();
    if (!up && !down) throw ConfigError("sweep.values must be strictly monotone");
    for (double x : v) {
      if (c.sweep->axis == SweepAxis::mu && !(x > 0.0 && x <= 1.0)) throw ConfigError("sweep: mu values must lie in (0, 1]");
      if (!(x > 0.0)) throw ConfigError("sweep values must be positive");
    }
  }
  if (c.command == "control") {
    if (c.control.initial == c.control.final_state) throw ConfigError("control: initial and final states coincide");
    if (std::max(c.control.initial, c.control.final_state) >= c.k)
      throw ConfigError("control: state index beyond solver.k");
    if (c.control.omega_count < 3) throw ConfigError("control.omega_count must be >= 3");
    if (!(c.control.omega_span > 0.0)) throw ConfigError("control.omega_span must be positive");
    if (c.control.T_values.empty()) throw ConfigError("control.T must list at least one duration");
    for (double T : c.control.T_values)
      if (!(T > 0.0)) throw ConfigError("control.T values must be positive");
    if (c.control.E_field < 0.0) throw ConfigError("control.E_field must be >= 0");
  }
  if (c.command == "quasistatic") {
    const auto &q = c.quasistatic;
    if (!(q.R_min > 0.0) || !(q.R_max > q.R_min) || q.R_count < 3)
      throw ConfigError("quasistatic: need 0 < R_min < R_max and R_count >= 3");
    if (q.beta_count == 0 || q.n_xi < 4 || q.n_eta < 4) throw ConfigError("quasistatic: grid or beta_count too small");
  }
}

std::vector<std::string> preset_names() {
  return {"planar-deuteron", "cylinder-deuteron", "threevar-deuteron", "mu-study",
          "basis-convergence", "resonance"};
}

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.preset = std::string(name);
  c.mu = 0.00027;
  if (name == "planar-deuteron") {
    c.form = Form::planar_2var;
    c.axes = {{Coord::R, -15.0, 15.0, 148}, {Coord::x, -15.0, 15.0, 148}};
    c.k = 4000;
    c.reference.binding_ev = 120.0;
    c.reference.first_qc_ev = 160.0;
    c.reference.proliferation_ev = 500.0;
  } else if (name == "cylinder-deuteron") {
    c.form = Form::cylinder_2var;
    c.axes = {{Coord::R, -15.0, 15.0, 148}, {Coord::x, 0.0, 15.0, 74}};
    c.k = 3000;
    c.reference.first_qc_ev = 389.0;
    c.reference.proliferation_ev = 540.0;
  } else if (name == "threevar-deuteron") {
    c.form = Form::cylinder_3var;
    // x spans [-L, L] as in the cylinder-section picture; the vanishing radial
    // weight at x = 0 decouples the halves, so levels come in mirror pairs.
    c.axes = {{Coord::R, -15.0, 15.0, 28}, {Coord::x, -15.0, 15.0, 28}, {Coord::y, -15.0, 15.0, 28}};
    c.k = 5000;
    c.reference.first_qc_energy = 2.8;
    c.reference.proliferation_energy = 3.59;
  } else if (name == "mu-study") {
    c.command = "sweep";
    c.form = Form::planar_2var;
    c.axes = {{Coord::R, -15.0, 15.0, 148}, {Coord::x, -15.0, 15.0, 148}};
    c.k = 1200;
    c.sweep = SweepConfig{SweepAxis::mu, {0.00027, 0.01, 0.1}};
  } else if (name == "basis-convergence") {
    c.command = "sweep";
    c.form = Form::cylinder_2var;
    c.axes = {{Coord::R, -15.0, 15.0, 40}, {Coord::x, 0.0, 15.0, 40}};
    c.k = 3000;
    c.sweep = SweepConfig{SweepAxis::basis_size, {1600, 3600, 6400, 10000, 19600}};
  } else if (name == "resonance") {
    c.command = "control";
    c.form = Form::planar_2var;
    c.axes = {{Coord::R, -15.0, 15.0, 40}, {Coord::x, -15.0, 15.0, 40}};
    c.k = 8;
    c.control.initial = 0;
    c.control.final_state = 2;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  c.output_dir = "qcs_" + std::string(name);
  return c;
}

GridSpec build_grid(const RunConfig &c) {
  std::vector<AxisRequest> req;
  for (const auto &a : c.axes) req.push_back({a.name, a.min, a.max, a.n, c.centering});
  return make_box_grid(req);
}

PhysicalSystem build_system(const RunConfig &c) {
  const double light = c.light_mass > 0.0 ? c.light_mass : codata::electron_mass;
  const double heavy = c.heavy_mass > 0.0 ? c.heavy_mass : codata::deuteron_mass;
  return derive_system(light, heavy, c.Z);
}

double effective_mu(const RunConfig &c) { return c.mu > 0.0 ? c.mu : build_system(c).mu; }

HamiltonianOptions hamiltonian_options(const RunConfig &c) {
  HamiltonianOptions h;
  h.form = c.form;
  h.mu = effective_mu(c);
  h.Z = c.Z;
  h.softening = c.softening;
  h.closure = c.closure;
  if (c.B_tesla[0] != 0.0 || c.B_tesla[1] != 0.0 || c.B_tesla[2] != 0.0)
    h.magnetic = MagneticSpec::for_system(build_system(c), c.B_tesla);
  return h;
}

} // namespace qcs
