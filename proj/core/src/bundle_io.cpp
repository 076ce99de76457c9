#include "qcs/bundle_io.hpp"

#include "qcs/units.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#ifndef QCS_VERSION
#define QCS_VERSION "0.0.0"
#endif

namespace qcs {
namespace {

using nlohmann::ordered_json;

std::string opt_index(const std::optional<std::size_t> &v) { return v ? std::to_string(*v) : std::string(); }
std::string opt_number(const std::optional<double> &v) { return v ? csv_number(*v) : std::string(); }

std::string join(const std::vector<std::string> &cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  s += '\n';
  return s;
}

ordered_json json_number(double v) {
  // JSON has no inf/nan; keep them readable as strings.
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

template <class T> ordered_json json_optional(const std::optional<T> &v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) return json_number(*v);
  else return *v;
}

void put_u64(std::ostream &os, std::uint64_t v) { os.write(reinterpret_cast<const char *>(&v), sizeof v); }
void put_f64(std::ostream &os, double v) { os.write(reinterpret_cast<const char *>(&v), sizeof v); }
std::uint64_t get_u64(std::istream &is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char *>(&v), sizeof v);
  return v;
}
double get_f64(std::istream &is) {
  double v = 0;
  is.read(reinterpret_cast<char *>(&v), sizeof v);
  return v;
}

constexpr char kMagic[8] = {'Q', 'C', 'S', 'V', 'E', 'C', '1', '\0'};

} // namespace

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string states_csv(const SpectrumSummary &s) {
  std::string out = join(kStatesColumns);
  for (const auto &r : s.states)
    out += join({std::to_string(r.index), csv_number(r.e_dimensionless), csv_number(r.e_ev), csv_number(r.I0),
                 csv_number(r.psi_origin), std::to_string(r.parity_R), r.is_quasi_collision ? "1" : "0"});
  return out;
}

std::string curve_csv(const EffectivePotentialCurve &c) {
  std::string out = join(kCurveColumns);
  for (std::size_t i = 0; i < c.R_values.size(); ++i)
    for (std::size_t b = 0; b < c.lambda[i].size(); ++b)
      out += join({csv_number(c.R_values[i]), std::to_string(b), csv_number(c.lambda[i][b]),
                   csv_number(c.v_eff[i][b]), csv_number(c.xi_max[i]), csv_number(c.truncation_shift[i])});
  return out;
}

std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow> &rows) {
  std::string out = join(kSweepColumns);
  for (const auto &r : rows) {
    std::string err = r.error;
    for (char &ch : err)
      if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    out += join({std::string(to_string(axis)), csv_number(r.value), r.ok ? "1" : "0", std::to_string(r.dimension),
                 std::to_string(r.states), r.ok ? csv_number(r.ground_energy) : "",
                 r.ok ? csv_number(r.binding_ev) : "", opt_index(r.first_qc_index), opt_number(r.first_qc_ev),
                 opt_number(r.proliferation_ev), r.ground_is_qc ? "1" : "0", std::to_string(r.qc_below_first),
                 r.grid_hash, std::to_string(r.seed), err});
  }
  return out;
}

std::string scan_csv(const ResonanceScan &scan) {
  std::string out = join(kScanColumns);
  for (const auto &r : scan.rows)
    out += join({csv_number(r.omega), csv_number(r.T), csv_number(r.amplitude), csv_number(r.delta)});
  return out;
}

std::size_t CsvTable::column(const std::string &name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw IoError("csv: no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string &name) const {
  const std::string &cell = rows.at(row).at(column(name));
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw IoError("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw IoError("csv: '" + cell + "' in column " + name + " is not a number");
  }
}

CsvTable parse_csv(const std::string &text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size())
        throw IoError("csv: row with " + std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw IoError("csv: empty input");
  return t;
}

CsvTable read_csv(const std::filesystem::path &path) { return parse_csv(read_text(path)); }

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_vectors(const std::filesystem::path &path, const GridSpec &grid, const Matrix &vectors) {
  if (static_cast<std::size_t>(vectors.rows()) != grid.total_points())
    throw InvalidParameter("vector length does not match the grid");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(kMagic, sizeof kMagic);
  put_u64(out, grid.rank());
  for (const auto &a : grid.axes()) {
    put_u64(out, a.n);
    put_f64(out, a.min);
    put_f64(out, a.max);
  }
  put_u64(out, grid.total_points());
  put_u64(out, static_cast<std::uint64_t>(vectors.cols()));
  out.write(reinterpret_cast<const char *>(vectors.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(vectors.size())));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Matrix read_vectors(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw IoError("not an eigenvector dump");
  const auto rank = get_u64(in);
  if (rank == 0 || rank > 3) throw IoError("eigenvector dump: bad rank");
  std::uint64_t expected = 1;
  for (std::uint64_t d = 0; d < rank; ++d) {
    expected *= get_u64(in);
    get_f64(in); // axis bounds, kept for external readers
    get_f64(in);
  }
  const auto points = get_u64(in);
  const auto count = get_u64(in);
  if (!in || points != expected) throw IoError("eigenvector dump: bad header");
  Matrix V(static_cast<Eigen::Index>(points), static_cast<Eigen::Index>(count));
  in.read(reinterpret_cast<char *>(V.data()), static_cast<std::streamsize>(sizeof(double) * points * count));
  if (!in) throw IoError("eigenvector dump: truncated data");
  return V;
}

struct Manifest::Impl {
  ordered_json j;
};

Manifest::Manifest(const std::string &command, const std::string &config_text) : impl_(std::make_unique<Impl>()) {
  auto &j = impl_->j;
  j["schema"] = "qcs-manifest/1";
  j["version"] = QCS_VERSION;
  j["command"] = command;
  j["status"] = "ok";
  j["config"] = config_text;
  j["files"] = ordered_json::array();
  j["discrepancies"] = ordered_json::array();
  j["warnings"] = ordered_json::array();
  j["results"] = ordered_json::object();
}

Manifest::~Manifest() = default;
Manifest::Manifest(Manifest &&) noexcept = default;
Manifest &Manifest::operator=(Manifest &&) noexcept = default;

void Manifest::set_status(const std::string &status) { impl_->j["status"] = status; }
void Manifest::set_seed(std::uint64_t seed) { impl_->j["seed"] = seed; }

void Manifest::set_grid(const std::string &hash, std::size_t dimension) {
  impl_->j["grid"] = {{"hash", hash}, {"dimension", dimension}};
}

void Manifest::set_units(const PhysicalSystem &sys, double mu_used) {
  impl_->j["units"] = {
      {"light_mass_kg", sys.light_mass},
      {"heavy_mass_kg", sys.heavy_mass},
      {"Z", sys.charge_number},
      {"G_squared_per_m", sys.G_squared},
      {"mu_derived", sys.mu},
      {"mu_used", mu_used},
      {"length_scale_angstrom", to_angstrom(1.0, sys)},
      {"energy_scale_ev", sys.energy_scale_ev},
      {"magnetic_field_factor_per_tesla", magnetic_field_factor(sys)},
  };
}

void Manifest::set_stats(const SolverStats &s) {
  ordered_json slices = ordered_json::array();
  for (const auto &sl : s.slices)
    slices.push_back({{"lower", json_number(sl.lower)},
                      {"upper", json_number(sl.upper)},
                      {"shift", json_number(sl.shift)},
                      {"count", sl.count},
                      {"restarts", sl.restarts}});
  impl_->j["solver"] = {{"seed", s.seed},
                        {"operator_applications", s.applications},
                        {"restarts", s.restarts},
                        {"factorizations", s.factorizations},
                        {"wall_seconds", s.wall_seconds},
                        {"slice_solves", slices}};
}

void Manifest::set_summary(const SpectrumSummary &s, const Vector &residuals) {
  std::optional<double> first_e, prolif_e;
  if (s.first_qc_index) first_e = s.states[*s.first_qc_index].e_dimensionless;
  if (s.proliferation_index) prolif_e = s.states[*s.proliferation_index].e_dimensionless;
  impl_->j["summary"] = {
      {"states", s.states.size()},
      {"ground_energy", json_number(s.ground_energy)},
      {"binding_ev", json_number(s.binding_ev)},
      {"max_I0", json_number(s.max_I0)},
      {"qc_threshold", json_number(s.threshold)},
      {"first_qc_index", json_optional(s.first_qc_index)},
      {"first_qc_energy", json_optional(first_e)},
      {"first_qc_ev", json_optional(s.first_qc_ev)},
      {"proliferation_index", json_optional(s.proliferation_index)},
      {"proliferation_energy", json_optional(prolif_e)},
      {"proliferation_ev", json_optional(s.proliferation_ev)},
      {"max_residual", residuals.size() ? json_number(residuals.maxCoeff()) : ordered_json(nullptr)},
  };
}

void Manifest::set_result(const std::string &key, double value) { impl_->j["results"][key] = json_number(value); }
void Manifest::set_result(const std::string &key, bool value) { impl_->j["results"][key] = value; }
void Manifest::set_result(const std::string &key, const std::string &value) { impl_->j["results"][key] = value; }
void Manifest::add_discrepancy(const std::string &text) { impl_->j["discrepancies"].push_back(text); }
void Manifest::add_warning(const std::string &text) { impl_->j["warnings"].push_back(text); }
void Manifest::add_file(const std::string &name) { impl_->j["files"].push_back(name); }

void Manifest::set_sweep(const SweepResult &r) {
  ordered_json rows = ordered_json::array();
  for (const auto &row : r.rows)
    rows.push_back({{"value", json_number(row.value)},
                    {"ok", row.ok},
                    {"error", row.error},
                    {"grid_hash", row.grid_hash},
                    {"seed", row.seed},
                    {"wall_seconds", row.wall_seconds}});
  impl_->j["sweep"] = {{"rows", rows},
                       {"first_qc_index_strictly_decreasing", r.indicators.first_qc_index_strictly_decreasing},
                       {"first_qc_ev_nondecreasing", r.indicators.first_qc_ev_nondecreasing},
                       {"ground_energy_spread", json_number(r.indicators.ground_energy_spread)}};
}

std::string Manifest::dump() const { return impl_->j.dump(2) + "\n"; }

} // namespace qcs
