#pragma once

#include "qcs/analysis.hpp"
#include "qcs/control.hpp"
#include "qcs/quasistatic.hpp"
#include "qcs/sweeps.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qcs {

class IoError : public Error {
public:
  using Error::Error;
};

/// Scientific notation with 17 significant digits.
std::string csv_number(double v);

// Fixed column orders; documented in the README.
inline const std::vector<std::string> kStatesColumns{
    "index", "e_dimensionless", "e_ev_above_ground", "I0", "psi_origin", "parity_R", "is_quasi_collision"};
inline const std::vector<std::string> kCurveColumns{"R", "beta", "lambda", "v_eff", "xi_max", "truncation_shift"};
inline const std::vector<std::string> kSweepColumns{
    "axis",        "value",       "ok",               "dimension",    "states",
    "ground_energy", "binding_ev", "first_qc_index",  "first_qc_ev",  "proliferation_ev",
    "ground_is_qc", "qc_below_first", "grid_hash",    "seed",         "error"};
inline const std::vector<std::string> kScanColumns{"omega", "T", "amplitude", "delta"};

std::string states_csv(const SpectrumSummary &s);
std::string curve_csv(const EffectivePotentialCurve &c);
std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow> &rows);
std::string scan_csv(const ResonanceScan &scan);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string &name) const;
  double number(std::size_t row, const std::string &name) const;
};

/// Minimal reader for the files written here (no quoting).
CsvTable parse_csv(const std::string &text);
CsvTable read_csv(const std::filesystem::path &path);

void write_text(const std::filesystem::path &path, const std::string &text);
std::string read_text(const std::filesystem::path &path);

/// Eigenvector dump: "QCSVEC1\0", u64 rank, per axis (u64 n, f64 min, f64 max),
/// u64 points, u64 count, then count * points f64 values (column by column,
/// grid linear order, little endian).
void write_vectors(const std::filesystem::path &path, const GridSpec &grid, const Matrix &vectors);
Matrix read_vectors(const std::filesystem::path &path);

/// Accumulates manifest.json content; JSON handling stays inside the library.
class Manifest {
public:
  Manifest(const std::string &command, const std::string &config_text);
  ~Manifest();
  Manifest(Manifest &&) noexcept;
  Manifest &operator=(Manifest &&) noexcept;

  void set_status(const std::string &status);
  void set_seed(std::uint64_t seed);
  void set_grid(const std::string &hash, std::size_t dimension);
  void set_units(const PhysicalSystem &sys, double mu_used);
  void set_stats(const SolverStats &stats);
  void set_summary(const SpectrumSummary &s, const Vector &residuals);
  void set_result(const std::string &key, double value);
  void set_result(const std::string &key, bool value);
  void set_result(const std::string &key, const std::string &value);
  void add_discrepancy(const std::string &text);
  void add_warning(const std::string &text);
  void add_file(const std::string &name);
  void set_sweep(const SweepResult &r);

  std::string dump() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace qcs
