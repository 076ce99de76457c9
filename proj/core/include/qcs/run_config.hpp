#pragma once

#include "qcs/analysis.hpp"
#include "qcs/eigensolve.hpp"
#include "qcs/grid.hpp"
#include "qcs/operators.hpp"
#include "qcs/potentials.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qcs {

class ConfigError : public InvalidParameter {
public:
  using InvalidParameter::InvalidParameter;
};

struct AxisConfig {
  Coord name = Coord::R;
  double min = -15.0;
  double max = 15.0;
  std::size_t n = 148;
};

/// Expected values and relative tolerances; any miss is listed in the
/// manifest under "discrepancies".
struct ReferenceValues {
  std::optional<double> binding_ev;
  std::optional<double> first_qc_ev;            // above the ground state
  std::optional<double> proliferation_ev;       // above the ground state
  std::optional<double> first_qc_energy;        // dimensionless
  std::optional<double> proliferation_energy;   // dimensionless
  double binding_tol = 0.10;
  double first_qc_tol = 0.20;
  double proliferation_tol = 0.25;
};

enum class SweepAxis { mu, box_half_width, basis_size };
std::string_view to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(std::string_view s);

struct SweepConfig {
  SweepAxis axis = SweepAxis::mu;
  std::vector<double> values;
};

struct ControlConfig {
  std::size_t initial = 0;
  std::size_t final_state = 1;
  Coord coordinate = Coord::R;
  double omega_span = 0.5;       // scan delta_eps +- span
  std::size_t omega_count = 201; // odd keeps delta = 0 on the grid
  std::vector<double> T_values{10.0, 20.0, 50.0, 100.0};
  double E_field = 1.0;
  double prefactor = 1.0;
};

struct QuasistaticConfig {
  double R_min = 0.05;
  double R_max = 20.0;
  std::size_t R_count = 40;
  std::size_t beta_count = 3;
  std::size_t n_xi = 40;
  std::size_t n_eta = 40;
};

struct RunConfig {
  std::string command = "solve";
  std::string preset;
  std::string output_dir = "qcs_out";

  // system
  double light_mass = 0.0; // kg; 0 selects the electron mass
  double heavy_mass = 0.0; // kg; 0 selects the deuteron mass
  double Z = 1.0;
  double mu = 0.0; // 0 derives light_mass / heavy_mass

  // grid and operator
  Form form = Form::planar_2var;
  Centering centering = Centering::cell;
  std::vector<AxisConfig> axes{{Coord::R, -15.0, 15.0, 148}, {Coord::x, -15.0, 15.0, 148}};
  double softening = 0.0;
  WallClosure closure = WallClosure::reflect;
  std::array<double, 3> B_tesla{0.0, 0.0, 0.0};

  // solver
  std::size_t k = 600;
  SolverOptions solver{};
  bool use_symmetry = true;

  AnalysisOptions analysis{};
  std::size_t dump_vectors = 0; // leading eigenvectors written to the bundle

  ReferenceValues reference{};
  std::optional<SweepConfig> sweep;
  ControlConfig control{};
  QuasistaticConfig quasistatic{};
};

/// Parses "[section]" headers and "key = value" lines; '#' starts a comment.
/// Unknown sections or keys are errors.  Values are applied on top of `base`
/// unless the text names a preset, which then replaces it.
RunConfig parse_config(std::string_view text, const RunConfig &base = {});
RunConfig load_config(const std::string &path, const RunConfig &base = {});

/// "section.key=value" override, as accepted on the command line.
void apply_override(RunConfig &cfg, std::string_view assignment);
void set_config_value(RunConfig &cfg, std::string_view section, std::string_view key,
                      std::string_view value);

/// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig &cfg);

/// Throws ConfigError on an inconsistent or out-of-range configuration.
void validate(const RunConfig &cfg);

std::vector<std::string> preset_names();
RunConfig preset_config(std::string_view name);

/// Helpers shared by the commands.
GridSpec build_grid(const RunConfig &cfg);
PhysicalSystem build_system(const RunConfig &cfg);
double effective_mu(const RunConfig &cfg);
HamiltonianOptions hamiltonian_options(const RunConfig &cfg);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

} // namespace qcs
