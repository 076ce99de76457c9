#include "qcs/commands.hpp"

#include "qcs/bundle_io.hpp"
#include "qcs/control.hpp"
#include "qcs/pipeline.hpp"
#include "qcs/quasistatic.hpp"
#include "qcs/sweeps.hpp"
#include "qcs/symmetry.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

namespace qcs {
namespace fs = std::filesystem;

namespace {

fs::path prepare(const RunConfig &cfg) {
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

Manifest start_manifest(const RunConfig &cfg) {
  Manifest m(cfg.command, serialize_config(cfg));
  m.set_seed(cfg.solver.seed);
  m.set_units(build_system(cfg), effective_mu(cfg));
  return m;
}

void finish(Manifest &m, const fs::path &dir) {
  m.add_file("manifest.json");
  write_text(dir / "manifest.json", m.dump());
}

} // namespace

ExitCode cmd_solve(const RunConfig &cfg, std::ostream &log) {
  validate(cfg);
  const fs::path dir = prepare(cfg);
  log << "solve: form " << to_string(cfg.form) << ", k = " << cfg.k << "\n";
  const SolveOutcome o = run_solve(cfg);

  Manifest m = start_manifest(cfg);
  m.set_grid(o.grid_hash, o.dimension);
  m.set_stats(o.stats);
  m.set_summary(o.summary, o.residuals);
  m.set_result("symmetry_sectors", static_cast<double>(o.sectors));
  write_text(dir / "states.csv", states_csv(o.summary));
  m.add_file("states.csv");
  if (o.vectors.cols() > 0) {
    write_vectors(dir / "vectors.bin", build_grid(cfg), o.vectors);
    m.add_file("vectors.bin");
  }
  for (const auto &d : o.discrepancies) m.add_discrepancy(d);
  for (const auto &w : o.warnings) m.add_warning(w);
  if (!o.complete) {
    m.set_status("partial");
    m.add_warning(o.failure);
  }
  finish(m, dir);

  log << "solve: " << o.summary.states.size() << " states, ground " << o.summary.ground_energy
      << ", binding " << o.summary.binding_ev << " eV";
  if (o.summary.first_qc_index)
    log << ", first QC #" << *o.summary.first_qc_index << " at " << *o.summary.first_qc_ev << " eV";
  log << "\n";
  for (const auto &d : o.discrepancies) log << "discrepancy: " << d << "\n";
  if (!o.complete) {
    log << "solve: incomplete: " << o.failure << "\n";
    return ExitCode::convergence_failure;
  }
  return ExitCode::ok;
}

ExitCode cmd_quasistatic(const RunConfig &cfg, std::ostream &log) {
  validate(cfg);
  const fs::path dir = prepare(cfg);
  const auto &q = cfg.quasistatic;
  QuasistaticOptions opts;
  opts.n_xi = q.n_xi;
  opts.n_eta = q.n_eta;
  opts.solver = cfg.solver;
  const auto R = log_spaced(q.R_min, q.R_max, q.R_count);
  log << "quasistatic: " << R.size() << " separations in [" << q.R_min << ", " << q.R_max << "]\n";
  const auto curve = effective_potential_scan(R, cfg.Z, q.beta_count, opts);

  Manifest m = start_manifest(cfg);
  write_text(dir / "curve.csv", curve_csv(curve));
  m.add_file("curve.csv");
  m.set_result("repulsive_at_origin", curve.repulsive_at_origin);
  double worst = 0.0;
  for (double s : curve.truncation_shift) worst = std::max(worst, std::abs(s));
  m.set_result("max_truncation_shift", worst);
  if (worst > 1e-3) m.add_warning("xi truncation did not settle below 1e-3 at every R");
  finish(m, dir);
  log << "quasistatic: repulsive_at_origin = " << (curve.repulsive_at_origin ? "true" : "false") << "\n";
  return ExitCode::ok;
}

ExitCode cmd_sweep(const RunConfig &cfg, std::ostream &log) {
  validate(cfg);
  const fs::path dir = prepare(cfg);
  const SweepPlan plan = SweepPlan::from_config(cfg);
  log << "sweep: " << to_string(plan.axis) << " over " << plan.values.size() << " values\n";
  const SweepResult r = run_sweep(plan);

  Manifest m = start_manifest(cfg);
  write_text(dir / "sweep.csv", sweep_csv(plan.axis, r.rows));
  m.add_file("sweep.csv");
  m.set_sweep(r);
  bool all_ok = true;
  for (const auto &row : r.rows) {
    log << "  " << row.value << ": " << (row.ok ? "ok" : "failed " + row.error);
    if (row.first_qc_index) log << ", first QC #" << *row.first_qc_index << " at " << *row.first_qc_ev << " eV";
    log << "\n";
    if (!row.ok) {
      all_ok = false;
      m.add_warning("row " + format_number(row.value) + ": " + row.error);
    }
  }
  if (!all_ok) m.set_status("partial");
  finish(m, dir);
  return all_ok ? ExitCode::ok : ExitCode::convergence_failure;
}

ExitCode cmd_control(const RunConfig &cfg, std::ostream &log) {
  validate(cfg);
  const fs::path dir = prepare(cfg);
  const SparseOperator op = build_operator(cfg);
  const auto &c = cfg.control;
  const std::size_t k = std::max(c.initial, c.final_state) + 1;

  std::unique_ptr<SymmetryReduction> reduction;
  if (cfg.use_symmetry && !symmetric_axes(op.grid()).empty()) {
    try {
      reduction = std::make_unique<SymmetryReduction>(op, symmetric_axes(op.grid()));
    } catch (const InvalidParameter &) {
      reduction.reset();
    }
  }
  std::vector<Vector> vecs;
  std::vector<double> vals;
  const EigenSolution sol = solve_lowest_streaming(op, k, cfg.solver, reduction.get(), [&](const EigenSolution &s) {
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
      vecs.push_back(s.eigenvectors.col(i));
      vals.push_back(s.eigenvalues[i]);
    }
  });
  if (vecs.size() < k) throw ConvergenceError("control: eigenpairs missing", sol);

  const Vector &phi_i = vecs[c.initial];
  const Vector &phi_f = vecs[c.final_state];
  const double delta_eps = vals[c.final_state] - vals[c.initial];
  const PotentialSpec spec{cfg.Z, cfg.form, cfg.softening};
  const double grad = gradient_matrix_element(phi_i, phi_f, op, spec, c.coordinate);
  const double dip = dipole_matrix_element(phi_i, phi_f, op, c.coordinate);

  const auto omegas = linspace(delta_eps - c.omega_span, delta_eps + c.omega_span, c.omega_count);
  const ResonanceScan scan = resonance_scan(omegas, c.T_values, delta_eps, grad, c.E_field, c.prefactor);
  const double step = omegas.size() > 1 ? omegas[1] - omegas[0] : 0.0;
  bool peak_on_resonance = true;
  for (double w : scan.peak_omega) peak_on_resonance = peak_on_resonance && std::abs(w - delta_eps) <= step;

  Manifest m = start_manifest(cfg);
  m.set_grid(op.grid().hash(), op.dimension());
  m.set_stats(sol.stats);
  write_text(dir / "scan.csv", scan_csv(scan));
  m.add_file("scan.csv");
  m.set_result("delta_eps", delta_eps);
  m.set_result("gradient_matrix_element", grad);
  m.set_result("dipole_matrix_element", dip);
  m.set_result("T_exponent", scan.T_exponent);
  m.set_result("omega_step", step);
  m.set_result("peak_on_resonance", peak_on_resonance);
  m.set_result("spans_resonance", scan.spans_resonance);
  if (!scan.spans_resonance) m.add_warning("omega grid does not span the resonance");
  if (std::abs(grad) < 1e-10) m.add_warning("matrix element vanishes; transition forbidden by parity");
  finish(m, dir);
  log << "control: delta_eps " << delta_eps << ", <f|dV/d" << to_string(c.coordinate) << "|i> " << grad
      << ", T exponent " << scan.T_exponent << "\n";
  return ExitCode::ok;
}

ExitCode run_command(const RunConfig &cfg, std::ostream &log) {
  try {
    if (cfg.command == "solve") return cmd_solve(cfg, log);
    if (cfg.command == "quasistatic") return cmd_quasistatic(cfg, log);
    if (cfg.command == "sweep") return cmd_sweep(cfg, log);
    if (cfg.command == "control") return cmd_control(cfg, log);
    log << "error: unknown command '" << cfg.command << "'\n";
    return ExitCode::invalid_config;
  } catch (const InvalidParameter &e) {
    log << "error: invalid configuration: " << e.what() << "\n";
    return ExitCode::invalid_config;
  } catch (const ConvergenceError &e) {
    log << "error: " << e.what() << "\n";
    return ExitCode::convergence_failure;
  } catch (const std::exception &e) {
    log << "error: " << e.what() << "\n";
    return ExitCode::internal_error;
  }
}

} // namespace qcs
