// qcs: command-line front end.
//
//   qcs solve --preset planar-deuteron --output out/planar
//   qcs sweep --config mu.ini --set solver.k=800
//   qcs presets
//
// Exit status: 0 success, 1 invalid config, 2 convergence failure, 3 internal error.

#include "qcs/commands.hpp"
#include "qcs/run_config.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <iostream>

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::string output;
  std::vector<std::string> overrides;
  bool dry_run = false;
};

void add_common(CLI::App *cmd, Options &o) {
  cmd->add_option("-c,--config", o.config, "configuration file (INI style)")->check(CLI::ExistingFile);
  cmd->add_option("-p,--preset", o.preset, "start from a named preset");
  cmd->add_option("-o,--output", o.output, "output directory");
  cmd->add_option("-s,--set", o.overrides, "override, e.g. solver.k=800 (repeatable)");
  cmd->add_flag("--dry-run", o.dry_run, "validate and print the effective config, then exit");
}

int apply_threads() {
  // Eigen only parallelises when built with OpenMP; the setting is harmless otherwise.
  if (const char *env = std::getenv("QCS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }
  return Eigen::nbThreads();
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Confined three-body spectra and quasi-collision analysis"};
  app.require_subcommand(1);
  Options opt;
  std::string command;
  for (const char *name : {"solve", "quasistatic", "sweep", "control"}) {
    auto *sub = app.add_subcommand(name, std::string("run the ") + name + " command");
    add_common(sub, opt);
    sub->callback([&command, name]() { command = name; });
  }
  auto *presets = app.add_subcommand("presets", "list the built-in presets");
  auto *show = app.add_subcommand("show-preset", "print a preset as a config file");
  std::string show_name;
  show->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(qcs::ExitCode::invalid_config);
  }

  try {
    if (presets->parsed()) {
      for (const auto &n : qcs::preset_names()) std::cout << n << "\n";
      return 0;
    }
    if (show->parsed()) {
      std::cout << qcs::serialize_config(qcs::preset_config(show_name));
      return 0;
    }

    qcs::RunConfig cfg;
    if (!opt.preset.empty()) cfg = qcs::preset_config(opt.preset);
    if (!opt.config.empty()) cfg = qcs::load_config(opt.config, cfg);
    for (const auto &o : opt.overrides) qcs::apply_override(cfg, o);
    cfg.command = command;
    if (!opt.output.empty()) cfg.output_dir = opt.output;
    qcs::validate(cfg);
    if (opt.dry_run) {
      std::cout << qcs::serialize_config(cfg);
      return 0;
    }
    std::cerr << "qcs: threads " << apply_threads() << "\n";
    return static_cast<int>(qcs::run_command(cfg, std::cerr));
  } catch (const qcs::InvalidParameter &e) {
    std::cerr << "error: invalid configuration: " << e.what() << "\n";
    return static_cast<int>(qcs::ExitCode::invalid_config);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(qcs::ExitCode::internal_error);
  }
}
