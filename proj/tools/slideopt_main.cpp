#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "slideopt/bench/config.hpp"
#include "slideopt/bench/log.hpp"
#include "slideopt/bench/runner.hpp"
#include "slideopt/problems.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  int jobs = -1;
  std::string seed_range;
  std::string format;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags.config_path, "experiment config file");
  if (config_required) opt->required();
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--jobs", flags.jobs, "parallel trials (default: cores)");
  cmd->add_option("--seed-range", flags.seed_range, "inclusive seed range A..B");
  cmd->add_option("--format", flags.format, "comma list of csv,json,svg");
}

slideopt::bench::ExperimentConfig load(const CommonFlags& flags) {
  auto cfg = slideopt::bench::ExperimentConfig::from_file(flags.config_path);
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (flags.jobs >= 0) cfg.jobs = flags.jobs;
  if (!flags.format.empty()) {
    cfg.formats.clear();
    std::istringstream ss(flags.format);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.formats.push_back(item);
  }
  if (!flags.seed_range.empty()) {
    const auto dots = flags.seed_range.find("..");
    if (dots == std::string::npos)
      throw std::invalid_argument("--seed-range expects A..B");
    const std::uint64_t a = std::stoull(flags.seed_range.substr(0, dots));
    const std::uint64_t b = std::stoull(flags.seed_range.substr(dots + 2));
    if (b < a) throw std::invalid_argument("--seed-range expects A <= B");
    cfg.seed_start = a;
    cfg.trials = static_cast<int>(b - a + 1);
  }
  cfg.validate();
  return cfg;
}

int report_status(const slideopt::bench::Report& report) {
  if (!report.bounds_hold) {
    std::cerr << "bound violations detected\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient sliding benchmark harness"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, verify_flags;
  std::string verify_instance = "desk_quad_l1";

  auto* run_cmd = app.add_subcommand("run", "run the configured experiment");
  add_common(run_cmd, run_flags, true);

  auto* sweep_cmd =
      app.add_subcommand("sweep", "target-accuracy sweep with slope fits");
  add_common(sweep_cmd, sweep_flags, true);

  auto* verify_cmd = app.add_subcommand(
      "verify-bounds", "run the invariant suite on a named instance");
  verify_cmd->add_option("--instance", verify_instance,
                         "instance preset (see list-problems)");

  auto* list_cmd = app.add_subcommand("list-problems", "list families and presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      auto cfg = load(run_flags);
      auto report = slideopt::bench::run_experiment(cfg);
      std::cout << "wrote " << cfg.out_dir << "/report.{";
      for (size_t i = 0; i < cfg.formats.size(); ++i)
        std::cout << (i ? "," : "") << cfg.formats[i];
      std::cout << "}\n";
      return report_status(report);
    }
    if (sweep_cmd->parsed()) {
      auto cfg = load(sweep_flags);
      auto report = slideopt::bench::complexity_sweep(cfg, cfg.accuracies);
      for (const auto& [name, slope] : report.slopes)
        std::cout << name << " slope: " << slope << "\n";
      return report_status(report);
    }
    if (verify_cmd->parsed()) {
      const bool ok = slideopt::bench::verify_bounds(verify_instance, std::cout);
      return ok ? 0 : 1;
    }
    if (list_cmd->parsed()) {
      std::cout << "families:\n";
      for (const auto& f : slideopt::list_families()) std::cout << "  " << f << "\n";
      std::cout << "presets:\n";
      for (const auto& p : slideopt::list_presets()) std::cout << "  " << p << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
