#include <cstdio>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "kglab/errors.hpp"
#include "kglab/lab/checks.hpp"
#include "kglab/lab/config.hpp"
#include "kglab/lab/persist.hpp"
#include "kglab/lab/recipes.hpp"

using namespace kglab;

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the NLKG soliton"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one experiment recipe");
  std::string config_path, experiment, out;
  std::uint64_t seed = 0;
  run->add_option("--config", config_path, "key=value config file")->required();
  run->add_option("--experiment", experiment, "recipe name overriding the config");
  run->add_option("--out", out, "output directory overriding the config");
  auto* seed_opt = run->add_option("--seed", seed, "seed overriding the config");

  auto* check = app.add_subcommand("check", "Run the assertion suite");
  std::string report_path = "lab_check/report.json";
  std::uint64_t check_seed = 1;
  std::set<int> only;
  bool quiet = false;
  check->add_option("--out", report_path, "report JSON path");
  check->add_option("--seed", check_seed, "base seed");
  check->add_option("--only", only, "criterion ids to run")->check(CLI::Range(1, 9));
  check->add_flag("--quiet", quiet, "no progress on stderr");

  CLI11_PARSE(app, argc, argv);

  std::string experiment_name;
  try {
    if (*run) {
      lab::LabConfig cfg = lab::load_config(config_path);
      if (!experiment.empty()) cfg.experiment = experiment;
      experiment_name = cfg.experiment;
      if (!out.empty()) cfg.output_dir = out;
      if (*seed_opt) cfg.seed = seed;
      cfg.validate();
      const lab::RunManifest m = lab::run_experiment(cfg);
      for (const auto& c : m.checks()) std::printf("%s %s%s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.hard ? "" : " (soft)");
      std::printf("manifest: %s\n", m.path("manifest.json").c_str());
      return m.all_passed() ? 0 : 1;
    }
    lab::CheckOptions opt;
    opt.seed = check_seed;
    opt.only = only;
    if (!quiet) opt.progress = [](const std::string& s) { std::cerr << s << std::endl; };
    const lab::CheckReport rep = lab::run_checks(opt);
    lab::write_json(report_path, rep.to_json());
    for (const auto& c : rep.criteria)
      std::printf("%s %d %s (%.1f s)\n", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(), c.seconds);
    std::printf("report: %s\n", report_path.c_str());
    return rep.all_passed() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const RecipeError& e) {
    std::cerr << "recipe error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error" << (*run ? " in " + experiment_name : std::string()) << ": " << e.what() << "\n";
    return 3;
  }
}
