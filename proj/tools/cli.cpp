#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "utpp/config.hpp"
#include "utpp/report.hpp"
#include "utpp/sim.hpp"

namespace utpp::cli {

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string controller;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::string noise;
  std::string road_file;
  std::string out_dir = ".";
};

void add_common(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("-c,--config", args.config_path, "scenario config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--steps", args.steps, "override sim.steps")->check(CLI::PositiveNumber);
  cmd.add_option("--noise", args.noise, "override noise: on|off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd.add_option("--road", args.road_file, "replace the road with a waypoint file (x,y rows)")
      ->check(CLI::ExistingFile);
  cmd.add_option("-o,--out", args.out_dir, "output directory (created if missing)");
}

ScenarioOverrides overrides_from(const CommonArgs& args) {
  ScenarioOverrides o;
  if (!args.controller.empty()) o.controller = parse_controller(args.controller);
  o.seed = args.seed;
  o.steps = args.steps;
  if (!args.noise.empty()) o.noise = args.noise == "on";
  if (!args.road_file.empty()) o.waypoint_file = args.road_file;
  return o;
}

void write_file(const fs::path& path, const auto& writer) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  writer(f);
  f.flush();
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_metadata(std::ostream& out, const Scenario& s, std::uint64_t seed) {
  out << "controller: " << to_string(s.controller) << '\n'
      << "seed: " << seed << '\n'
      << "steps: " << s.steps << '\n'
      << "dt: " << format_number(s.dt) << '\n'
      << "paper_literal: " << (s.paper_literal ? "true" : "false") << '\n'
      << "noise: " << (s.noise ? "on" : "off") << '\n'
      << "rng: " << kNoiseEngineName << '\n'
      << "waypoint_selection: nearest waypoint to the probe point d_l ahead of the rear axle\n"
      << "fault_policy: hold previous steering command\n";
}

int do_run(const CommonArgs& args, bool svg, std::ostream& out) {
  const Scenario scenario = apply_overrides(parse_config(args.config_path), overrides_from(args));
  const fs::path dir = args.out_dir;
  fs::create_directories(dir);

  const RunResult result = run(scenario);
  emit_csv(result.records, dir / "trajectory.csv");
  write_file(dir / "summary.csv", [&](std::ostream& f) {
    write_summary_csv(std::span(&result.summary, 1), f);
  });
  write_file(dir / "metadata.txt",
             [&](std::ostream& f) { write_metadata(f, scenario, result.summary.seed); });
  if (svg) emit_svg(result.records, scenario.road, dir / "trajectory.svg");

  write_summary_csv(std::span(&result.summary, 1), out);
  return 0;
}

int do_batch(const CommonArgs& args, int n, unsigned threads, std::ostream& out) {
  const Scenario base = apply_overrides(parse_config(args.config_path), overrides_from(args));
  const std::uint64_t seed = base.noise ? base.noise->rng_seed : 0;
  const fs::path dir = args.out_dir;
  fs::create_directories(dir);

  std::vector<Controller> controllers;
  if (!args.controller.empty()) {
    controllers.push_back(base.controller);
  } else {
    controllers = {Controller::pp, Controller::utpp};
  }

  std::vector<RunSummary> all_runs;
  std::vector<BatchAggregate> aggregates;
  for (Controller c : controllers) {
    ScenarioOverrides o;
    o.controller = c;
    Scenario noisy = base;
    // --noise off still leaves utpp a (zero) covariance to spread.
    if (c == Controller::utpp && !noisy.noise) noisy.noise = NoiseModel{{}, 0.3, seed};
    const Scenario s = apply_overrides(noisy, o);
    BatchResult r = run_batch(s, n, seed, threads);
    all_runs.insert(all_runs.end(), r.runs.begin(), r.runs.end());
    aggregates.push_back(r.aggregate);
  }
  write_file(dir / "batch_runs.csv", [&](std::ostream& f) { write_summary_csv(all_runs, f); });
  write_file(dir / "batch_summary.csv",
             [&](std::ostream& f) { write_aggregate_csv(aggregates, f); });
  write_file(dir / "metadata.txt", [&](std::ostream& f) { write_metadata(f, base, seed); });
  write_aggregate_csv(aggregates, out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pure pursuit and unscented-transform pure pursuit path-tracking simulator",
               "utpp"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  CommonArgs run_args;
  bool svg = false;
  auto* run_cmd = app.add_subcommand("run", "simulate one run and write CSV, summary, SVG");
  add_common(*run_cmd, run_args);
  run_cmd->add_option("--controller", run_args.controller, "pp or utpp")
      ->check(CLI::IsMember({"pp", "utpp"}));
  run_cmd->add_option("--seed", run_args.seed, "noise seed");
  run_cmd->add_flag("--svg", svg, "also write trajectory.svg");

  CommonArgs batch_args;
  int n = 0;
  unsigned threads = 0;
  auto* batch_cmd =
      app.add_subcommand("batch", "N seeded runs per controller with aggregate statistics");
  add_common(*batch_cmd, batch_args);
  batch_cmd->add_option("--controller", batch_args.controller,
                        "run only this controller (default: both pp and utpp)")
      ->check(CLI::IsMember({"pp", "utpp"}));
  batch_cmd->add_option("--seed", batch_args.seed, "base seed; run i uses stream (seed, i)");
  batch_cmd->add_option("-n,--n", n, "runs per controller")->required()->check(CLI::PositiveNumber);
  batch_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run_cmd) return do_run(run_args, svg, out);
    return do_batch(batch_args, n, threads, out);
  } catch (const ConfigError& e) {
    err << "utpp: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "utpp: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace utpp::cli
