#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "aloha/config.hpp"
#include "aloha/sweep.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  std::uint64_t slots = 0;
  int reps = 0;
  int jobs = -1;
  double grid = 0.0;
  bool seed_set = false, slots_set = false, reps_set = false, jobs_set = false,
       grid_set = false, out_set = false;
};

void add_common_options(CLI::App* sub, Overrides& ov) {
  sub->add_option("--config", ov.config_path, "run description file")->required();
  sub->add_option("--out", ov.out_path, "output CSV path (default: stdout)")
      ->each([&ov](const std::string&) { ov.out_set = true; });
  sub->add_option("--seed", ov.seed, "base RNG seed")
      ->each([&ov](const std::string&) { ov.seed_set = true; });
  sub->add_option("--slots", ov.slots, "simulated slots per run")
      ->each([&ov](const std::string&) { ov.slots_set = true; });
  sub->add_option("--reps", ov.reps, "independent replications per row")
      ->each([&ov](const std::string&) { ov.reps_set = true; });
  sub->add_option("--grid", ov.grid, "q grid step for optimize")
      ->each([&ov](const std::string&) { ov.grid_set = true; });
  sub->add_option("--jobs", ov.jobs,
                  "worker threads (0 = all cores; env ALOHA_DEADLINE_JOBS)")
      ->each([&ov](const std::string&) { ov.jobs_set = true; });
}

int run(aloha::RunMode mode, const Overrides& ov) {
  std::ifstream in(ov.config_path);
  if (!in) {
    std::cerr << "error: cannot open config file " << ov.config_path << "\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  aloha::RunSpec spec = aloha::parse_config(buffer.str());
  spec.mode = mode;
  if (ov.seed_set) spec.seed = ov.seed;
  if (ov.slots_set) spec.slots = ov.slots;
  if (ov.reps_set) spec.reps = ov.reps;
  if (ov.grid_set) spec.grid = ov.grid;
  if (ov.out_set) spec.out_path = ov.out_path;
  if (ov.jobs_set) {
    spec.jobs = ov.jobs;
  } else if (const char* env = std::getenv("ALOHA_DEADLINE_JOBS")) {
    spec.jobs = std::atoi(env);
  }
  if (spec.reps < 1) throw aloha::ConfigError(0, "reps must be at least 1");
  if (spec.jobs < 0) throw aloha::ConfigError(0, "jobs must be nonnegative");
  if (spec.slots <= spec.warmup)
    throw aloha::ConfigError(0, "slots must exceed the warmup window");
  if (!(spec.grid > 0.0 && spec.grid <= 0.5))
    throw aloha::ConfigError(0, "grid must lie in (0, 0.5]");

  const aloha::RunOutcome outcome = aloha::run_spec(spec);
  const std::string csv = aloha::render_csv(spec, outcome);

  if (spec.out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(spec.out_path);
    if (!out) {
      std::cerr << "error: cannot open output file " << spec.out_path << "\n";
      return 1;
    }
    out << csv;
  }

  if (!spec.export_chain_path.empty()) {
    std::ofstream out(spec.export_chain_path);
    if (!out) {
      std::cerr << "error: cannot open chain export file "
                << spec.export_chain_path << "\n";
      return 1;
    }
    out << aloha::render_chain_csv(spec);
  }

  for (const std::string& note : outcome.notes) std::cerr << note << "\n";

  std::size_t written = 0;
  for (const auto& row : outcome.rows) written += row.ok ? 1 : 0;
  std::cerr << written << " row(s)";
  if (!spec.out_path.empty()) std::cerr << " -> " << spec.out_path;
  std::cerr << "\n";

  if (mode == aloha::RunMode::validate) {
    if (outcome.z_exceeded) {
      std::cerr << "validation FAILED: |z| > 4 on at least one row\n";
      return 2;
    }
    std::cerr << "validation passed: all |z| <= 4\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-constrained traffic on slotted ALOHA: analytic chains and simulation"};
  app.require_subcommand(1);

  Overrides ov;
  struct ModeEntry {
    const char* name;
    const char* help;
    aloha::RunMode mode;
  };
  const ModeEntry entries[] = {
      {"analyze", "solve the head-of-line chain and report mu, T, DR", aloha::RunMode::analyze},
      {"simulate", "run the slot-level simulator", aloha::RunMode::simulate},
      {"validate", "compare analytic and simulated rates (exit 2 when |z| > 4)", aloha::RunMode::validate},
      {"sweep", "analytic plus simulated metrics over the sweep axes", aloha::RunMode::sweep},
      {"sdp-table", "delivery probability over the (n, D) grid", aloha::RunMode::sdp_table},
      {"optimize", "best q for the chosen objective", aloha::RunMode::optimize},
  };
  for (const ModeEntry& e : entries)
    add_common_options(app.add_subcommand(e.name, e.help), ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp"
               ? code
               : 1;
  }

  try {
    for (const ModeEntry& e : entries)
      if (app.get_subcommand(e.name)->parsed()) return run(e.mode, ov);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const aloha::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
