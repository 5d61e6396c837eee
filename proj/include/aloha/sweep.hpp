#ifndef ALOHA_SWEEP_HPP
#define ALOHA_SWEEP_HPP

#include <string>
#include <vector>

#include "aloha/run_spec.hpp"
#include "aloha/sim.hpp"

namespace aloha {

// One output row: a fully resolved scenario plus the metrics the mode asks
// for.  Rows that fail validation carry the reason and are skipped when the
// CSV is written.
struct RowResult {
  std::size_t index = 0;
  Scenario scenario;
  bool ok = true;
  std::string error;

  bool has_analytic = false;
  AnalyticResult analytic;

  bool has_sim = false;
  ReplicationResult sim;
  std::uint64_t seed = 0;

  bool has_z = false;
  double z_throughput = 0.0;
  double z_drop_rate = 0.0;

  // sdp-table rows
  bool has_sdp = false;
  double nu = 0.0;
  double ps = 0.0;

  // optimize rows
  bool has_opt = false;
  OptimizeResult opt;
};

struct RunOutcome {
  std::vector<RowResult> rows;
  std::vector<std::string> notes;  // skipped rows, reducible chains
  bool z_exceeded = false;         // any |z| > 4 in validate mode
};

// Cartesian product of the sweep axes in the order they were given; no axes
// means the single base scenario.  Row i simulates with seed spec.seed + i.
std::vector<Scenario> expand_axes(const RunSpec& spec);

// Executes spec with the worker count it carries (0 = all hardware threads).
// Serial and parallel paths produce identical rows; jobs = 1 forces the
// serial reference path.
RunOutcome run_spec(const RunSpec& spec);
RunOutcome run_spec_serial(const RunSpec& spec);

// CSV with a header row, scenario columns first, then the mode's metrics,
// rows in expansion order.
std::string render_csv(const RunSpec& spec, const RunOutcome& outcome);

// Transition matrix and stationary distribution of the base scenario's
// chain, one row per target state: state label, pi, then one column per
// source state.
std::string render_chain_csv(const RunSpec& spec);

}  // namespace aloha

#endif
