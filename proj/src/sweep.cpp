#include "aloha/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aloha/csv.hpp"
#include "aloha/sdp.hpp"

namespace aloha {

namespace {

constexpr double kZ99 = 2.5758293035489004;

void apply_axis(Scenario& sc, const std::string& name, double value) {
  if (name == "q") sc.q = value;
  else if (name == "lambda") sc.lambda = value;
  else if (name == "D") sc.deadline = static_cast<int>(std::llround(value));
  else if (name == "n") sc.retx = static_cast<int>(std::llround(value));
  else if (name == "N") sc.n_nodes = static_cast<int>(std::llround(value));
  else if (name == "c") sc.mpr_cap = static_cast<int>(std::llround(value));
  else throw std::invalid_argument("unknown sweep axis '" + name + "'");
}

double z_score(double observed, double expected, double se) {
  const double diff = observed - expected;
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

bool wants_analytic(RunMode mode) {
  return mode == RunMode::analyze || mode == RunMode::validate ||
         mode == RunMode::sweep;
}

bool wants_sim(RunMode mode) {
  return mode == RunMode::simulate || mode == RunMode::validate ||
         mode == RunMode::sweep;
}

std::vector<RowResult> make_rows(const RunSpec& spec) {
  const std::vector<Scenario> scenarios = expand_axes(spec);
  std::vector<RowResult> rows;
  if (spec.mode == RunMode::sdp_table) {
    for (const Scenario& sc : scenarios) {
      try {
        sc.validate();
      } catch (const std::exception& e) {
        RowResult row;
        row.scenario = sc;
        row.ok = false;
        row.error = e.what();
        row.index = rows.size();
        rows.push_back(std::move(row));
        continue;
      }
      for (int d = 1; d <= sc.deadline; ++d)
        for (int nn = 0; nn <= std::min(sc.retx, d - 1); ++nn) {
          RowResult row;
          row.scenario = sc;
          row.scenario.deadline = d;
          row.scenario.retx = nn;
          row.index = rows.size();
          rows.push_back(std::move(row));
        }
    }
  } else {
    rows.reserve(scenarios.size());
    for (const Scenario& sc : scenarios) {
      RowResult row;
      row.scenario = sc;
      row.index = rows.size();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void compute_row(const RunSpec& spec, RowResult& row, std::ostream* trace) {
  try {
    row.scenario.validate();
    const SuccessTable table = spec.channel.table_for(row.scenario.n_nodes);

    if (spec.mode == RunMode::sdp_table) {
      const ServiceModel svc = service_prob(row.scenario, table);
      if (!svc.nu_defined)
        throw std::invalid_argument("nu is undefined for q = 0");
      row.has_analytic = false;
      row.has_sdp = true;
      row.analytic.mu = svc.mu;
      row.nu = svc.nu;
      row.ps = sdp(SdpQuery{row.scenario.q, svc.nu, row.scenario.retx,
                            row.scenario.deadline});
      return;
    }

    if (spec.mode == RunMode::optimize) {
      row.has_opt = true;
      row.opt = optimize_q(row.scenario, table, spec.objective, spec.grid);
      return;
    }

    if (wants_analytic(spec.mode)) {
      row.has_analytic = true;
      row.analytic = analyze(row.scenario, table);
    }
    if (wants_sim(spec.mode)) {
      SimConfig cfg;
      cfg.scenario = row.scenario;
      cfg.table = table;
      cfg.slots = spec.slots;
      cfg.warmup = spec.warmup;
      cfg.seed = spec.seed + row.index;
      row.seed = cfg.seed;
      row.has_sim = true;
      if (trace) {
        const SimResult r = run_simulation(cfg, trace);
        row.sim.reps = 1;
        row.sim.mean_throughput = r.throughput;
        row.sim.mean_drop_rate = r.drop_rate;
        row.sim.se_throughput = r.se_throughput;
        row.sim.se_drop_rate = r.se_drop_rate;
        row.sim.arrivals = r.arrivals;
        row.sim.successes = r.successes;
        row.sim.drops_deadline = r.drops_deadline;
        row.sim.drops_retx = r.drops_retx;
        row.sim.drops_overflow = r.drops_overflow;
        row.sim.measured_slots = r.measured_slots;
      } else {
        row.sim = run_replications(cfg, spec.reps);
      }
    }
    if (spec.mode == RunMode::validate) {
      row.has_z = true;
      row.z_throughput = z_score(row.sim.mean_throughput,
                                 row.analytic.throughput, row.sim.se_throughput);
      row.z_drop_rate = z_score(row.sim.mean_drop_rate, row.analytic.drop_rate,
                                row.sim.se_drop_rate);
    }
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
}

void check_spec(const RunSpec& spec, std::size_t n_rows) {
  if (spec.mode == RunMode::optimize)
    for (const SweepAxis& axis : spec.axes)
      if (axis.name == "q")
        throw std::invalid_argument("optimize mode cannot sweep q");
  if (!spec.trace_path.empty()) {
    if (spec.mode != RunMode::simulate)
      throw std::invalid_argument("trace output requires simulate mode");
    if (n_rows != 1 || spec.reps != 1)
      throw std::invalid_argument("trace output requires a single run (no axes, reps = 1)");
  }
  if (!spec.export_chain_path.empty()) {
    if (spec.mode != RunMode::analyze)
      throw std::invalid_argument("chain export requires analyze mode");
    if (n_rows != 1)
      throw std::invalid_argument("chain export requires a single row (no axes)");
  }
}

RunOutcome finish(std::vector<RowResult> rows) {
  RunOutcome outcome;
  for (const RowResult& row : rows) {
    if (!row.ok)
      outcome.notes.push_back("row " + std::to_string(row.index) +
                              " skipped: " + row.error);
    else if (row.has_analytic && row.analytic.reducible)
      outcome.notes.push_back("row " + std::to_string(row.index) +
                              ": chain is reducible; unreachable states carry pi = 0");
    if (row.has_z &&
        (std::fabs(row.z_throughput) > 4.0 || std::fabs(row.z_drop_rate) > 4.0))
      outcome.z_exceeded = true;
  }
  outcome.rows = std::move(rows);
  return outcome;
}

}  // namespace

std::vector<Scenario> expand_axes(const RunSpec& spec) {
  for (const SweepAxis& axis : spec.axes)
    if (axis.values.empty())
      throw std::invalid_argument("sweep axis '" + axis.name + "' has no values");

  std::size_t total = 1;
  for (const SweepAxis& axis : spec.axes) total *= axis.values.size();

  std::vector<Scenario> out;
  out.reserve(total);
  std::vector<std::size_t> pos(spec.axes.size(), 0);
  for (std::size_t row = 0; row < total; ++row) {
    Scenario sc = spec.scenario;
    for (std::size_t a = 0; a < spec.axes.size(); ++a)
      apply_axis(sc, spec.axes[a].name, spec.axes[a].values[pos[a]]);
    if (!spec.l_explicit) sc.buffer = sc.deadline;
    if (!spec.b_explicit) sc.backlogged = sc.n_nodes;
    out.push_back(sc);
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      if (++pos[a] < spec.axes[a].values.size()) break;
      pos[a] = 0;
    }
  }
  return out;
}

RunOutcome run_spec_serial(const RunSpec& spec) {
  std::vector<RowResult> rows = make_rows(spec);
  check_spec(spec, rows.size());

  std::ofstream trace_file;
  std::ostream* trace = nullptr;
  if (!spec.trace_path.empty()) {
    trace_file.open(spec.trace_path);
    if (!trace_file) throw std::runtime_error("cannot open trace file " + spec.trace_path);
    trace_file << "slot,queue,head_age,head_fails,event,arrival\n";
    trace = &trace_file;
  }

  for (RowResult& row : rows) compute_row(spec, row, trace);
  return finish(std::move(rows));
}

RunOutcome run_spec(const RunSpec& spec) {
  int jobs = spec.jobs;
#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#else
  jobs = 1;
#endif
  if (jobs == 1 || !spec.trace_path.empty()) return run_spec_serial(spec);

  std::vector<RowResult> rows = make_rows(spec);
  check_spec(spec, rows.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (std::size_t i = 0; i < rows.size(); ++i)
    compute_row(spec, rows[i], nullptr);
#else
  for (RowResult& row : rows) compute_row(spec, row, nullptr);
#endif
  return finish(std::move(rows));
}

namespace {

void scenario_header(std::ostringstream& out) {
  out << "N,q,lambda,D,n,c,L,b";
}

void scenario_fields(std::ostringstream& out, const Scenario& sc) {
  out << csv_number(sc.n_nodes) << ',' << csv_number(sc.q) << ','
      << csv_number(sc.lambda) << ',' << csv_number(sc.deadline) << ','
      << csv_number(sc.retx) << ',' << csv_number(sc.mpr_cap) << ','
      << csv_number(sc.buffer) << ',' << csv_number(sc.backlogged);
}

void sim_header(std::ostringstream& out) {
  out << "slots,warmup,reps,seed,arrivals,successes,drops_deadline,drops_retx,"
         "drops_overflow,throughput,drop_rate,se_throughput,se_drop_rate,"
         "ci99_throughput,ci99_drop_rate";
}

void sim_fields(std::ostringstream& out, const RunSpec& spec, const RowResult& row) {
  out << csv_number(spec.slots) << ',' << csv_number(spec.warmup) << ','
      << csv_number(row.sim.reps) << ',' << csv_number(row.seed) << ','
      << csv_number(row.sim.arrivals) << ',' << csv_number(row.sim.successes) << ','
      << csv_number(row.sim.drops_deadline) << ',' << csv_number(row.sim.drops_retx)
      << ',' << csv_number(row.sim.drops_overflow) << ','
      << csv_number(row.sim.mean_throughput) << ','
      << csv_number(row.sim.mean_drop_rate) << ','
      << csv_number(row.sim.se_throughput) << ','
      << csv_number(row.sim.se_drop_rate) << ','
      << csv_number(kZ99 * row.sim.se_throughput) << ','
      << csv_number(kZ99 * row.sim.se_drop_rate);
}

}  // namespace

std::string render_csv(const RunSpec& spec, const RunOutcome& outcome) {
  std::ostringstream out;
  scenario_header(out);
  switch (spec.mode) {
    case RunMode::analyze:
      out << ",mu,T,DR";
      break;
    case RunMode::simulate:
      out << ',';
      sim_header(out);
      break;
    case RunMode::validate:
      out << ",mu,T,DR,";
      sim_header(out);
      out << ",z_throughput,z_drop_rate";
      break;
    case RunMode::sweep:
      out << ",mu,T,DR,";
      sim_header(out);
      break;
    case RunMode::sdp_table:
      out << ",mu,nu,ps";
      break;
    case RunMode::optimize:
      out << ",objective,grid,q_star,value";
      break;
  }
  out << '\n';

  for (const RowResult& row : outcome.rows) {
    if (!row.ok) continue;
    scenario_fields(out, row.scenario);
    switch (spec.mode) {
      case RunMode::analyze:
        out << ',' << csv_number(row.analytic.mu) << ','
            << csv_number(row.analytic.throughput) << ','
            << csv_number(row.analytic.drop_rate);
        break;
      case RunMode::simulate:
        out << ',';
        sim_fields(out, spec, row);
        break;
      case RunMode::validate:
        out << ',' << csv_number(row.analytic.mu) << ','
            << csv_number(row.analytic.throughput) << ','
            << csv_number(row.analytic.drop_rate) << ',';
        sim_fields(out, spec, row);
        out << ',' << csv_number(row.z_throughput) << ','
            << csv_number(row.z_drop_rate);
        break;
      case RunMode::sweep:
        out << ',' << csv_number(row.analytic.mu) << ','
            << csv_number(row.analytic.throughput) << ','
            << csv_number(row.analytic.drop_rate) << ',';
        sim_fields(out, spec, row);
        break;
      case RunMode::sdp_table:
        out << ',' << csv_number(row.analytic.mu) << ',' << csv_number(row.nu)
            << ',' << csv_number(row.ps);
        break;
      case RunMode::optimize:
        out << ','
            << (spec.objective == Objective::max_throughput ? "max-throughput"
                                                            : "min-drop-rate")
            << ',' << csv_number(spec.grid) << ',' << csv_number(row.opt.q_star)
            << ',' << csv_number(row.opt.value);
        break;
    }
    out << '\n';
  }
  return out.str();
}

std::string render_chain_csv(const RunSpec& spec) {
  Scenario sc = spec.scenario;
  sc.validate();
  const SuccessTable table = spec.channel.table_for(sc.n_nodes);
  MarkovModel model;
  SteadyState ss;
  analyze(sc, table, &model, &ss);

  std::ostringstream out;
  out << "state,pi";
  for (const ChainState& s : model.states) out << ',' << csv_quote(s.label());
  out << '\n';
  for (int to = 0; to < model.size(); ++to) {
    out << csv_quote(model.states[to].label()) << ',' << csv_number(ss.pi[to]);
    for (int from = 0; from < model.size(); ++from)
      out << ',' << csv_number(model.m.at(to, from));
    out << '\n';
  }
  return out.str();
}

}  // namespace aloha
