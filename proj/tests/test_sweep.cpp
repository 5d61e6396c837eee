#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "aloha/config.hpp"
#include "aloha/sweep.hpp"

using namespace aloha;

namespace {

RunSpec base_spec() {
  RunSpec spec = parse_config(
      "N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\n"
      "[channel]\ntable = explicit\np = 0.75, 0.375, 0.1875, 0.09375, 0.046875\n");
  return spec;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char ch : s)
    if (ch == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("no axes expands to the base scenario") {
  RunSpec spec = base_spec();
  std::vector<Scenario> rows = expand_axes(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == spec.scenario);
}

TEST_CASE("axes expand lexicographically in the order given") {
  RunSpec spec = base_spec();
  spec.scenario.retx = 1;
  spec.axes.push_back({"q", {0.2, 0.5}});
  spec.axes.push_back({"D", {2, 4}});
  std::vector<Scenario> rows = expand_axes(spec);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].q == 0.2);
  CHECK(rows[0].deadline == 2);
  CHECK(rows[1].q == 0.2);
  CHECK(rows[1].deadline == 4);
  CHECK(rows[2].q == 0.5);
  CHECK(rows[2].deadline == 2);
  CHECK(rows[3].q == 0.5);
  CHECK(rows[3].deadline == 4);
  for (const Scenario& sc : rows) CHECK(sc.buffer == sc.deadline);
}

TEST_CASE("swept node count drags the default contention size along") {
  RunSpec spec = base_spec();
  spec.axes.push_back({"N", {2, 3, 5}});
  std::vector<Scenario> rows = expand_axes(spec);
  REQUIRE(rows.size() == 3);
  for (const Scenario& sc : rows) CHECK(sc.backlogged == sc.n_nodes);

  spec.b_explicit = true;
  spec.scenario.backlogged = 2;
  rows = expand_axes(spec);
  for (const Scenario& sc : rows) CHECK(sc.backlogged == 2);
}

TEST_CASE("parallel and serial paths render identical csv") {
  RunSpec spec = base_spec();
  spec.mode = RunMode::sweep;
  spec.slots = 5000;
  spec.warmup = 500;
  spec.axes.push_back({"q", {0.2, 0.4, 0.6, 0.8}});
  spec.axes.push_back({"lambda", {0.25, 0.5, 0.75}});

  spec.jobs = 0;
  std::string parallel = render_csv(spec, run_spec(spec));
  std::string serial = render_csv(spec, run_spec_serial(spec));
  CHECK(parallel == serial);

  spec.jobs = 3;
  std::string three = render_csv(spec, run_spec(spec));
  CHECK(three == serial);

  std::string again = render_csv(spec, run_spec(spec));
  CHECK(again == three);
  CHECK(count_lines(serial) == 13);
}

TEST_CASE("rows that fail validation are noted and skipped") {
  RunSpec spec = base_spec();
  spec.mode = RunMode::analyze;
  spec.axes.push_back({"N", {1, 2}});
  spec.axes.push_back({"c", {1, 2}});
  RunOutcome outcome = run_spec_serial(spec);
  REQUIRE(outcome.rows.size() == 4);
  CHECK(outcome.rows[0].ok);
  CHECK_FALSE(outcome.rows[1].ok);  // N = 1, c = 2
  CHECK(outcome.rows[2].ok);
  CHECK(outcome.rows[3].ok);
  REQUIRE(outcome.notes.size() == 1);
  CHECK(outcome.notes[0].find("row 1 skipped") != std::string::npos);
  CHECK(count_lines(render_csv(spec, outcome)) == 4);
}

TEST_CASE("reducible scenarios are reported but still solved") {
  RunSpec spec = base_spec();
  spec.scenario.lambda = 0.0;
  RunOutcome outcome = run_spec_serial(spec);
  REQUIRE(outcome.rows.size() == 1);
  CHECK(outcome.rows[0].ok);
  CHECK(outcome.rows[0].analytic.throughput == 0.0);
  REQUIRE(outcome.notes.size() == 1);
  CHECK(outcome.notes[0].find("reducible") != std::string::npos);
}

TEST_CASE("delivery table mode emits one row per deadline and budget") {
  RunSpec spec = base_spec();
  spec.mode = RunMode::sdp_table;
  spec.scenario.retx = 1;
  RunOutcome outcome = run_spec_serial(spec);
  REQUIRE(outcome.rows.size() == 5);
  CHECK(outcome.rows[0].scenario.deadline == 1);
  CHECK(outcome.rows[0].scenario.retx == 0);
  CHECK(outcome.rows[4].scenario.deadline == 3);
  CHECK(outcome.rows[4].scenario.retx == 1);
  for (const RowResult& row : outcome.rows) {
    CHECK(row.has_sdp);
    CHECK(row.ps >= 0.0);
    CHECK(row.ps <= 1.0);
  }
  CHECK(outcome.rows[2].scenario.deadline == 2);
  CHECK(outcome.rows[2].scenario.retx == 1);
  CHECK(outcome.rows[2].ps == doctest::Approx(0.33984375).epsilon(1e-15));
  CHECK(outcome.rows[4].ps == doctest::Approx(0.4453125).epsilon(1e-15));
}

TEST_CASE("delivery table rejects a silent transmitter") {
  RunSpec spec = base_spec();
  spec.mode = RunMode::sdp_table;
  spec.scenario.q = 0.0;
  RunOutcome outcome = run_spec_serial(spec);
  for (const RowResult& row : outcome.rows) CHECK_FALSE(row.ok);
  CHECK(!outcome.notes.empty());
}

TEST_CASE("validate mode wires the z scores to its own fields") {
  RunSpec spec = base_spec();
  spec.mode = RunMode::validate;
  spec.slots = 20000;
  RunOutcome outcome = run_spec_serial(spec);
  REQUIRE(outcome.rows.size() == 1);
  const RowResult& row = outcome.rows[0];
  REQUIRE(row.has_z);
  CHECK(row.z_throughput ==
        doctest::Approx((row.sim.mean_throughput - row.analytic.throughput) /
                        row.sim.se_throughput)
            .epsilon(1e-12));
  CHECK(std::abs(row.z_throughput) < 4.0);
  CHECK(std::abs(row.z_drop_rate) < 4.0);
  CHECK_FALSE(outcome.z_exceeded);
}

TEST_CASE("a measurement window too short to see drops trips the verdict") {
  // five measured slots with lambda = 0.01 see no drops, so the sample
  // standard error collapses to zero while the chain predicts a positive
  // drop rate; the z score is infinite and the run must flag it
  RunSpec spec = base_spec();
  spec.mode = RunMode::validate;
  spec.scenario.lambda = 0.01;
  spec.slots = 1005;
  spec.warmup = 1000;
  spec.seed = 1;
  RunOutcome outcome = run_spec_serial(spec);
  REQUIRE(outcome.rows.size() == 1);
  CHECK(outcome.z_exceeded);
}

TEST_CASE("csv headers follow the mode") {
  RunSpec spec = base_spec();
  spec.slots = 2000;
  spec.warmup = 200;

  spec.mode = RunMode::analyze;
  std::string csv = render_csv(spec, run_spec_serial(spec));
  CHECK(csv.rfind("N,q,lambda,D,n,c,L,b,mu,T,DR\n", 0) == 0);

  spec.mode = RunMode::simulate;
  csv = render_csv(spec, run_spec_serial(spec));
  CHECK(csv.rfind("N,q,lambda,D,n,c,L,b,slots,warmup,reps,seed,arrivals,"
                  "successes,drops_deadline,drops_retx,drops_overflow,"
                  "throughput,drop_rate,se_throughput,se_drop_rate,"
                  "ci99_throughput,ci99_drop_rate\n",
                  0) == 0);

  spec.mode = RunMode::sdp_table;
  csv = render_csv(spec, run_spec_serial(spec));
  CHECK(csv.rfind("N,q,lambda,D,n,c,L,b,mu,nu,ps\n", 0) == 0);

  spec.mode = RunMode::optimize;
  csv = render_csv(spec, run_spec_serial(spec));
  CHECK(csv.rfind("N,q,lambda,D,n,c,L,b,objective,grid,q_star,value\n", 0) == 0);
}

TEST_CASE("simulation rows carry deterministic per row seeds") {
  RunSpec spec = base_spec();
  spec.mode = RunMode::simulate;
  spec.slots = 2000;
  spec.warmup = 200;
  spec.seed = 42;
  spec.axes.push_back({"q", {0.3, 0.5, 0.7}});
  RunOutcome outcome = run_spec_serial(spec);
  REQUIRE(outcome.rows.size() == 3);
  CHECK(outcome.rows[0].seed == 42);
  CHECK(outcome.rows[1].seed == 43);
  CHECK(outcome.rows[2].seed == 44);
}

TEST_CASE("guardrails on trace, chain export and optimize sweeps") {
  RunSpec spec = base_spec();
  spec.mode = RunMode::optimize;
  spec.axes.push_back({"q", {0.3, 0.5}});
  CHECK_THROWS_AS(run_spec_serial(spec), std::invalid_argument);

  spec = base_spec();
  spec.mode = RunMode::analyze;
  spec.trace_path = "/tmp/aloha_trace_guard.csv";
  CHECK_THROWS_AS(run_spec_serial(spec), std::invalid_argument);

  spec = base_spec();
  spec.mode = RunMode::simulate;
  spec.trace_path = "/tmp/aloha_trace_guard.csv";
  spec.reps = 3;
  CHECK_THROWS_AS(run_spec_serial(spec), std::invalid_argument);

  spec = base_spec();
  spec.mode = RunMode::simulate;
  spec.export_chain_path = "/tmp/aloha_chain_guard.csv";
  CHECK_THROWS_AS(run_spec_serial(spec), std::invalid_argument);
}

TEST_CASE("chain export quotes composite state labels") {
  RunSpec spec = base_spec();
  spec.scenario.retx = 1;
  std::string csv = render_chain_csv(spec);
  CHECK(csv.find("\"2,1\"") != std::string::npos);
  CHECK(csv.rfind("state,pi,", 0) == 0);
  CHECK(count_lines(csv) == 7);
}

TEST_CASE("optimize rows report the refined optimum") {
  RunSpec spec = base_spec();
  spec.mode = RunMode::optimize;
  RunOutcome outcome = run_spec_serial(spec);
  REQUIRE(outcome.rows.size() == 1);
  REQUIRE(outcome.rows[0].has_opt);
  CHECK(outcome.rows[0].opt.q_star == doctest::Approx(0.5).epsilon(2e-4));
}
