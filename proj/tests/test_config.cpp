#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "aloha/config.hpp"

using namespace aloha;

TEST_CASE("minimal document parses with defaults") {
  RunSpec spec = parse_config("N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\n");
  CHECK(spec.mode == RunMode::analyze);
  CHECK(spec.scenario.n_nodes == 2);
  CHECK(spec.scenario.q == 0.5);
  CHECK(spec.scenario.lambda == 0.5);
  CHECK(spec.scenario.deadline == 3);
  CHECK(spec.scenario.retx == 2);
  CHECK(spec.scenario.mpr_cap == 1);
  CHECK(spec.scenario.buffer == 3);
  CHECK(spec.scenario.backlogged == 2);
  CHECK_FALSE(spec.l_explicit);
  CHECK_FALSE(spec.b_explicit);
  CHECK(spec.slots == 100000);
  CHECK(spec.warmup == 1000);
  CHECK(spec.seed == 1);
  CHECK(spec.reps == 1);
  CHECK(spec.grid == 0.1);
  CHECK_FALSE(spec.channel.explicit_table);
}

TEST_CASE("comments, sections and spacing are tolerated") {
  RunSpec spec = parse_config(
      "# base point\n"
      "N=2\n q = 0.5  # tuned\n lambda =0.5\nD= 3\nn = 2\nc = 1\n"
      "\n[run]\n  mode = sweep\n slots = 2000\n"
      "[sweep]\nq = 0.1, 0.2, 0.3\n");
  CHECK(spec.mode == RunMode::sweep);
  CHECK(spec.slots == 2000);
  REQUIRE(spec.axes.size() == 1);
  CHECK(spec.axes[0].name == "q");
  CHECK(spec.axes[0].values == std::vector<double>{0.1, 0.2, 0.3});
}

TEST_CASE("empty document lists the required keys") {
  try {
    parse_config("");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "missing required keys: N, q, lambda, D, n, c");
  }
}

TEST_CASE("budget exceeding the deadline names the offending line") {
  try {
    parse_config("N = 2\nq = 0.5\nlambda = 0.5\nc = 1\nn = 5\nD = 3\n");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("n must not exceed D - 1") != std::string::npos);
  }
}

TEST_CASE("unknown keys and sections are rejected") {
  CHECK_THROWS_AS(parse_config("N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\nfoo = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[bogus]\nN = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\n"
                               "[run]\nmode = frobnicate\n"),
                  ConfigError);
  try {
    parse_config("N = 2\nfoo = 1\n");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("duplicate keys are rejected with the repeat line") {
  try {
    parse_config("N = 2\nq = 0.5\nq = 0.6\n");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }
}

TEST_CASE("domain violations carry their line") {
  try {
    parse_config("N = 2\nq = 1.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\n");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_config("N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 3\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\nL = 2\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\n"
                               "[run]\nreps = 0\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\n"
                               "[run]\nslots = 100\nwarmup = 100\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\n"
                               "[sweep]\nD = 2.5\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\n"
                               "[channel]\ntable = explicit\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\n"
                               "[channel]\ntable = explicit\np = 0.3, 0.7\n"),
                  ConfigError);
}

TEST_CASE("explicit table and channel overrides parse") {
  RunSpec spec = parse_config(
      "N = 2\nq = 0.5\nlambda = 0.5\nD = 3\nn = 2\nc = 1\n"
      "[channel]\ngamma_db = 3\nr_m = 50\ntable = explicit\n"
      "p = 0.75, 0.375, 0.1875\n");
  CHECK(spec.channel.gamma_db == 3.0);
  CHECK(spec.channel.r_m == 50.0);
  CHECK(spec.channel.explicit_table);
  CHECK(spec.channel.table_values == std::vector<double>{0.75, 0.375, 0.1875});
  SuccessTable t = spec.channel.table_for(2);
  CHECK(t.p[0] == 0.75);
  CHECK_THROWS_AS(spec.channel.table_for(5), std::invalid_argument);
}

TEST_CASE("render and parse round trip") {
  std::mt19937_64 eng(616);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto pick_int = [&](int lo, int hi) {
    return lo + static_cast<int>(u(eng) * (hi - lo + 1)) % (hi - lo + 1);
  };
  for (int trial = 0; trial < 200; ++trial) {
    RunSpec spec;
    spec.mode = static_cast<RunMode>(pick_int(0, 5));
    spec.scenario.n_nodes = pick_int(1, 6);
    spec.scenario.q = u(eng);
    spec.scenario.lambda = u(eng);
    spec.scenario.deadline = pick_int(1, 8);
    spec.scenario.retx = pick_int(0, spec.scenario.deadline - 1);
    spec.scenario.mpr_cap = pick_int(1, spec.scenario.n_nodes);
    spec.l_explicit = u(eng) < 0.5;
    spec.scenario.buffer =
        spec.l_explicit ? spec.scenario.deadline + pick_int(0, 3) : spec.scenario.deadline;
    spec.b_explicit = u(eng) < 0.5;
    spec.scenario.backlogged =
        spec.b_explicit ? pick_int(1, spec.scenario.n_nodes) : spec.scenario.n_nodes;
    spec.channel.gamma_db = -3.0 + 6.0 * u(eng);
    spec.channel.eta_dbm = -120.0 + 10.0 * u(eng);
    spec.channel.ptx_mw = 0.001 + u(eng);
    spec.channel.v = 0.5 + u(eng);
    spec.channel.r_m = 10.0 + 100.0 * u(eng);
    spec.channel.alpha = 2.0 + 3.0 * u(eng);
    if (u(eng) < 0.4) {
      spec.channel.explicit_table = true;
      spec.channel.table_values = {0.8, 0.8 * u(eng)};
    }
    spec.slots = 1000 + static_cast<std::uint64_t>(u(eng) * 100000);
    spec.warmup = spec.slots / 10;
    spec.seed = static_cast<std::uint64_t>(u(eng) * 1e12);
    spec.reps = pick_int(1, 5);
    spec.jobs = pick_int(0, 8);
    spec.grid = 0.05 + 0.45 * u(eng);
    spec.objective = u(eng) < 0.5 ? Objective::max_throughput : Objective::min_drop_rate;
    if (u(eng) < 0.5) spec.axes.push_back({"q", {0.25, 0.5, u(eng)}});
    if (u(eng) < 0.3) spec.axes.push_back({"D", {1, 3, 5}});
    if (u(eng) < 0.3) spec.out_path = "/tmp/out.csv";

    RunSpec back = parse_config(render_config(spec));
    CHECK(back == spec);
  }
}
