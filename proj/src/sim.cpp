#include "aloha/sim.hpp"

#include <cmath>
#include <deque>
#include <ostream>
#include <random>
#include <stdexcept>

namespace aloha {

namespace {

constexpr double kZ99 = 2.5758293035489004;

// Uniform in [0, 1) from the top 53 bits, independent of the library's
// distribution implementation so runs reproduce across toolchains.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

struct Packet {
  int age = 1;  // slots in the system as of the next slot start
  int fails = 0;
};

}  // namespace

void SimConfig::validate() const {
  scenario.validate();
  if (table.size() < scenario.backlogged)
    throw std::invalid_argument("success table needs an entry per possible contender count");
  if (slots <= warmup)
    throw std::invalid_argument("slots must exceed the warmup window");
}

SimResult run_simulation(const SimConfig& config, std::ostream* trace) {
  config.validate();
  const Scenario& sc = config.scenario;
  std::mt19937_64 eng(config.seed);
  std::deque<Packet> queue;

  SimResult res;
  res.seed = config.seed;

  for (std::uint64_t slot = 0; slot < config.slots; ++slot) {
    const bool measured = slot >= config.warmup;
    const int trace_age = queue.empty() ? 0 : queue.front().age;
    const int trace_fails = queue.empty() ? 0 : queue.front().fails;
    const std::size_t trace_queue = queue.size();

    int k = 0;  // transmitters this slot
    for (int i = 0; i < sc.backlogged - 1; ++i)
      if (uniform01(eng) < sc.q) ++k;

    bool transmitted = false;
    bool success = false;
    if (!queue.empty() && uniform01(eng) < sc.q) {
      transmitted = true;
      ++k;
      if (k <= sc.mpr_cap && uniform01(eng) < config.table.p[k - 1]) success = true;
    }

    const char* event = queue.empty() ? "empty" : "idle";
    if (success) {
      queue.pop_front();
      ++res.successes;
      if (measured) ++res.measured_successes;
      event = "success";
    } else if (transmitted) {
      event = "fail";
      if (++queue.front().fails > sc.retx) {
        queue.pop_front();
        ++res.drops_retx;
        if (measured) ++res.measured_drops;
        event = "drop_retx";
      }
    }

    for (auto it = queue.begin(); it != queue.end();) {
      if (++it->age > sc.deadline) {
        it = queue.erase(it);
        ++res.drops_deadline;
        if (measured) ++res.measured_drops;
        event = "drop_deadline";
      } else {
        ++it;
      }
    }

    bool arrived = false;
    if (uniform01(eng) < sc.lambda) {
      arrived = true;
      ++res.arrivals;
      if (queue.size() >= static_cast<std::size_t>(sc.buffer)) {
        ++res.drops_overflow;
        if (measured) ++res.measured_drops;
      } else {
        queue.push_back(Packet{});
      }
    }

    if (trace)
      *trace << slot << ',' << trace_queue << ',' << trace_age << ','
             << trace_fails << ',' << event << ',' << (arrived ? 1 : 0) << '\n';
  }

  res.final_queue = queue.size();
  res.measured_slots = config.slots - config.warmup;
  const double m = static_cast<double>(res.measured_slots);
  res.throughput = res.measured_successes / m;
  res.drop_rate = res.measured_drops / m;
  res.se_throughput = std::sqrt(res.throughput * (1.0 - res.throughput) / m);
  res.se_drop_rate = std::sqrt(res.drop_rate * (1.0 - res.drop_rate) / m);
  res.ci99_throughput = kZ99 * res.se_throughput;
  res.ci99_drop_rate = kZ99 * res.se_drop_rate;
  return res;
}

ReplicationResult run_replications(const SimConfig& config, int reps) {
  if (reps < 1) throw std::invalid_argument("reps must be at least 1");

  ReplicationResult agg;
  agg.reps = reps;
  double sum_t = 0.0, sum_t2 = 0.0, sum_d = 0.0, sum_d2 = 0.0;
  double se_single_t = 0.0, se_single_d = 0.0;
  for (int i = 0; i < reps; ++i) {
    SimConfig run = config;
    run.seed = config.seed ^ (static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL);
    const SimResult r = run_simulation(run);
    sum_t += r.throughput;
    sum_t2 += r.throughput * r.throughput;
    sum_d += r.drop_rate;
    sum_d2 += r.drop_rate * r.drop_rate;
    if (i == 0) {
      se_single_t = r.se_throughput;
      se_single_d = r.se_drop_rate;
    }
    agg.arrivals += r.arrivals;
    agg.successes += r.successes;
    agg.drops_deadline += r.drops_deadline;
    agg.drops_retx += r.drops_retx;
    agg.drops_overflow += r.drops_overflow;
    agg.measured_slots += r.measured_slots;
  }

  agg.mean_throughput = sum_t / reps;
  agg.mean_drop_rate = sum_d / reps;
  if (reps > 1) {
    const double var_t =
        std::max(0.0, (sum_t2 - reps * agg.mean_throughput * agg.mean_throughput) / (reps - 1));
    const double var_d =
        std::max(0.0, (sum_d2 - reps * agg.mean_drop_rate * agg.mean_drop_rate) / (reps - 1));
    agg.se_throughput = std::sqrt(var_t / reps);
    agg.se_drop_rate = std::sqrt(var_d / reps);
  } else {
    agg.se_throughput = se_single_t;
    agg.se_drop_rate = se_single_d;
  }
  return agg;
}

}  // namespace aloha
