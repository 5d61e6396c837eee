#ifndef ALOHA_SIM_HPP
#define ALOHA_SIM_HPP

#include <cstdint>
#include <iosfwd>

#include "aloha/channel.hpp"
#include "aloha/scenario.hpp"

namespace aloha {

struct SimConfig {
  Scenario scenario;
  SuccessTable table;
  std::uint64_t slots = 100000;
  std::uint64_t warmup = 1000;  // slots excluded from the rate estimates
  std::uint64_t seed = 1;

  void validate() const;
};

struct SimResult {
  // Whole-run counters; arrivals = successes + drops + final_queue exactly.
  std::uint64_t arrivals = 0;
  std::uint64_t successes = 0;
  std::uint64_t drops_deadline = 0;
  std::uint64_t drops_retx = 0;
  std::uint64_t drops_overflow = 0;
  std::uint64_t final_queue = 0;

  // Post-warmup measurement window.
  std::uint64_t measured_slots = 0;
  std::uint64_t measured_successes = 0;
  std::uint64_t measured_drops = 0;

  double throughput = 0.0;  // successes per measured slot
  double drop_rate = 0.0;   // drops of any kind per measured slot
  double se_throughput = 0.0;
  double se_drop_rate = 0.0;
  double ci99_throughput = 0.0;  // 2.5758 * se
  double ci99_drop_rate = 0.0;

  std::uint64_t seed = 0;
};

// Runs the tagged queue slot by slot.  Per slot: the b-1 competitors draw
// transmissions, the tagged head transmits with probability q, the channel
// decodes it when at most c nodes transmitted (probability table[k-1]),
// retransmission-exhausted heads drop, every packet ages with deadline
// expiry, and finally a Bernoulli(lambda) arrival joins the tail (discarded
// if the buffer is full).  Deterministic for a fixed seed; the draw order
// above is part of the contract.  `trace` (optional) receives one CSV line
// per slot.
SimResult run_simulation(const SimConfig& config, std::ostream* trace = nullptr);

struct ReplicationResult {
  int reps = 1;
  double mean_throughput = 0.0;
  double mean_drop_rate = 0.0;
  double se_throughput = 0.0;  // across replications when reps > 1
  double se_drop_rate = 0.0;

  // Counters summed across replications.
  std::uint64_t arrivals = 0;
  std::uint64_t successes = 0;
  std::uint64_t drops_deadline = 0;
  std::uint64_t drops_retx = 0;
  std::uint64_t drops_overflow = 0;
  std::uint64_t measured_slots = 0;
};

// Replication i runs with seed = config.seed xor i * 0x9E3779B97F4A7C15,
// so reps = 1 reproduces run_simulation exactly.
ReplicationResult run_replications(const SimConfig& config, int reps);

}  // namespace aloha

#endif
