#ifndef ALOHA_SCENARIO_HPP
#define ALOHA_SCENARIO_HPP

namespace aloha {

// One operating point of the random-access system.
struct Scenario {
  int n_nodes = 2;      // N, nodes sharing the channel
  double q = 0.5;       // per-slot transmission probability of a backlogged node
  double lambda = 0.5;  // per-slot packet arrival probability at the tagged node
  int deadline = 3;     // D, slots a packet may spend in the system
  int retx = 2;         // n, retransmissions allowed after the first attempt
  int mpr_cap = 1;      // c, max concurrent transmissions the receiver can decode
  int buffer = 3;       // L, queue capacity in packets
  int backlogged = 2;   // b, nodes with nonempty queues assumed in the service model

  int attempts() const { return retx + 1; }

  void validate() const;  // throws std::invalid_argument on any violated bound

  bool operator==(const Scenario&) const = default;
};

}  // namespace aloha

#endif
