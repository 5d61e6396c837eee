#ifndef ALOHA_SERVICE_HPP
#define ALOHA_SERVICE_HPP

#include "aloha/channel.hpp"
#include "aloha/scenario.hpp"

namespace aloha {

// Per-slot service view of the tagged node.  mu is the unconditional
// probability that a queued head-of-line packet leaves in a given slot;
// nu = mu / q is the success probability conditioned on transmitting.
struct ServiceModel {
  double mu = 0.0;
  double nu = 0.0;
  bool nu_defined = false;  // false when q = 0
};

// C(n, k).  Exact integer arithmetic up to n = 64, log-gamma beyond.
double binomial(int n, int k);

// mu = sum over k = 1..min(c, b) of C(b-1, k-1) p[k-1] q^k (1-q)^(b-k):
// the tagged node transmits together with k-1 of the b-1 other backlogged
// nodes and the receiver decodes it among k concurrent transmissions.
// Requires table.size() >= b.
ServiceModel service_prob(const Scenario& sc, const SuccessTable& table);

}  // namespace aloha

#endif
