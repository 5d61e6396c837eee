#ifndef ALOHA_SDP_HPP
#define ALOHA_SDP_HPP

#include <vector>

namespace aloha {

// Successful-delivery probability of a single packet that enters service
// with a fresh deadline: the chance it is decoded within `deadline` slots
// using at most `retx` retransmissions after the first attempt.
struct SdpQuery {
  double q;      // per-slot transmission probability, in (0, 1]
  double nu;     // success probability conditioned on transmitting
  int retx;      // allowed retransmissions, 0 <= retx <= max(deadline - 1, 0)
  int deadline;  // slots available, >= 0
};

// Closed form for retx = 0: nu * (1 - (1-q)^deadline).
double sdp_no_retx(const SdpQuery& query);

// General case via the first-attempt recursion.
double sdp(const SdpQuery& query);

// Memoized evaluator for many (retx, deadline) pairs at fixed (q, nu).
// The table is owned per instance, so separate instances can be used from
// separate threads.
class SdpSolver {
 public:
  SdpSolver(double q, double nu);

  double delivery_prob(int retx, int deadline);

 private:
  double q_;
  double nu_;
  std::vector<std::vector<double>> rows_;  // rows_[n][d], -1 = not computed

  double value(int n, int d);
};

}  // namespace aloha

#endif
