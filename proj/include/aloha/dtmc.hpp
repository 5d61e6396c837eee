#ifndef ALOHA_DTMC_HPP
#define ALOHA_DTMC_HPP

#include <limits>
#include <string>
#include <vector>

#include "aloha/service.hpp"

namespace aloha {

// Head-of-line state of the tagged queue at the start of a slot.
// age = 0 marks the empty queue; otherwise age = slots the head packet has
// spent in the system and fails = failed attempts so far (-1 when the chain
// does not track attempts, i.e. the full-retransmission regime).
struct ChainState {
  int age = 0;
  int fails = -1;

  bool is_empty() const { return age == 0; }
  std::string label() const;
};

enum class ChainKind { full_retx, limited_retx };

// Square column-stochastic matrix, entry(to, from).
struct TransitionMatrix {
  int n = 0;
  std::vector<double> a;

  explicit TransitionMatrix(int size = 0) : n(size), a(size * size, 0.0) {}
  double& at(int to, int from) { return a[to * n + from]; }
  double at(int to, int from) const { return a[to * n + from]; }
};

struct MarkovModel {
  ChainKind kind = ChainKind::full_retx;
  std::vector<ChainState> states;  // empty state first, then (t, r) ascending
  TransitionMatrix m;
  std::vector<int> success_states;       // heads that may still be decoded
  std::vector<int> last_slot_states;     // heads facing their final slot
  std::vector<int> last_attempt_states;  // heads whose next failed attempt drops them
  double lambda = 0.0;
  double mu = 0.0;
  double q = std::numeric_limits<double>::quiet_NaN();  // unused by full_retx
  int deadline = 0;
  int retx = 0;

  int size() const { return static_cast<int>(states.size()); }
};

// Number of states of the limited-retransmission chain including the
// empty state: D(n+1) + 1 - n(n+1)/2.
int limited_chain_state_count(int deadline, int retx);

// Chain over head-of-line age alone; the retransmission budget never binds
// (n = D - 1).  From age t < D the head advances on failure and hands over
// on success; from age D it leaves the system either way, so the final
// column carries total mass 1 split over next-head ages.
MarkovModel build_full_retx_chain(double lambda, double mu, int deadline);

// Chain over (age, fails).  Requires mu <= q: a slot splits into success
// (mu), transmit-and-fail (q - mu) and idle (1 - q).
MarkovModel build_limited_retx_chain(double lambda, double mu, double q,
                                     int retx, int deadline);

struct SteadyState {
  std::vector<double> pi;
  std::vector<int> unreached;  // states not reachable from the empty state
  bool direct = true;          // false when the power-iteration fallback ran
  long iterations = 0;
};

// Stationary distribution restricted to the states reachable from the
// empty state; unreachable states get pi = 0 and are flagged.
SteadyState steady_state(const MarkovModel& model);

double throughput(const MarkovModel& model, const SteadyState& ss);
double drop_rate(const MarkovModel& model, const SteadyState& ss);

struct AnalyticResult {
  double mu = 0.0;
  double nu = 0.0;
  bool nu_defined = false;
  double throughput = 0.0;
  double drop_rate = 0.0;
  int n_states = 0;
  bool reducible = false;  // some states were unreachable
};

// Service model + the matching chain (full when retx = D - 1) + solve.
AnalyticResult analyze(const Scenario& sc, const SuccessTable& table,
                       MarkovModel* out_model = nullptr,
                       SteadyState* out_ss = nullptr);

enum class Objective { max_throughput, min_drop_rate };

struct OptimizeResult {
  double q_star = 0.0;
  double value = 0.0;  // throughput or drop rate at q_star
};

// Scans q over {step, 2 step, ..., 1 - step} recomputing mu each time, then
// refines around the best grid point by golden-section search (width 1e-4).
// Ties prefer the smaller q.
OptimizeResult optimize_q(const Scenario& sc, const SuccessTable& table,
                          Objective objective, double grid_step);

}  // namespace aloha

#endif
