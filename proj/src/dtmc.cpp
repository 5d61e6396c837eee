#include "aloha/dtmc.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace aloha {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kIterTol = 1e-13;
constexpr long kMaxIters = 1000000;

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
}

// The departing head spent `age` slots in the system; the next head is the
// oldest packet that arrived during that window, j slots old with
// probability lambda (1-lambda)^(age-j), or the queue empties.
void add_handover(TransitionMatrix& m, int from, int age, double mass,
                  double lambda, const std::vector<int>& head_index) {
  for (int j = 1; j <= age; ++j)
    m.at(head_index[j], from) += mass * lambda * std::pow(1.0 - lambda, age - j);
  m.at(0, from) += mass * std::pow(1.0 - lambda, age);
}

std::optional<std::vector<double>> solve_direct(const TransitionMatrix& m) {
  const int n = m.n;
  // (M - I) pi = 0 with the last row replaced by the normalization sum pi = 1.
  std::vector<double> a(n * n);
  std::vector<double> b(n, 0.0);
  for (int to = 0; to < n; ++to)
    for (int from = 0; from < n; ++from)
      a[to * n + from] = m.at(to, from) - (to == from ? 1.0 : 0.0);
  for (int from = 0; from < n; ++from) a[(n - 1) * n + from] = 1.0;
  b[n - 1] = 1.0;

  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int row = col + 1; row < n; ++row)
      if (std::fabs(a[row * n + col]) > std::fabs(a[piv * n + col])) piv = row;
    if (std::fabs(a[piv * n + col]) < 1e-12) return std::nullopt;
    if (piv != col) {
      for (int k = col; k < n; ++k) std::swap(a[piv * n + k], a[col * n + k]);
      std::swap(b[piv], b[col]);
    }
    for (int row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (int k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
      b[row] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int row = n - 1; row >= 0; --row) {
    double s = b[row];
    for (int k = row + 1; k < n; ++k) s -= a[row * n + k] * x[k];
    x[row] = s / a[row * n + row];
  }
  for (double v : x)
    if (v < -1e-9) return std::nullopt;
  return x;
}

std::vector<double> power_iteration(const TransitionMatrix& m, long& iters) {
  const int n = m.n;
  std::vector<double> x(n, 1.0 / n), y(n);
  for (iters = 1; iters <= kMaxIters; ++iters) {
    // Half-step damping keeps periodic chains from oscillating.
    for (int to = 0; to < n; ++to) {
      double s = 0.0;
      for (int from = 0; from < n; ++from) s += m.at(to, from) * x[from];
      y[to] = 0.5 * x[to] + 0.5 * s;
    }
    double total = 0.0, delta = 0.0;
    for (int i = 0; i < n; ++i) {
      delta = std::max(delta, std::fabs(y[i] - x[i]));
      total += y[i];
    }
    for (int i = 0; i < n; ++i) x[i] = y[i] / total;
    if (delta < kIterTol) break;
  }
  return x;
}

}  // namespace

std::string ChainState::label() const {
  if (is_empty()) return "0";
  if (fails < 0) return std::to_string(age);
  return std::to_string(age) + "," + std::to_string(fails);
}

int limited_chain_state_count(int deadline, int retx) {
  return deadline * (retx + 1) + 1 - retx * (retx + 1) / 2;
}

MarkovModel build_full_retx_chain(double lambda, double mu, int deadline) {
  check_prob(lambda, "lambda");
  check_prob(mu, "mu");
  if (deadline < 1) throw std::invalid_argument("deadline must be at least 1");

  MarkovModel model;
  model.kind = ChainKind::full_retx;
  model.lambda = lambda;
  model.mu = mu;
  model.deadline = deadline;
  model.retx = deadline - 1;

  model.states.push_back(ChainState{});
  std::vector<int> head_index(deadline + 1, 0);
  for (int t = 1; t <= deadline; ++t) {
    head_index[t] = static_cast<int>(model.states.size());
    model.states.push_back(ChainState{t, -1});
  }

  model.m = TransitionMatrix(model.size());
  model.m.at(0, 0) = 1.0 - lambda;
  model.m.at(head_index[1], 0) = lambda;
  for (int t = 1; t <= deadline; ++t) {
    const int from = head_index[t];
    if (t < deadline) {
      model.m.at(head_index[t + 1], from) += 1.0 - mu;
      add_handover(model.m, from, t, mu, lambda, head_index);
    } else {
      // Departure is certain in the final slot: decoded or dropped, the
      // head leaves, so the whole column is handover mass.
      add_handover(model.m, from, t, 1.0, lambda, head_index);
    }
  }

  for (int t = 1; t <= deadline; ++t) model.success_states.push_back(head_index[t]);
  model.last_slot_states.push_back(head_index[deadline]);
  return model;
}

MarkovModel build_limited_retx_chain(double lambda, double mu, double q,
                                     int retx, int deadline) {
  check_prob(lambda, "lambda");
  check_prob(mu, "mu");
  check_prob(q, "q");
  if (deadline < 1) throw std::invalid_argument("deadline must be at least 1");
  if (retx < 0 || retx > deadline - 1)
    throw std::invalid_argument("retx must lie in [0, deadline - 1]");
  if (mu > q + 1e-12)
    throw std::domain_error("mu cannot exceed q: success requires a transmission");
  mu = std::min(mu, q);

  MarkovModel model;
  model.kind = ChainKind::limited_retx;
  model.lambda = lambda;
  model.mu = mu;
  model.q = q;
  model.deadline = deadline;
  model.retx = retx;

  model.states.push_back(ChainState{});
  std::vector<std::vector<int>> idx(deadline + 1);
  std::vector<int> head_index(deadline + 1, 0);  // (t, 0) states, handover targets
  for (int t = 1; t <= deadline; ++t) {
    idx[t].resize(std::min(retx, t - 1) + 1);
    for (int r = 0; r <= std::min(retx, t - 1); ++r) {
      idx[t][r] = static_cast<int>(model.states.size());
      model.states.push_back(ChainState{t, r});
    }
    head_index[t] = idx[t][0];
  }

  model.m = TransitionMatrix(model.size());
  model.m.at(0, 0) = 1.0 - lambda;
  model.m.at(head_index[1], 0) = lambda;
  for (int t = 1; t <= deadline; ++t) {
    for (int r = 0; r <= std::min(retx, t - 1); ++r) {
      const int from = idx[t][r];
      if (t == deadline) {
        add_handover(model.m, from, t, 1.0, lambda, head_index);
      } else if (r < retx) {
        model.m.at(idx[t + 1][r + 1], from) += q - mu;
        model.m.at(idx[t + 1][r], from) += 1.0 - q;
        add_handover(model.m, from, t, mu, lambda, head_index);
      } else {
        // Budget exhausted: one attempt remains, and failing it drops the
        // packet, so success and transmit-fail both clear the head.
        model.m.at(idx[t + 1][retx], from) += 1.0 - q;
        add_handover(model.m, from, t, q, lambda, head_index);
      }
    }
  }

  for (int i = 1; i < model.size(); ++i) model.success_states.push_back(i);
  for (int r = 0; r <= std::min(retx, deadline - 1); ++r)
    model.last_slot_states.push_back(idx[deadline][r]);
  for (int t = retx + 1; t < deadline; ++t)
    model.last_attempt_states.push_back(idx[t][retx]);
  return model;
}

SteadyState steady_state(const MarkovModel& model) {
  const int n = model.size();
  std::vector<char> seen(n, 0);
  std::vector<int> order;
  order.reserve(n);
  seen[0] = 1;
  order.push_back(0);
  for (std::size_t h = 0; h < order.size(); ++h) {
    const int from = order[h];
    for (int to = 0; to < n; ++to)
      if (!seen[to] && model.m.at(to, from) > 0.0) {
        seen[to] = 1;
        order.push_back(to);
      }
  }
  std::sort(order.begin(), order.end());

  const int k = static_cast<int>(order.size());
  TransitionMatrix reduced(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) reduced.at(i, j) = model.m.at(order[i], order[j]);

  SteadyState ss;
  std::vector<double> local;
  if (auto direct = solve_direct(reduced)) {
    local = std::move(*direct);
  } else {
    ss.direct = false;
    local = power_iteration(reduced, ss.iterations);
  }

  ss.pi.assign(n, 0.0);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    ss.pi[order[i]] = std::max(local[i], 0.0);
    total += ss.pi[order[i]];
  }
  for (double& v : ss.pi) v /= total;
  for (int i = 0; i < n; ++i)
    if (!seen[i]) ss.unreached.push_back(i);

  double residual = 0.0;
  for (int to = 0; to < n; ++to) {
    double s = 0.0;
    for (int from = 0; from < n; ++from) s += model.m.at(to, from) * ss.pi[from];
    residual = std::max(residual, std::fabs(s - ss.pi[to]));
  }
  if (residual >= kResidualTol)
    throw std::runtime_error("stationary distribution failed to converge");
  return ss;
}

double throughput(const MarkovModel& model, const SteadyState& ss) {
  double occupied = 0.0;
  for (int i : model.success_states) occupied += ss.pi[i];
  return model.mu * occupied;
}

double drop_rate(const MarkovModel& model, const SteadyState& ss) {
  double dr = 0.0;
  for (int i : model.last_slot_states) dr += (1.0 - model.mu) * ss.pi[i];
  for (int i : model.last_attempt_states) dr += (model.q - model.mu) * ss.pi[i];
  return dr;
}

AnalyticResult analyze(const Scenario& sc, const SuccessTable& table,
                       MarkovModel* out_model, SteadyState* out_ss) {
  const ServiceModel svc = service_prob(sc, table);
  MarkovModel model =
      sc.retx == sc.deadline - 1
          ? build_full_retx_chain(sc.lambda, svc.mu, sc.deadline)
          : build_limited_retx_chain(sc.lambda, svc.mu, sc.q, sc.retx, sc.deadline);
  const SteadyState ss = steady_state(model);

  AnalyticResult r;
  r.mu = svc.mu;
  r.nu = svc.nu;
  r.nu_defined = svc.nu_defined;
  r.throughput = throughput(model, ss);
  r.drop_rate = drop_rate(model, ss);
  r.n_states = model.size();
  r.reducible = !ss.unreached.empty();
  if (out_model) *out_model = std::move(model);
  if (out_ss) *out_ss = ss;
  return r;
}

namespace {

double objective_at(const Scenario& sc, const SuccessTable& table,
                    Objective objective, double q) {
  Scenario probe = sc;
  probe.q = q;
  const AnalyticResult r = analyze(probe, table);
  return objective == Objective::max_throughput ? r.throughput : -r.drop_rate;
}

}  // namespace

OptimizeResult optimize_q(const Scenario& sc, const SuccessTable& table,
                          Objective objective, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.5))
    throw std::invalid_argument("grid step must lie in (0, 0.5]");

  const int points = static_cast<int>(std::llround((1.0 - grid_step) / grid_step));
  double best_q = grid_step;
  double best_f = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= points; ++i) {
    const double q = i * grid_step;
    const double f = objective_at(sc, table, objective, q);
    if (f > best_f) {
      best_f = f;
      best_q = q;
    }
  }

  // Golden-section refinement inside the best point's grid cell.
  double lo = std::max(grid_step, best_q - grid_step);
  double hi = std::min(points * grid_step, best_q + grid_step);
  constexpr double invphi = 0.6180339887498949;
  if (hi - lo > 1e-4) {
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = objective_at(sc, table, objective, x1);
    double f2 = objective_at(sc, table, objective, x2);
    while (hi - lo > 1e-4) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + invphi * (hi - lo);
        f2 = objective_at(sc, table, objective, x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - invphi * (hi - lo);
        f1 = objective_at(sc, table, objective, x1);
      }
    }
    const double q_ref = 0.5 * (lo + hi);
    const double f_ref = objective_at(sc, table, objective, q_ref);
    if (f_ref > best_f || (f_ref == best_f && q_ref < best_q)) {
      best_q = q_ref;
      best_f = f_ref;
    }
  }

  OptimizeResult result;
  result.q_star = best_q;
  result.value = objective == Objective::max_throughput ? best_f : -best_f;
  return result;
}

}  // namespace aloha
