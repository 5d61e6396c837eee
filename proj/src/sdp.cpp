#include "aloha/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aloha {

namespace {
void check(const SdpQuery& query) {
  if (!(query.q > 0.0 && query.q <= 1.0))
    throw std::invalid_argument("q must lie in (0, 1]");
  if (!(query.nu >= 0.0 && query.nu <= 1.0))
    throw std::invalid_argument("nu must lie in [0, 1]");
  if (query.deadline < 0) throw std::invalid_argument("deadline must be nonnegative");
  if (query.retx < 0 || query.retx > std::max(query.deadline - 1, 0))
    throw std::invalid_argument("retx must lie in [0, max(deadline - 1, 0)]");
}
}  // namespace

double sdp_no_retx(const SdpQuery& query) {
  check(query);
  if (query.retx != 0) throw std::invalid_argument("sdp_no_retx requires retx = 0");
  if (query.deadline == 0) return 0.0;
  return query.nu * (1.0 - std::pow(1.0 - query.q, query.deadline));
}

double sdp(const SdpQuery& query) {
  check(query);
  return SdpSolver(query.q, query.nu).delivery_prob(query.retx, query.deadline);
}

SdpSolver::SdpSolver(double q, double nu) : q_(q), nu_(nu) {
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in (0, 1]");
  if (!(nu >= 0.0 && nu <= 1.0)) throw std::invalid_argument("nu must lie in [0, 1]");
}

double SdpSolver::delivery_prob(int retx, int deadline) {
  if (deadline < 0) throw std::invalid_argument("deadline must be nonnegative");
  if (retx < 0 || retx > std::max(deadline - 1, 0))
    throw std::invalid_argument("retx must lie in [0, max(deadline - 1, 0)]");

  if (rows_.size() < static_cast<std::size_t>(retx) + 1)
    rows_.resize(retx + 1);
  for (int nn = 0; nn <= retx; ++nn) {
    auto& row = rows_[nn];
    const int have = static_cast<int>(row.size());
    if (have > deadline) continue;
    row.resize(deadline + 1);
    for (int d = std::max(have, 0); d <= deadline; ++d) row[d] = value(nn, d);
  }
  return rows_[retx][deadline];
}

// First transmission in slot k (probability (1-q)^(k-1) q) either succeeds
// outright or leaves a packet with one fewer retransmission and d - k slots.
double SdpSolver::value(int n, int d) {
  if (d == 0) return 0.0;
  double sum = 0.0;
  double w = q_;  // (1-q)^(k-1) q
  for (int k = 1; k <= d; ++k) {
    const double cont = n > 0 ? rows_[n - 1][d - k] : 0.0;
    sum += w * (nu_ + (1.0 - nu_) * cont);
    w *= 1.0 - q_;
  }
  return sum;
}

}  // namespace aloha
