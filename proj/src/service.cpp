#include "aloha/service.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aloha {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 64) {
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
      r *= static_cast<unsigned>(n - k + i);
      r /= static_cast<unsigned>(i);  // exact: r is C(n-k+i, i) after each step
    }
    return static_cast<double>(static_cast<unsigned long long>(r));
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

ServiceModel service_prob(const Scenario& sc, const SuccessTable& table) {
  sc.validate();
  const int b = sc.backlogged;
  if (table.size() < b)
    throw std::invalid_argument("success table needs an entry per possible contender count");

  const double q = sc.q;
  double mu = 0.0;
  const int kmax = std::min(sc.mpr_cap, b);
  for (int k = 1; k <= kmax; ++k)
    mu += binomial(b - 1, k - 1) * table.p[k - 1] * std::pow(q, k) *
          std::pow(1.0 - q, b - k);

  ServiceModel m;
  m.mu = std::min(mu, q);  // mu <= q structurally; clamp rounding noise
  if (q > 0.0) {
    m.nu = m.mu / q;
    m.nu_defined = true;
  }
  return m;
}

}  // namespace aloha
