#include "aloha/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "aloha/units.hpp"

namespace aloha {

double received_power_factor(double ptx, double r, double alpha) {
  if (!(ptx > 0.0)) throw std::domain_error("transmit power must be positive");
  if (!(r > 0.0)) throw std::domain_error("distance must be positive");
  return ptx * std::pow(r, -alpha);
}

ChannelParams ChannelParams::from_linear(double gamma, double eta, double ptx,
                                         double v, double r, double alpha) {
  if (!(gamma > 0.0)) throw std::domain_error("capture threshold must be positive");
  if (!(eta >= 0.0)) throw std::domain_error("noise power must be nonnegative");
  if (!(v > 0.0)) throw std::domain_error("fading scale must be positive");
  if (!(alpha >= 2.0)) throw std::domain_error("path-loss exponent must be at least 2");
  return ChannelParams{gamma, eta, ptx, v, r, alpha,
                       received_power_factor(ptx, r, alpha)};
}

ChannelParams ChannelParams::defaults() {
  return from_linear(db_to_linear(0.0), dbm_to_mw(-115.4), 0.01, 1.0, 100.0, 4.5);
}

double success_prob_solo(const ChannelParams& p) {
  return std::exp(-p.gamma * p.eta / (p.v * p.s));
}

double success_prob_mpr(const ChannelParams& target,
                        std::span<const ChannelParams> interferers) {
  double denom = 1.0;
  for (const ChannelParams& k : interferers)
    denom *= 1.0 + target.gamma * (k.v * k.s) / (target.v * target.s);
  return std::exp(-target.gamma * target.eta / (target.v * target.s)) / denom;
}

SuccessTable SuccessTable::symmetric(const ChannelParams& params, int n_nodes) {
  if (n_nodes < 1) throw std::invalid_argument("need at least one node");
  const double p0 = success_prob_solo(params);
  std::vector<double> p(n_nodes);
  for (int k = 0; k < n_nodes; ++k) p[k] = p0 * std::pow(1.0 + params.gamma, -k);
  return SuccessTable{std::move(p)};
}

SuccessTable SuccessTable::from_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("success table must not be empty");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] >= 0.0 && values[k] <= 1.0))
      throw std::invalid_argument("success probabilities must lie in [0, 1]");
    if (k > 0 && values[k] > values[k - 1])
      throw std::invalid_argument("success probabilities must be nonincreasing");
  }
  return SuccessTable{std::move(values)};
}

}  // namespace aloha
