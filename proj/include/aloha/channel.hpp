#ifndef ALOHA_CHANNEL_HPP
#define ALOHA_CHANNEL_HPP

#include <span>
#include <vector>

namespace aloha {

// Physical-layer description of one transmitter as seen by the common
// receiver.  All fields are linear scale; powers are in mW.
struct ChannelParams {
  double gamma;  // capture threshold on the SINR
  double eta;    // noise power at the receiver, mW
  double ptx;    // transmit power, mW
  double v;      // mean of the exponential fading gain
  double r;      // transmitter-receiver distance, m
  double alpha;  // path-loss exponent
  double s;      // received power factor ptx * r^-alpha, mW

  static ChannelParams from_linear(double gamma, double eta, double ptx,
                                   double v, double r, double alpha);

  // Default evaluation setup: 0 dB threshold, -115.4 dBm noise floor,
  // 0.01 mW transmit power, unit fading, 100 m, path-loss exponent 4.5.
  static ChannelParams defaults();
};

double received_power_factor(double ptx, double r, double alpha);

// Probability that a lone transmission is decoded (Rayleigh fading,
// capture threshold gamma).
double success_prob_solo(const ChannelParams& p);

// Probability that the target transmission is decoded while the given
// interferers transmit in the same slot.
double success_prob_mpr(const ChannelParams& target,
                        std::span<const ChannelParams> interferers);

// p[k] = probability that the tagged transmission is decoded when k other
// nodes transmit concurrently.  Entries are nonincreasing in k.
struct SuccessTable {
  std::vector<double> p;

  // All nodes share the same ChannelParams: p[k] = p0 * (1 + gamma)^-k.
  static SuccessTable symmetric(const ChannelParams& params, int n_nodes);

  // User-supplied table; validates range and monotonicity.
  static SuccessTable from_values(std::vector<double> values);

  int size() const { return static_cast<int>(p.size()); }
};

}  // namespace aloha

#endif
