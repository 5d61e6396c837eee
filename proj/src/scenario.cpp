#include "aloha/scenario.hpp"

#include <stdexcept>
#include <string>

namespace aloha {

namespace {
[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("scenario: " + what);
}
}  // namespace

void Scenario::validate() const {
  if (n_nodes < 1) fail("N must be at least 1");
  if (!(q >= 0.0 && q <= 1.0)) fail("q must lie in [0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail("lambda must lie in [0, 1]");
  if (deadline < 1) fail("D must be at least 1");
  if (retx < 0) fail("n must be nonnegative");
  if (retx > deadline - 1) fail("n must not exceed D - 1");
  if (mpr_cap < 1) fail("c must be at least 1");
  if (mpr_cap > n_nodes) fail("c must not exceed N");
  if (buffer < deadline) fail("L must be at least D");
  if (backlogged < 1) fail("b must be at least 1");
  if (backlogged > n_nodes) fail("b must not exceed N");
}

}  // namespace aloha
