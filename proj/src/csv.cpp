#include "aloha/csv.hpp"

#include <cstdio>

namespace aloha {

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_number(std::uint64_t v) { return std::to_string(v); }

std::string csv_number(int v) { return std::to_string(v); }

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

}  // namespace aloha
