#ifndef ALOHA_CSV_HPP
#define ALOHA_CSV_HPP

#include <cstdint>
#include <string>

namespace aloha {

// Numeric CSV fields carry 12 significant digits.
std::string csv_number(double v);
std::string csv_number(std::uint64_t v);
std::string csv_number(int v);

// Fields containing commas (state labels) are double-quoted.
std::string csv_quote(const std::string& s);

}  // namespace aloha

#endif
