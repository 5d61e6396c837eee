#ifndef ALOHA_UNITS_HPP
#define ALOHA_UNITS_HPP

#include <cmath>

namespace aloha {

// dB-scale quantities are converted once at the boundary; everything
// downstream works on linear scale (mW for powers).

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

}  // namespace aloha

#endif
