#include "opshare/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace opshare {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double dbm_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }

double watts_to_dbm(double watts) { return linear_to_db(watts) + 30.0; }

const char* to_string(RateUnit unit) { return unit == RateUnit::bits ? "bits" : "nats"; }

RateUnit parse_rate_unit(const char* text) {
  const std::string_view s{text};
  if (s == "bits") return RateUnit::bits;
  if (s == "nats") return RateUnit::nats;
  throw std::invalid_argument("unknown rate unit '" + std::string{s} + "' (expected nats or bits)");
}

}  // namespace opshare
